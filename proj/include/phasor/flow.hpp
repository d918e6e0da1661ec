#pragma once

#include <optional>
#include <span>
#include <vector>

#include "phasor/analysis.hpp"
#include "phasor/expr.hpp"
#include "phasor/image.hpp"

namespace phasor::flow {

struct StagnationError : Error {
    using Error::Error;
};
struct SeedClassificationError : Error {
    using Error::Error;
};
struct BoundViolationError : Error {
    using Error::Error;
};

// The plane system  dz/dt = f(z) conj(f'(z)) / (|f(z)|^2 + |f'(z)|^2).
// Its non-fixed orbits are the isochromatic lines of the phase plot; the
// field extends smoothly by 0 over zeros and poles and satisfies |g| <= 1/2.
class FlowSystem {
public:
    explicit FlowSystem(expr::ExprAst f)
        : f_(std::move(f)), fprime_(expr::differentiate(f_)) {}

    cplx field(cplx z) const;
    const expr::ExprAst& f() const { return f_; }
    const expr::ExprAst& fprime() const { return fprime_; }

private:
    expr::ExprAst f_;
    expr::ExprAst fprime_;
};

struct FixedPoint {
    cplx location;
    analysis::SingularityKind kind;
    int order = 1;
    double capture_radius = 1e-6;
};

struct Domain {
    analysis::RectBounds rect{-2.0, 2.0, -2.0, 2.0};
    std::optional<double> disk_radius;  // additionally stop at |z| >= radius

    bool contains(cplx z) const {
        if (disk_radius && std::abs(z) >= *disk_radius) return false;
        return z.real() >= rect.xmin && z.real() <= rect.xmax && z.imag() >= rect.ymin &&
               z.imag() <= rect.ymax;
    }
};

enum class OrbitEnd { ReachedZero, ReachedPole, ReachedSaddle, ExitedDomain, StepLimit };

struct Orbit {
    std::vector<cplx> points;
    OrbitEnd termination = OrbitEnd::StepLimit;
    int fixed_index = -1;  // index into the fixed-point list for Reached* endings
};

struct OrbitOptions {
    double step_tol = 1e-9;
    double min_step = 1e-6;
    double max_step = 0.05;
    long max_steps = 1000000;
    // phase-drift correction cadence; transverse error grows exponentially
    // while escaping a saddle, so correct after every step (0 disables)
    int reproject_every = 1;
};

// Adaptive RK4 along the (possibly reversed) phase flow. Terminates on
// entering a fixed point's capture ball, leaving the domain (disk exits are
// refined onto the circle), or the step budget.
Orbit integrate_orbit(const FlowSystem& sys, cplx start, bool reversed, const Domain& domain,
                      std::span<const FixedPoint> fixed_points, const OrbitOptions& opts = {});

// Zeros, poles and color saddles of f in one report.
analysis::SingularityReport classify_fixed_points(const expr::ExprAst& f,
                                                  const analysis::RectBounds& rect);

// The alpha+1 outgoing rays of a saddle's unstable manifold, integrated
// forward until they leave the domain.
std::vector<Orbit> unstable_manifolds(const FlowSystem& sys, const FixedPoint& saddle,
                                      const Domain& domain);

struct BasinDecomposition {
    explicit BasinDecomposition(FlowSystem sys) : system(std::move(sys)) {}

    FlowSystem system;
    std::vector<expr::BlaschkeZero> zeros;  // distinct zeros b_j with multiplicities
    std::vector<FixedPoint> saddles;        // a_j with orders alpha_j
    std::vector<Orbit> manifolds;
    std::vector<double> separating_turns;   // sorted angles in turns, empty when k = 0

    struct Arc {
        double start_turn, end_turn;  // end may exceed 1 for the wrapping arc
        int zero_index;
    };
    std::vector<Arc> arcs;  // counterclockwise, starting at the arc containing turn 0

    render::Frame grid;
    std::vector<int> labels;  // zero index per pixel; -1 exterior, -2 undecided

    // basin membership by reversed-flow integration
    int label_point(cplx z) const;

    std::string to_text() const;  // ZEROS / SADDLES / SEPARATING_POINTS / SEQUENCE

    std::vector<FixedPoint> capture_points;  // zeros + saddles used by labeling
};

struct BasinOptions {
    int threads = 0;
    double label_step_tol = 1e-7;  // labeling needs speed more than precision
};

// Full basin decomposition of a finite Blaschke product: saddles, unstable
// manifolds, separating points, arcs, grid labels. Checks the sum rule
// sum(alpha) = m-1 and the arc-count bounds m <= s <= m+k-1.
BasinDecomposition basin_decomposition(std::span<const expr::BlaschkeZero> zeros, cplx c,
                                       const render::Frame& grid, const BasinOptions& = {});

struct StructureSequence {
    std::vector<int> seq;  // 1-based zero indices, one per arc
};

// Arc owners renumbered by first appearance and rotated to the smallest
// lexicographic rotation.
StructureSequence structure_sequence(const BasinDecomposition& decomp);

// Signed phase transport through equal-parameter bins of a closed curve;
// the weights sum to the chromatic number of the curve.
std::vector<double> boundary_phase_measure(const expr::ExprAst& f,
                                           const analysis::PathPolyline& curve, int bins);

}  // namespace phasor::flow
