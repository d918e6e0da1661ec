#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phasor/errors.hpp"
#include "phasor/expr.hpp"

namespace phasor::analysis {

struct SingularOnPathError : Error {
    using Error::Error;
};
struct RefinementExhaustedError : Error {
    using Error::Error;
};
struct SingularPointError : Error {
    using Error::Error;
};
struct TooFewValidSamplesError : Error {
    using Error::Error;
};

struct RectBounds {
    double xmin, xmax, ymin, ymax;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

struct PathPolyline {
    std::vector<cplx> vertices;
    bool closed = true;
};

PathPolyline rect_path(const RectBounds& rect);                  // counterclockwise
PathPolyline circle_path(cplx center, double radius, int segments);

struct ChromaticResult {
    int winding = 0;
    long samples_used = 0;
    double max_phase_step = 0.0;  // < pi/2 on success
};

// Continuous argument of f along a parametrized curve, sampled adaptively
// until every phase increment is below pi/2. Singular samples are nudged
// along the curve; if that fails, SingularOnPathError.
struct SampledLift {
    std::vector<double> params;  // increasing
    std::vector<double> lift;    // continuous argument values, same length
    double max_step = 0.0;
    double total_variation = 0.0;  // sum of |increments|
};
SampledLift lift_along(const expr::ExprAst& f, const std::function<cplx(double)>& curve,
                       std::span<const double> seed_params, int max_depth = 20);

// Winding of the phase along a closed path: the chromatic number.
ChromaticResult chromatic_number(const expr::ExprAst& f, const PathPolyline& path);

// Argument principle: zeros minus poles (with multiplicity) inside the
// rectangle. Requires a holomorphy-flagged (meromorphic) expression.
int count_zeros_poles(const expr::ExprAst& f, const RectBounds& rect);

enum class SingularityKind { Zero, Pole, Saddle };

struct Singularity {
    cplx location;
    SingularityKind kind;
    int order;
    double box_radius;
};

struct SingularityReport {
    std::vector<Singularity> entries;
    int net_count = 0;  // sum of zero orders minus sum of pole orders
    std::vector<std::string> warnings;

    // one line per entry: "kind re im order box_radius", then "net N"
    std::string to_text() const;
};

// Quadtree subdivision by chromatic number. Boxes whose boundary hits a
// singularity are nudged by 1e-3 * side (at most 5 attempts).
SingularityReport localize_singularities(const expr::ExprAst& f, const RectBounds& rect,
                                         double min_box);

// |f'(z)/f(z)|, the density of isochromatic lines at z.
double log_derivative_density(const expr::ExprAst& f, cplx z);

// Zeros of f' where f itself does not vanish; the phase plot shows 2k+2
// isochromatic rays at a saddle of order k.
SingularityReport find_saddles(const expr::ExprAst& f, const RectBounds& rect,
                               double min_box = 1e-6);

// For each radius, the number of points on |z - z0| = r where the phase of
// f equals color_phase. Growing counts as r shrinks indicate an essential
// singularity; a pole or zero of order k gives a constant count k.
std::vector<std::pair<double, int>> essential_probe(const expr::ExprAst& f, cplx z0,
                                                    cplx color_phase,
                                                    std::span<const double> radii);

struct PeriodTestResult {
    bool periodic = false;
    double alpha = 0.0;  // f(z+p)/f(z) = e^alpha when periodic
};

// Tests whether the phase of f has period p: the ratio f(z+p)/f(z) must be
// one positive constant over a 16x16 probe grid.
PeriodTestResult phase_period_test(const expr::ExprAst& f, cplx p, const RectBounds& probe);

struct PeriodicityClass {
    enum class Type { Striped, SimplyPeriodicPhase, DoublyPeriodic, Aperiodic };
    Type type = Type::Aperiodic;
    cplx a{}, b{};            // striped: f = e^{az+b}
    cplx p1{}, p2{};          // detected periods
    double alpha1 = 0.0, alpha2 = 0.0;
};

PeriodicityClass classify_periodicity(const expr::ExprAst& f, std::span<const cplx> candidates,
                                      const RectBounds& probe);

// Degree-n partial sum 1 + z + ... + z^n of the geometric series.
expr::ExprAst geometric_partial_sum(int degree);

// Polynomial with the given coefficients, constant term first.
expr::ExprAst polynomial_from_coefficients(std::span<const cplx> coefficients);

}  // namespace phasor::analysis
