#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "phasor/expr.hpp"
#include "phasor/image.hpp"

namespace phasor::boundary {

struct DiscontinuousColoringError : Error {
    using Error::Error;
};
struct NonzeroChromaticNumberError : Error {
    using Error::Error;
};
struct ChromaticMismatchError : Error {
    using Error::Error;
};
struct LocationOnBoundaryError : Error {
    using Error::Error;
};

// A continuous coloring of the unit circle given by N equispaced unimodular
// samples B(e^{2 pi i k/N}); N is a power of two >= 64.
struct BoundaryColoring {
    std::vector<cplx> samples;
};

// Validates sample count, unimodularity (1e-12) and the continuity proxy
// (adjacent phase gaps below pi/2).
void validate(const BoundaryColoring& coloring);

// Sample the phase of an expression along the unit circle.
BoundaryColoring boundary_from_function(const expr::ExprAst& f, int samples);

// File format: first line N, then N lines "re im".
BoundaryColoring load_coloring(std::istream& in);
void save_coloring(const BoundaryColoring& coloring, std::ostream& out);

// Winding of the phase samples; exact integer.
int chrom_of_coloring(const BoundaryColoring& coloring);

struct PrescribedSingularity {
    cplx location;
    int order = 1;
};

// The reconstructed analytic phase plot: harmonic argument coefficients
// plus optional Blaschke-type factors for prescribed zeros and poles.
class DiskColoring {
public:
    // e^{i Phi(z)} times the phase of the singular factor; undefined on
    // |z| > 1 and at prescribed singularities
    ExtendedComplex phase_at(cplx z) const;

    // the analytic witness f = e^{i Phi - Psi} (times the factor); its
    // phase is phase_at
    ExtendedComplex f_at(cplx z) const;

    // phase sampled over the grid; exterior pixels are undefined
    render::Image rasterize(const color::ColorScheme& scheme) const;
    const render::Frame& grid() const { return grid_; }

private:
    friend DiskColoring extend_analytic(const BoundaryColoring&, const render::Frame&);
    friend DiskColoring extend_with_singularities(const BoundaryColoring&,
                                                  std::span<const PrescribedSingularity>,
                                                  std::span<const PrescribedSingularity>,
                                                  const render::Frame&);

    render::Frame grid_;
    double mean_ = 0.0;                    // a_0 of the argument series
    std::vector<double> cos_coeff_;        // a_n, n = 1 .. N/2
    std::vector<double> sin_coeff_;        // b_n (b_{N/2} = 0)
    std::vector<PrescribedSingularity> zeros_, poles_;

    // harmonic argument and its conjugate at r e^{i theta}, r <= 1
    double arg_series(double r, double theta) const;
    double conj_series(double r, double theta) const;
    cplx factor_at(cplx z) const;  // Blaschke-type factor of the prescriptions
};

// Theorem-3 solver: the coloring extends to an analytic phase plot iff its
// chromatic number vanishes; the extension is unique. Throws
// NonzeroChromaticNumberError otherwise.
DiskColoring extend_analytic(const BoundaryColoring& coloring, const render::Frame& grid);

// Generalized problem: chrom B must equal the prescribed zero order total
// minus the pole order total (ChromaticMismatchError otherwise); locations
// must lie strictly inside the disk.
DiskColoring extend_with_singularities(const BoundaryColoring& coloring,
                                       std::span<const PrescribedSingularity> zeros,
                                       std::span<const PrescribedSingularity> poles,
                                       const render::Frame& grid);

}  // namespace phasor::boundary
