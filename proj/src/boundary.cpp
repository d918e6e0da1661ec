#include "phasor/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "phasor/render.hpp"

namespace phasor::boundary {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

bool power_of_two(std::size_t n) { return n && (n & (n - 1)) == 0; }
}  // namespace

void validate(const BoundaryColoring& coloring) {
    const std::size_t n = coloring.samples.size();
    if (n < 64 || !power_of_two(n))
        throw Error("boundary coloring needs a power-of-two sample count >= 64");
    for (const cplx& s : coloring.samples)
        if (std::abs(std::abs(s) - 1.0) > 1e-12)
            throw Error("boundary coloring samples must be unimodular");
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = coloring.samples[k];
        const cplx b = coloring.samples[(k + 1) % n];
        if (std::abs(std::remainder(std::arg(b) - std::arg(a), kTwoPi)) >= kPi / 2.0)
            throw DiscontinuousColoringError(
                "adjacent boundary samples jump by pi/2 or more");
    }
}

BoundaryColoring boundary_from_function(const expr::ExprAst& f, int samples) {
    BoundaryColoring coloring;
    coloring.samples.reserve(std::size_t(samples));
    for (int k = 0; k < samples; ++k) {
        const cplx z = std::polar(1.0, kTwoPi * k / samples);
        const ExtendedComplex w = expr::eval(f, z);
        if (!w.is_finite() || w.is_zero())
            throw Error("function is singular on the unit circle");
        coloring.samples.push_back(w.value() / std::abs(w.value()));
    }
    return coloring;
}

BoundaryColoring load_coloring(std::istream& in) {
    std::size_t n = 0;
    in >> n;
    if (!in || n == 0) throw Error("bad boundary coloring file: missing sample count");
    BoundaryColoring coloring;
    coloring.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        in >> re >> im;
        if (!in) throw Error("bad boundary coloring file: truncated samples");
        coloring.samples.push_back(cplx(re, im));
    }
    validate(coloring);
    return coloring;
}

void save_coloring(const BoundaryColoring& coloring, std::ostream& out) {
    out << coloring.samples.size() << '\n';
    char line[80];
    for (const cplx& s : coloring.samples) {
        std::snprintf(line, sizeof line, "%.17g %.17g\n", s.real(), s.imag());
        out << line;
    }
}

int chrom_of_coloring(const BoundaryColoring& coloring) {
    validate(coloring);
    const std::size_t n = coloring.samples.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = coloring.samples[k];
        const cplx b = coloring.samples[(k + 1) % n];
        total += std::remainder(std::arg(b) - std::arg(a), kTwoPi);
    }
    return int(std::lround(total / kTwoPi));
}

// ---------------------------------------------------------------------------

namespace {

// lifted argument of the samples, anchored at Arg(B_0)
std::vector<double> lift_samples(const BoundaryColoring& coloring) {
    std::vector<double> phi;
    phi.reserve(coloring.samples.size());
    phi.push_back(std::arg(coloring.samples[0]));
    for (std::size_t k = 1; k < coloring.samples.size(); ++k) {
        const double step = std::remainder(
            std::arg(coloring.samples[k]) - std::arg(coloring.samples[k - 1]), kTwoPi);
        phi.push_back(phi.back() + step);
    }
    return phi;
}

}  // namespace

double DiskColoring::arg_series(double r, double theta) const {
    double acc = mean_;
    const cplx rot = std::polar(1.0, theta);
    cplx e = rot;      // e^{i n theta}
    double rn = r;     // r^n
    const std::size_t half = cos_coeff_.size();  // N/2 terms
    for (std::size_t n = 1; n <= half; ++n) {
        acc += rn * (cos_coeff_[n - 1] * e.real() + sin_coeff_[n - 1] * e.imag());
        e *= rot;
        rn *= r;
    }
    return acc;
}

double DiskColoring::conj_series(double r, double theta) const {
    double acc = 0.0;
    const cplx rot = std::polar(1.0, theta);
    cplx e = rot;
    double rn = r;
    const std::size_t half = cos_coeff_.size();
    for (std::size_t n = 1; n <= half; ++n) {
        acc += rn * (cos_coeff_[n - 1] * e.imag() - sin_coeff_[n - 1] * e.real());
        e *= rot;
        rn *= r;
    }
    return acc;
}

cplx DiskColoring::factor_at(cplx z) const {
    cplx m(1.0, 0.0);
    for (const auto& s : zeros_) {
        const cplx b = (z - s.location) / (1.0 - std::conj(s.location) * z);
        for (int k = 0; k < s.order; ++k) m *= b;
    }
    for (const auto& s : poles_) {
        const cplx b = (z - s.location) / (1.0 - std::conj(s.location) * z);
        for (int k = 0; k < s.order; ++k) m /= b;
    }
    return m;
}

ExtendedComplex DiskColoring::phase_at(cplx z) const {
    const double r = std::abs(z);
    if (r > 1.0) return ExtendedComplex::undefined();
    const double theta = std::arg(z);
    cplx phase = std::polar(1.0, arg_series(r, theta));
    if (!zeros_.empty() || !poles_.empty()) {
        const cplx m = factor_at(z);
        if (m == cplx(0.0, 0.0)) return ExtendedComplex(cplx(0.0, 0.0));
        if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
            return ExtendedComplex::infinity();
        phase *= m / std::abs(m);
    }
    return ExtendedComplex(phase);
}

ExtendedComplex DiskColoring::f_at(cplx z) const {
    const double r = std::abs(z);
    if (r > 1.0) return ExtendedComplex::undefined();
    const double theta = std::arg(z);
    const cplx core = std::exp(cplx(-conj_series(r, theta), arg_series(r, theta)));
    if (zeros_.empty() && poles_.empty()) return ExtendedComplex(core);
    return ExtendedComplex(core) * ExtendedComplex(factor_at(z));
}

render::Image DiskColoring::rasterize(const color::ColorScheme& scheme) const {
    render::Image img;
    img.width = grid_.xres;
    img.height = grid_.yres;
    img.pixels.resize(std::size_t(grid_.xres) * grid_.yres);
    render::parallel_chunks(grid_.yres, 0, [&](long r0, long r1) {
        for (long row = r0; row < r1; ++row)
            for (int col = 0; col < grid_.xres; ++col)
                img.at(col, int(row)) =
                    color::scheme_apply(scheme, phase_at(grid_.pixel_center(col, int(row))));
    });
    return img;
}

DiskColoring extend_analytic(const BoundaryColoring& coloring, const render::Frame& grid) {
    validate(coloring);
    if (chrom_of_coloring(coloring) != 0)
        throw NonzeroChromaticNumberError(
            "nonzero chromatic number: no continuous analytic extension exists");

    const std::size_t n = coloring.samples.size();
    const std::vector<double> phi = lift_samples(coloring);

    DiskColoring out;
    out.grid_ = grid;
    out.mean_ = 0.0;
    for (double v : phi) out.mean_ += v;
    out.mean_ /= double(n);

    const std::size_t half = n / 2;
    out.cos_coeff_.assign(half, 0.0);
    out.sin_coeff_.assign(half, 0.0);
    for (std::size_t m = 1; m <= half; ++m) {
        double ac = 0.0, as = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = kTwoPi * double(m * k % n) / double(n);
            ac += phi[k] * std::cos(t);
            as += phi[k] * std::sin(t);
        }
        const double w = (m == half) ? 1.0 / double(n) : 2.0 / double(n);
        out.cos_coeff_[m - 1] = w * ac;
        out.sin_coeff_[m - 1] = (m == half) ? 0.0 : w * as;
    }
    return out;
}

DiskColoring extend_with_singularities(const BoundaryColoring& coloring,
                                       std::span<const PrescribedSingularity> zeros,
                                       std::span<const PrescribedSingularity> poles,
                                       const render::Frame& grid) {
    validate(coloring);
    int prescribed = 0;
    auto check = [&](const PrescribedSingularity& s) {
        if (s.order < 1) throw Error("singularity orders must be positive");
        if (std::abs(s.location) >= 1.0 - 1e-9)
            throw LocationOnBoundaryError("prescribed singularity must lie inside the disk");
    };
    for (const auto& s : zeros) {
        check(s);
        prescribed += s.order;
    }
    for (const auto& s : poles) {
        check(s);
        prescribed -= s.order;
    }
    if (chrom_of_coloring(coloring) != prescribed)
        throw ChromaticMismatchError(
            "chrom B must equal the zero order total minus the pole order total");

    // divide out the boundary phase of the Blaschke-type factor, solve the
    // chromatic-zero problem, then multiply the factor's phase back in
    DiskColoring shape;  // only for factor_at
    shape.zeros_.assign(zeros.begin(), zeros.end());
    shape.poles_.assign(poles.begin(), poles.end());

    const std::size_t n = coloring.samples.size();
    BoundaryColoring reduced;
    reduced.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx z = std::polar(1.0, kTwoPi * double(k) / double(n));
        const cplx m = shape.factor_at(z);
        reduced.samples.push_back(coloring.samples[k] / (m / std::abs(m)));
    }
    DiskColoring out = extend_analytic(reduced, grid);
    out.zeros_.assign(zeros.begin(), zeros.end());
    out.poles_.assign(poles.begin(), poles.end());
    return out;
}

}  // namespace phasor::boundary
