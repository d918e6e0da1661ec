#include "phasor/special.hpp"

#include <array>
#include <cmath>

namespace phasor::special {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// Lanczos g = 7, 9 coefficients. Relative error is a few 1e-14 over the
// desk-scale range (|z| <= 30 away from poles).
constexpr int kLanczosG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7,
};

cplx gamma_core(cplx z) {
    // caller guarantees Re z >= 0.5
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < kLanczosG + 2; ++i) x += kLanczos[i] / (z + double(i));
    cplx t = z + (kLanczosG + 0.5);
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// B_2 .. B_24
constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,     1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,      -691.0 / 2730.0, 7.0 / 6.0,      -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0,
};

// Euler-Maclaurin tail of zeta for Re s >= 0.5. N grows with |Im s| so the
// correction series keeps converging; 12 Bernoulli terms hold the error
// near roundoff for |Im s| <= 200.
cplx zeta_core(cplx s) {
    const int n_terms = std::max(20, int(std::abs(s.imag()) * 0.6 + 10.0));
    cplx total(0.0, 0.0);
    for (int n = 1; n < n_terms; ++n) total += std::exp(-s * std::log(double(n)));
    const double logn = std::log(double(n_terms));
    const cplx n_to_minus_s = std::exp(-s * logn);
    total += n_to_minus_s * double(n_terms) / (s - 1.0);
    total += n_to_minus_s * 0.5;
    cplx rising = s;                                   // s(s+1)...(s+2k-2)
    cplx npow = n_to_minus_s / double(n_terms);        // N^{-s-2k+1}
    double fact = 1.0;                                 // (2k)!
    for (int k = 1; k <= int(kBernoulli.size()); ++k) {
        fact *= (2 * k - 1) * (2 * k);
        total += kBernoulli[k - 1] / fact * rising * npow;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        npow /= double(n_terms) * double(n_terms);
    }
    return total;
}

}  // namespace

void validate(const LatticeSpec& lattice) {
    if (lattice.omega1 == cplx(0.0, 0.0) || lattice.omega2 == cplx(0.0, 0.0))
        throw LatticeError("degenerate lattice: zero period");
    const cplx ratio = lattice.omega2 / lattice.omega1;
    if (ratio.imag() == 0.0 || !std::isfinite(ratio.imag()))
        throw LatticeError("degenerate lattice: omega2/omega1 is real");
    if (lattice.shells < 10) throw LatticeError("lattice shells must be >= 10");
}

ExtendedComplex gamma(cplx z) {
    if (is_nonpositive_integer(z)) return ExtendedComplex::infinity();
    if (z.real() >= 0.5) return ExtendedComplex(gamma_core(z));
    // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
    const cplx s = std::sin(kPi * z);
    if (s == cplx(0.0, 0.0)) return ExtendedComplex::infinity();
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        return ExtendedComplex(cplx(0.0, 0.0));  // |Gamma| underflows when |Im z| is huge
    return ExtendedComplex(kPi / (s * gamma_core(1.0 - z)));
}

ExtendedComplex zeta(cplx s) {
    if (s == cplx(1.0, 0.0)) return ExtendedComplex::infinity();
    if (s.real() >= 0.5) return ExtendedComplex(zeta_core(s));
    // functional equation: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    const ExtendedComplex g = gamma(1.0 - s);
    if (!g.is_finite()) return ExtendedComplex::undefined();
    const cplx factor = std::pow(cplx(2.0, 0.0), s) * std::pow(cplx(kPi, 0.0), s - 1.0) *
                        std::sin(kPi * s / 2.0);
    return ExtendedComplex(factor) * ExtendedComplex(g.value()) *
           ExtendedComplex(zeta_core(1.0 - s));
}

namespace {

// Reduce z modulo the lattice to the cell centered at the origin. Keeps the
// truncated sums accurate and makes periodicity hold to roundoff.
cplx lattice_reduce(cplx z, const LatticeSpec& l) {
    const double det = l.omega1.real() * l.omega2.imag() - l.omega2.real() * l.omega1.imag();
    const double a = (z.real() * l.omega2.imag() - z.imag() * l.omega2.real()) / det;
    const double b = (z.imag() * l.omega1.real() - z.real() * l.omega1.imag()) / det;
    return z - std::round(a) * l.omega1 - std::round(b) * l.omega2;
}

bool near_lattice_point(cplx u, const LatticeSpec& l) {
    for (int m = -1; m <= 1; ++m)
        for (int n = -1; n <= 1; ++n)
            if (std::abs(u - double(m) * l.omega1 - double(n) * l.omega2) <= 1e-9) return true;
    return false;
}

}  // namespace

ExtendedComplex wp(cplx z, const LatticeSpec& lattice) {
    validate(lattice);
    const cplx u = lattice_reduce(z, lattice);
    if (near_lattice_point(u, lattice)) return ExtendedComplex::infinity();
    cplx sum = 1.0 / (u * u);
    const int r = lattice.shells;
    for (int m = -r; m <= r; ++m) {
        for (int n = -r; n <= r; ++n) {
            if (m == 0 && n == 0) continue;
            const cplx w = double(m) * lattice.omega1 + double(n) * lattice.omega2;
            const cplx d = u - w;
            sum += 1.0 / (d * d) - 1.0 / (w * w);
        }
    }
    return ExtendedComplex(sum);
}

ExtendedComplex wp_prime(cplx z, const LatticeSpec& lattice) {
    validate(lattice);
    const cplx u = lattice_reduce(z, lattice);
    if (near_lattice_point(u, lattice)) return ExtendedComplex::infinity();
    cplx sum(0.0, 0.0);
    const int r = lattice.shells;
    for (int m = -r; m <= r; ++m) {
        for (int n = -r; n <= r; ++n) {
            const cplx w = double(m) * lattice.omega1 + double(n) * lattice.omega2;
            const cplx d = u - w;
            sum += 1.0 / (d * d * d);
        }
    }
    return ExtendedComplex(-2.0 * sum);
}

}  // namespace phasor::special
