#pragma once

#include "phasor/errors.hpp"
#include "phasor/extended.hpp"

namespace phasor::special {

struct LatticeError : Error {
    using Error::Error;
};

// Primitive periods of a lattice plus the truncation radius (in lattice
// shells) used by the Weierstrass sums.
struct LatticeSpec {
    cplx omega1;
    cplx omega2;
    int shells = 40;
};

// Throws LatticeError on a degenerate lattice (omega2/omega1 real) or
// shells < 10.
void validate(const LatticeSpec& lattice);

// Gamma via the 9-term Lanczos approximation (g = 7), reflection formula
// for Re z < 0.5. Poles at 0, -1, -2, ... map to infinity.
ExtendedComplex gamma(cplx z);

// Riemann zeta via Euler-Maclaurin summation for Re z >= 0.5 and the
// functional equation for Re z < 0.5. zeta(1) maps to infinity.
ExtendedComplex zeta(cplx z);

// Weierstrass p-function: truncated lattice sum
//   p(z) = 1/z^2 + sum' [ 1/(z-w)^2 - 1/w^2 ],   |m|,|n| <= shells,
// evaluated after reducing z to the fundamental cell centered at the
// origin. Points within 1e-9 of a lattice point map to infinity.
ExtendedComplex wp(cplx z, const LatticeSpec& lattice);

// Derivative series p'(z) = -2 sum 1/(z-w)^3 over the same index set.
ExtendedComplex wp_prime(cplx z, const LatticeSpec& lattice);

}  // namespace phasor::special
