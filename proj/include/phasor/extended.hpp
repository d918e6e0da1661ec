#pragma once

#include <cmath>
#include <complex>

namespace phasor {

using cplx = std::complex<double>;

// A point of the Riemann sphere as seen by the evaluator: a finite complex
// value, the single unsigned point at infinity, or "undefined" (0/0-type
// results and genuine domain violations).
class ExtendedComplex {
public:
    enum class Tag { Finite, Infinity, Undefined };

    ExtendedComplex() : tag_(Tag::Finite), v_(0.0, 0.0) {}

    // Folds non-finite components into the point at infinity.
    ExtendedComplex(cplx v) : tag_(Tag::Finite), v_(v) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            tag_ = Tag::Infinity;
            v_ = cplx(0.0, 0.0);
        }
    }

    static ExtendedComplex infinity() {
        ExtendedComplex e;
        e.tag_ = Tag::Infinity;
        return e;
    }
    static ExtendedComplex undefined() {
        ExtendedComplex e;
        e.tag_ = Tag::Undefined;
        return e;
    }

    Tag tag() const { return tag_; }
    bool is_finite() const { return tag_ == Tag::Finite; }
    bool is_infinity() const { return tag_ == Tag::Infinity; }
    bool is_undefined() const { return tag_ == Tag::Undefined; }
    bool is_zero() const { return tag_ == Tag::Finite && v_ == cplx(0.0, 0.0); }

    // Only meaningful when finite.
    cplx value() const { return v_; }

private:
    Tag tag_;
    cplx v_;
};

inline ExtendedComplex operator+(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_undefined() || b.is_undefined()) return ExtendedComplex::undefined();
    if (a.is_infinity() && b.is_infinity()) return ExtendedComplex::undefined();
    if (a.is_infinity() || b.is_infinity()) return ExtendedComplex::infinity();
    return ExtendedComplex(a.value() + b.value());
}

inline ExtendedComplex operator-(const ExtendedComplex& a) {
    if (a.is_finite()) return ExtendedComplex(-a.value());
    return a;
}

inline ExtendedComplex operator-(const ExtendedComplex& a, const ExtendedComplex& b) {
    return a + (-b);
}

inline ExtendedComplex operator*(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_undefined() || b.is_undefined()) return ExtendedComplex::undefined();
    if (a.is_infinity() || b.is_infinity()) {
        if (a.is_zero() || b.is_zero()) return ExtendedComplex::undefined();
        return ExtendedComplex::infinity();
    }
    return ExtendedComplex(a.value() * b.value());
}

inline ExtendedComplex operator/(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.is_undefined() || b.is_undefined()) return ExtendedComplex::undefined();
    if (a.is_infinity()) {
        if (b.is_infinity()) return ExtendedComplex::undefined();
        return ExtendedComplex::infinity();
    }
    if (b.is_infinity()) return ExtendedComplex(cplx(0.0, 0.0));
    if (b.is_zero()) {
        if (a.is_zero()) return ExtendedComplex::undefined();
        return ExtendedComplex::infinity();
    }
    return ExtendedComplex(a.value() / b.value());
}

}  // namespace phasor
