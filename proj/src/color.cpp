#include "phasor/color.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace phasor::color {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

const Rgb kMidGray{128, 128, 128};
const Rgb kWhite{255, 255, 255};
const Rgb kBlack{0, 0, 0};

double hue_of(cplx w) {
    double h = std::arg(w) / kTwoPi;
    if (h < 0.0) h += 1.0;
    return h;
}

struct Rgbd {
    double r, g, b;
};

// HSV with s = 1; v folded in by the caller
Rgbd hue_to_rgb(double hue) {
    double h6 = hue * 6.0;
    if (h6 >= 6.0) h6 -= 6.0;
    const int sector = int(h6);
    const double f = h6 - sector;
    switch (sector) {
        case 0: return {1.0, f, 0.0};
        case 1: return {1.0 - f, 1.0, 0.0};
        case 2: return {0.0, 1.0, f};
        case 3: return {0.0, 1.0 - f, 1.0};
        case 4: return {f, 0.0, 1.0};
        default: return {1.0, 0.0, 1.0 - f};
    }
}

std::uint8_t quantize(double c) {
    const long v = std::lround(255.0 * std::clamp(c, 0.0, 1.0));
    return std::uint8_t(v);
}

Rgb to_rgb(Rgbd c, double scale = 1.0) {
    return Rgb{quantize(c.r * scale), quantize(c.g * scale), quantize(c.b * scale)};
}

double sawtooth(double x) { return x - std::floor(x); }

Rgb apply_base(const ColorScheme& s, ColorScheme::Kind kind, const ExtendedComplex& w) {
    if (w.is_infinity()) return kWhite;
    if (w.is_undefined()) return kMidGray;
    const cplx v = w.value();
    if (kind == ColorScheme::Kind::DomainColoring) {
        if (v == cplx(0.0, 0.0)) return kBlack;
        const Rgbd base = hue_to_rgb(hue_of(v));
        const double m = std::abs(v);
        const double light = m / (m + 1.0);  // 0 -> black, 1 -> mid, inf -> white
        if (light <= 0.5) return to_rgb(base, 2.0 * light);
        const double t = 2.0 * light - 1.0;
        return Rgb{quantize(base.r + (1.0 - base.r) * t), quantize(base.g + (1.0 - base.g) * t),
                   quantize(base.b + (1.0 - base.b) * t)};
    }
    if (v == cplx(0.0, 0.0)) return kMidGray;
    const Rgbd base = hue_to_rgb(hue_of(v));
    switch (kind) {
        case ColorScheme::Kind::PlainPhase: return to_rgb(base);
        case ColorScheme::Kind::PhaseModulusSawtooth: {
            const double x = std::log(std::abs(v)) / std::log(s.modulus_base);
            const double factor = (1.0 - s.gray_depth) + s.gray_depth * sawtooth(x);
            return to_rgb(base, factor);
        }
        case ColorScheme::Kind::PhasePolarGrid: {
            const double x = std::log(std::abs(v)) / std::log(s.modulus_base);
            const double msaw = (1.0 - s.gray_depth) + s.gray_depth * sawtooth(x);
            const double psaw = (1.0 - s.gray_depth) +
                                s.gray_depth * sawtooth(s.phase_sectors * hue_of(v));
            return to_rgb(base, msaw * psaw);
        }
        default: return to_rgb(base);
    }
}

double angular_distance(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d < -kPi) d += kTwoPi;
    if (d > kPi) d -= kTwoPi;
    return std::abs(d);
}

}  // namespace

Rgb phase_to_color(const ExtendedComplex& w) {
    if (w.is_infinity()) return kWhite;
    if (w.is_undefined() || w.is_zero()) return kMidGray;
    return to_rgb(hue_to_rgb(hue_of(w.value())));
}

Rgb scheme_apply(const ColorScheme& scheme, const ExtendedComplex& w) {
    if (scheme.kind != ColorScheme::Kind::Jump) return apply_base(scheme, scheme.kind, w);
    Rgb base = apply_base(scheme, scheme.jump_base, w);
    if (!w.is_finite() || w.is_zero()) return base;
    const double a = std::arg(w.value());
    for (const cplx& t : scheme.jump_phases) {
        if (angular_distance(a, std::arg(t)) <= kPi / 60.0) {
            base.r = std::uint8_t(std::lround(base.r * 0.65));
            base.g = std::uint8_t(std::lround(base.g * 0.65));
            base.b = std::uint8_t(std::lround(base.b * 0.65));
            break;
        }
    }
    return base;
}

ColorScheme parse_scheme(std::string_view name) {
    ColorScheme s;
    if (name == "plain") {
        s.kind = ColorScheme::Kind::PlainPhase;
    } else if (name == "sawtooth") {
        s.kind = ColorScheme::Kind::PhaseModulusSawtooth;
    } else if (name == "grid") {
        s.kind = ColorScheme::Kind::PhasePolarGrid;
    } else if (name == "domain") {
        s.kind = ColorScheme::Kind::DomainColoring;
    } else if (name.starts_with("jump:")) {
        s.kind = ColorScheme::Kind::Jump;
        std::string_view rest = name.substr(5);
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            const std::string_view tok = rest.substr(0, comma);
            double turns = 0.0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), turns);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                throw SchemeError("bad jump phase '" + std::string(tok) + "'");
            s.jump_phases.push_back(std::polar(1.0, kTwoPi * turns));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (s.jump_phases.empty()) throw SchemeError("jump scheme needs at least one phase");
    } else {
        throw SchemeError("unknown color scheme '" + std::string(name) + "'");
    }
    return s;
}

}  // namespace phasor::color
