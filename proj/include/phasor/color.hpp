#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "phasor/errors.hpp"
#include "phasor/extended.hpp"

namespace phasor::color {

struct SchemeError : Error {
    using Error::Error;
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

// The four base schemes of the paper plus jump-modified variants.
struct ColorScheme {
    enum class Kind {
        PlainPhase,            // hue from phase only
        PhaseModulusSawtooth,  // value modulated by sawtooth of log|w|
        PhasePolarGrid,        // product of modulus and phase sawtooths
        DomainColoring,        // |w| mapped monotonically to lightness
        Jump,                  // base scheme darkened near selected phases
    };
    Kind kind = Kind::PlainPhase;
    double gray_depth = 0.5;         // g0 in (0,1]
    double modulus_base = 2.718281828459045;  // log base of the modulus sawtooth
    int phase_sectors = 12;          // angular sawtooth count for the grid scheme
    std::vector<cplx> jump_phases;   // unit-complex phases, nonempty when kind == Jump
    Kind jump_base = Kind::PlainPhase;
};

// Pure phase coloring: hue = arg(w)/2pi with arg 0 at red, increasing
// counterclockwise; w = 0 or undefined paints mid-gray, infinity white.
Rgb phase_to_color(const ExtendedComplex& w);

Rgb scheme_apply(const ColorScheme& scheme, const ExtendedComplex& w);

// CLI scheme names: plain | sawtooth | grid | domain | jump:<t1,t2,...>
// with jump phases given in turns. Throws SchemeError on unknown names.
ColorScheme parse_scheme(std::string_view name);

}  // namespace phasor::color
