#pragma once

#include <iosfwd>
#include <vector>

#include "phasor/color.hpp"
#include "phasor/errors.hpp"
#include "phasor/extended.hpp"

namespace phasor::render {

struct ImageError : Error {
    using Error::Error;
};

// Rectangular sampling window. Pixel (col,row) samples the point
//   z = xmin + (col+0.5)*dx + i*(ymax - (row+0.5)*dy)
// so row 0 is the top of the image.
struct Frame {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    int xres = 256, yres = 256;

    cplx pixel_center(int col, int row) const {
        const double dx = (xmax - xmin) / xres;
        const double dy = (ymax - ymin) / yres;
        return cplx(xmin + (col + 0.5) * dx, ymax - (row + 0.5) * dy);
    }
};

struct Image {
    int width = 0, height = 0;
    std::vector<color::Rgb> pixels;  // row-major

    color::Rgb& at(int col, int row) { return pixels[std::size_t(row) * width + col]; }
    const color::Rgb& at(int col, int row) const {
        return pixels[std::size_t(row) * width + col];
    }
    bool operator==(const Image&) const = default;
};

// Binary PPM: "P6\n<w> <h>\n255\n" + raw RGB, bit-exact.
void write_ppm(const Image& img, std::ostream& out);
Image read_ppm(std::istream& in);

// 8-bit truecolor PNG, no alpha, no interlacing (zlib-compressed).
void write_png(const Image& img, std::ostream& out);

}  // namespace phasor::render
