#include <zlib.h>

#include <chrono>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "phasor/render.hpp"

using namespace phasor;
using namespace phasor::render;

namespace {

std::string ppm_bytes(const Image& img) {
    std::ostringstream out;
    write_ppm(img, out);
    return out.str();
}

// minimal decoder for the PNGs this project writes (filter 0, RGB8)
Image decode_png(const std::string& bytes) {
    const std::uint8_t* p = reinterpret_cast<const std::uint8_t*>(bytes.data());
    REQUIRE(bytes.size() > 8);
    REQUIRE(p[0] == 137);
    REQUIRE(std::memcmp(p + 1, "PNG", 3) == 0);
    std::size_t pos = 8;
    int w = 0, h = 0;
    std::string idat;
    auto u32 = [&](std::size_t at) {
        return (std::uint32_t(p[at]) << 24) | (std::uint32_t(p[at + 1]) << 16) |
               (std::uint32_t(p[at + 2]) << 8) | std::uint32_t(p[at + 3]);
    };
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t len = u32(pos);
        const std::string type(bytes, pos + 4, 4);
        if (type == "IHDR") {
            w = int(u32(pos + 8));
            h = int(u32(pos + 12));
            REQUIRE(p[pos + 16] == 8);  // bit depth
            REQUIRE(p[pos + 17] == 2);  // truecolor
        } else if (type == "IDAT") {
            idat.append(bytes, pos + 8, len);
        }
        pos += 12 + len;
    }
    const std::size_t stride = std::size_t(w) * 3 + 1;
    std::vector<std::uint8_t> raw(stride * h);
    uLongf out_len = uLongf(raw.size());
    REQUIRE(uncompress(raw.data(), &out_len, reinterpret_cast<const Bytef*>(idat.data()),
                       uLong(idat.size())) == Z_OK);
    REQUIRE(out_len == raw.size());
    Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(std::size_t(w) * h);
    for (int row = 0; row < h; ++row) {
        REQUIRE(raw[stride * row] == 0);  // filter byte
        for (int col = 0; col < w; ++col) {
            const std::uint8_t* q = raw.data() + stride * row + 1 + 3 * col;
            img.at(col, row) = color::Rgb{q[0], q[1], q[2]};
        }
    }
    return img;
}

}  // namespace

TEST_CASE("frame pixel mapping") {
    Frame f{-1.0, 1.0, -1.0, 1.0, 4, 4};
    CHECK(std::abs(f.pixel_center(0, 0) - cplx(-0.75, 0.75)) < 1e-15);
    CHECK(std::abs(f.pixel_center(3, 3) - cplx(0.75, -0.75)) < 1e-15);
}

TEST_CASE("3x3 render of z: gray center, red right-middle") {
    Frame frame{-1.0, 1.0, -1.0, 1.0, 3, 3};
    Image img = render_image(expr::parse("z"), frame, color::ColorScheme{});
    CHECK(img.at(1, 1) == color::Rgb{128, 128, 128});  // center samples z = 0
    CHECK(img.at(2, 1) == color::Rgb{255, 0, 0});      // positive real axis
}

TEST_CASE("phase plots of f and 2f are identical (plain scheme)") {
    Frame frame{-2.0, 2.0, -2.0, 2.0, 64, 64};
    Image a = render_image(expr::parse("(z-1)/(z^2+z+1)"), frame, color::ColorScheme{});
    Image b = render_image(expr::parse("2*((z-1)/(z^2+z+1))"), frame, color::ColorScheme{});
    CHECK(a == b);
}

TEST_CASE("renders are deterministic across thread counts") {
    Frame frame{-2.0, 2.0, -2.0, 2.0, 96, 96};
    RenderOptions one;
    one.threads = 1;
    RenderOptions many;
    many.threads = 8;
    Image a = render_image(expr::parse("exp(1/z)"), frame, color::ColorScheme{}, one);
    Image b = render_image(expr::parse("exp(1/z)"), frame, color::ColorScheme{}, many);
    CHECK(ppm_bytes(a) == ppm_bytes(b));
}

TEST_CASE("ppm format is bit-exact") {
    Image img;
    img.width = 1;
    img.height = 1;
    img.pixels = {color::Rgb{255, 0, 0}};
    const std::string bytes = ppm_bytes(img);
    const unsigned char expected[] = {0x50, 0x36, 0x0A, 0x31, 0x20, 0x31, 0x0A,
                                      0x32, 0x35, 0x35, 0x0A, 0xFF, 0x00, 0x00};
    REQUIRE(bytes.size() == sizeof expected);
    CHECK(std::memcmp(bytes.data(), expected, sizeof expected) == 0);

    Image two;
    two.width = 2;
    two.height = 1;
    two.pixels = {color::Rgb{1, 2, 3}, color::Rgb{4, 5, 6}};
    CHECK(ppm_bytes(two).substr(0, 9) == "P6\n2 1\n25");

    std::istringstream in(ppm_bytes(two));
    CHECK(read_ppm(in) == two);
}

TEST_CASE("png round trip and signature") {
    Frame frame{-1.0, 1.0, -1.0, 1.0, 17, 13};
    Image img = render_image(expr::parse("z^2-1"), frame, color::ColorScheme{});
    std::ostringstream out;
    write_png(img, out);
    const std::string bytes = out.str();
    const unsigned char sig[] = {137, 'P', 'N', 'G', 13, 10, 26, 10};
    CHECK(std::memcmp(bytes.data(), sig, 8) == 0);
    CHECK(decode_png(bytes) == img);
}

TEST_CASE("512x512 render + png encode stays under 2 seconds") {
    const auto t0 = std::chrono::steady_clock::now();
    Frame frame{-2.0, 2.0, -2.0, 2.0, 512, 512};
    Image img = render_image(expr::parse("(z-1)/(z^2+z+1)"), frame, color::ColorScheme{});
    std::ostringstream out;
    write_png(img, out);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(sec < 2.0);
    CHECK(out.str().size() > 100);
}

TEST_CASE("downsampled 2x render differs only near singular sets") {
    const expr::ExprAst f = expr::parse("(z-1)/(z^2+z+1)");
    Frame lo{-2.0, 2.0, -2.0, 2.0, 128, 128};
    Image coarse = render_image(f, lo, color::ColorScheme{});
    RenderOptions ss;
    ss.supersample = true;  // renders at 2x and box-averages
    Image averaged = render_image(f, lo, color::ColorScheme{}, ss);
    long differing = 0;
    for (std::size_t k = 0; k < coarse.pixels.size(); ++k) {
        const auto a = coarse.pixels[k], b = averaged.pixels[k];
        if (std::abs(int(a.r) - int(b.r)) > 8 || std::abs(int(a.g) - int(b.g)) > 8 ||
            std::abs(int(a.b) - int(b.b)) > 8)
            ++differing;
    }
    CHECK(differing <= coarse.pixels.size() / 20);  // <= 5% of pixels
}

TEST_CASE("supersampling changes smooth gradients only slightly") {
    Frame frame{-1.0, 1.0, -1.0, 1.0, 32, 32};
    RenderOptions ss;
    ss.supersample = true;
    Image img = render_image(expr::parse("exp(z)"), frame, color::ColorScheme{}, ss);
    CHECK(img.width == 32);
    CHECK(img.height == 32);
}
