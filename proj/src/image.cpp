#include "phasor/image.hpp"

#include <zlib.h>

#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace phasor::render {

void write_ppm(const Image& img, std::ostream& out) {
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    for (const color::Rgb& p : img.pixels) {
        const char bytes[3] = {char(p.r), char(p.g), char(p.b)};
        out.write(bytes, 3);
    }
    if (!out) throw ImageError("PPM write failure");
}

Image read_ppm(std::istream& in) {
    std::string magic;
    in >> magic;
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (!in || magic != "P6" || maxval != 255 || w <= 0 || h <= 0)
        throw ImageError("not an 8-bit P6 PPM");
    in.get();  // single whitespace after header
    Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(std::size_t(w) * h);
    std::vector<char> raw(img.pixels.size() * 3);
    in.read(raw.data(), std::streamsize(raw.size()));
    if (!in) throw ImageError("truncated PPM payload");
    for (std::size_t k = 0; k < img.pixels.size(); ++k)
        img.pixels[k] = color::Rgb{std::uint8_t(raw[3 * k]), std::uint8_t(raw[3 * k + 1]),
                                   std::uint8_t(raw[3 * k + 2])};
    return img;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

void write_chunk(std::ostream& out, const char type[4], const std::uint8_t* data,
                 std::size_t len) {
    std::vector<std::uint8_t> head;
    put_u32(head, std::uint32_t(len));
    out.write(reinterpret_cast<const char*>(head.data()), 4);
    out.write(type, 4);
    if (len) out.write(reinterpret_cast<const char*>(data), std::streamsize(len));
    uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(type), 4);
    if (len) crc = crc32(crc, data, uInt(len));
    std::vector<std::uint8_t> tail;
    put_u32(tail, std::uint32_t(crc));
    out.write(reinterpret_cast<const char*>(tail.data()), 4);
}

}  // namespace

void write_png(const Image& img, std::ostream& out) {
    static const std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    out.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, std::uint32_t(img.width));
    put_u32(ihdr, std::uint32_t(img.height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // truecolor
    ihdr.push_back(0);   // deflate
    ihdr.push_back(0);   // filter method
    ihdr.push_back(0);   // no interlace
    write_chunk(out, "IHDR", ihdr.data(), ihdr.size());

    // raw scanlines, each prefixed with filter type 0
    const std::size_t stride = std::size_t(img.width) * 3 + 1;
    std::vector<std::uint8_t> raw(stride * img.height);
    for (int row = 0; row < img.height; ++row) {
        std::uint8_t* line = raw.data() + stride * row;
        line[0] = 0;
        for (int col = 0; col < img.width; ++col) {
            const color::Rgb& p = img.at(col, row);
            line[1 + 3 * col] = p.r;
            line[2 + 3 * col] = p.g;
            line[3 + 3 * col] = p.b;
        }
    }
    uLongf bound = compressBound(uLong(raw.size()));
    std::vector<std::uint8_t> idat(bound);
    if (compress2(idat.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
        throw ImageError("zlib compression failure");
    idat.resize(bound);
    write_chunk(out, "IDAT", idat.data(), idat.size());
    write_chunk(out, "IEND", nullptr, 0);
    if (!out) throw ImageError("PNG write failure");
}

}  // namespace phasor::render
