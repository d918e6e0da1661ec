#include "phasor/render.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace phasor::render {

void parallel_chunks(long count, int threads, const std::function<void(long, long)>& fn) {
    if (count <= 0) return;
    int n = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    n = std::clamp<long>(n, 1, count);
    if (n == 1) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    const long chunk = (count + n - 1) / n;
    for (int t = 0; t < n; ++t) {
        const long begin = t * chunk;
        const long end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

Image render_image(const expr::ExprAst& f, const Frame& frame, const color::ColorScheme& scheme,
                   const RenderOptions& options) {
    Image img;
    img.width = frame.xres;
    img.height = frame.yres;
    img.pixels.resize(std::size_t(frame.xres) * frame.yres);

    if (!options.supersample) {
        parallel_chunks(frame.yres, options.threads, [&](long r0, long r1) {
            for (long row = r0; row < r1; ++row)
                for (int col = 0; col < frame.xres; ++col)
                    img.at(col, int(row)) =
                        color::scheme_apply(scheme, expr::eval(f, frame.pixel_center(col, int(row))));
        });
        return img;
    }

    Frame fine = frame;
    fine.xres = frame.xres * 2;
    fine.yres = frame.yres * 2;
    Image hi = render_image(f, fine, scheme, RenderOptions{options.threads, false});
    parallel_chunks(frame.yres, options.threads, [&](long r0, long r1) {
        for (long row = r0; row < r1; ++row) {
            for (int col = 0; col < frame.xres; ++col) {
                int r = 0, g = 0, b = 0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const color::Rgb& p = hi.at(2 * col + dx, 2 * int(row) + dy);
                        r += p.r;
                        g += p.g;
                        b += p.b;
                    }
                img.at(col, int(row)) = color::Rgb{std::uint8_t((r + 2) / 4),
                                                   std::uint8_t((g + 2) / 4),
                                                   std::uint8_t((b + 2) / 4)};
            }
        }
    });
    return img;
}

}  // namespace phasor::render
