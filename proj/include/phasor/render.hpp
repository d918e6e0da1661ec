#pragma once

#include <functional>

#include "phasor/color.hpp"
#include "phasor/expr.hpp"
#include "phasor/image.hpp"

namespace phasor::render {

struct RenderOptions {
    int threads = 0;           // 0 = hardware concurrency
    bool supersample = false;  // 2x2 box supersampling
};

// Phase plot of the expression over the frame. Deterministic and bit-exact
// for fixed inputs regardless of the thread count.
Image render_image(const expr::ExprAst& f, const Frame& frame, const color::ColorScheme& scheme,
                   const RenderOptions& options = {});

// Splits [0, count) into chunks and runs fn(begin, end) on worker threads.
// Used for pixel rows and other embarrassingly parallel loops.
void parallel_chunks(long count, int threads, const std::function<void(long, long)>& fn);

}  // namespace phasor::render
