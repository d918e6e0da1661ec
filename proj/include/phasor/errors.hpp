#pragma once

#include <stdexcept>
#include <string>

namespace phasor {

// Base for all math/domain failures raised by the library. The CLI maps
// these to exit code 2; anything else is a bug.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace phasor
