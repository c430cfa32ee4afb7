#pragma once

#include <stdexcept>
#include <string>

namespace holiswap {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters or an inconsistent combination of them.
struct config_error : error {
  using error::error;
};

// Malformed trace or configuration input.
struct input_error : error {
  using error::error;
};

// Internal state violated an invariant; always a simulator bug.
struct invariant_error : error {
  using error::error;
};

}  // namespace holiswap
