#pragma once

#include <cstdint>

namespace holiswap {

enum class Op : std::uint8_t { load, store };

// One memory reference.
struct TraceRecord {
  std::uint64_t pc = 0;
  std::uint64_t addr = 0;
  Op op = Op::load;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

}  // namespace holiswap
