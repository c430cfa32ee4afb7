#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "holiswap/error.hpp"
#include "holiswap/rng.hpp"

namespace holiswap {

enum class CounterMode : std::uint8_t { exact, logarithmic };

inline std::string_view to_string(CounterMode m) {
  return m == CounterMode::exact ? "exact" : "log";
}

struct PolicyConfig {
  std::uint32_t epoch_len = 256;
  std::uint32_t threshold = 128;
  CounterMode counter_mode = CounterMode::logarithmic;
  std::uint64_t rng_seed = 0;
  bool enabled = true;

  void validate() const {
    if (epoch_len == 0 || threshold == 0)
      throw config_error("epoch length and threshold must be positive");
    if (counter_mode == CounterMode::logarithmic) {
      if (!std::has_single_bit(epoch_len) || !std::has_single_bit(threshold))
        throw config_error("logarithmic counters need power-of-two epoch and threshold");
      if (std::countr_zero(epoch_len) > 15)
        throw config_error("logarithmic epoch exponent exceeds the 4-bit counter");
    }
  }
};

// Saturating exact count. At the defaults it fits in 8 bits.
class ExactCounter {
 public:
  static constexpr unsigned storage_bits = 8;

  void increment(Rng&, std::uint32_t limit) {
    if (count_ < limit) ++count_;
  }
  std::uint64_t estimate() const { return count_; }
  std::uint32_t count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  std::uint32_t count_ = 0;
};

// Morris counter holding only a base-2 exponent. Represents 0 until the
// first event, 2^exponent afterwards.
class LogCounter {
 public:
  static constexpr unsigned storage_bits = 4;
  static constexpr std::uint8_t max_exponent = 15;

  LogCounter() = default;
  static LogCounter from_exponent(std::uint8_t e) {
    LogCounter c;
    c.nonzero_ = true;
    c.exponent_ = std::min(e, max_exponent);
    return c;
  }

  void increment(Rng& rng, std::uint32_t /*limit*/ = 0) {
    if (!nonzero_) {
      nonzero_ = true;
      exponent_ = 0;
      return;
    }
    if (exponent_ < max_exponent && coin_pow2(rng, exponent_)) ++exponent_;
  }

  std::uint64_t estimate() const { return nonzero_ ? std::uint64_t{1} << exponent_ : 0; }
  bool nonzero() const { return nonzero_; }
  std::uint8_t exponent() const { return exponent_; }
  void reset() { *this = LogCounter{}; }

  friend bool operator==(const LogCounter&, const LogCounter&) = default;

 private:
  bool nonzero_ = false;
  std::uint8_t exponent_ = 0;
};

inline LogCounter log_increment(LogCounter c, Rng& rng) {
  c.increment(rng);
  return c;
}

template <class Counter>
std::uint64_t estimate(const Counter& c) {
  return c.estimate();
}

// Counter bits per set: one epoch counter plus one hit counter per way.
inline unsigned storage_bits(CounterMode mode, unsigned associativity) {
  const unsigned width =
      mode == CounterMode::exact ? ExactCounter::storage_bits : LogCounter::storage_bits;
  return width * (associativity + 1);
}

template <class Counter>
struct SetCounters {
  Counter epoch;
  std::vector<Counter> hits;

  explicit SetCounters(unsigned associativity = 0) : hits(associativity) {}

  void reset() {
    epoch.reset();
    for (auto& h : hits) h.reset();
  }
};

struct PolicyAction {
  enum class Kind : std::uint8_t { none, swap };
  Kind kind = Kind::none;
  unsigned hot_way = 0;

  bool is_swap() const { return kind == Kind::swap; }
  static PolicyAction swap(unsigned way) { return {Kind::swap, way}; }
};

// Counts one access to the set. A swap is requested the moment a line's hit
// count first crosses the threshold, unless the line already sits in W0.
// The epoch reset is applied after the hot check.
template <class Counter>
PolicyAction record_access(SetCounters<Counter>& counters, std::optional<unsigned> hit_way,
                           const PolicyConfig& cfg, Rng& rng) {
  PolicyAction action;
  counters.epoch.increment(rng, cfg.epoch_len);
  if (hit_way) {
    Counter& h = counters.hits.at(*hit_way);
    const bool was_hot = h.estimate() >= cfg.threshold;
    h.increment(rng, cfg.epoch_len);
    if (!was_hot && h.estimate() >= cfg.threshold && *hit_way != 0)
      action = PolicyAction::swap(*hit_way);
  }
  if (counters.epoch.estimate() >= cfg.epoch_len) counters.reset();
  return action;
}

// Per-set counters for a whole cache together with the policy's RNG.
class HotLinePolicy {
 public:
  HotLinePolicy(const PolicyConfig& cfg, std::size_t sets, unsigned associativity)
      : cfg_(cfg), rng_(cfg.rng_seed) {
    cfg_.validate();
    if (cfg_.counter_mode == CounterMode::exact)
      banks_ = std::vector<SetCounters<ExactCounter>>(sets, SetCounters<ExactCounter>(associativity));
    else
      banks_ = std::vector<SetCounters<LogCounter>>(sets, SetCounters<LogCounter>(associativity));
  }

  const PolicyConfig& config() const { return cfg_; }
  bool enabled() const { return cfg_.enabled; }

  PolicyAction on_access(std::uint32_t set, std::optional<unsigned> hit_way) {
    if (!cfg_.enabled) return {};
    return std::visit(
        [&](auto& banks) { return record_access(banks.at(set), hit_way, cfg_, rng_); }, banks_);
  }

  // A newly installed line starts cold.
  void on_fill(std::uint32_t set, unsigned way) {
    std::visit([&](auto& banks) { banks.at(set).hits.at(way).reset(); }, banks_);
  }

  // Counters follow their lines.
  void on_swap(std::uint32_t set, unsigned a, unsigned b) {
    std::visit([&](auto& banks) { std::swap(banks.at(set).hits.at(a), banks.at(set).hits.at(b)); },
               banks_);
  }

  std::uint64_t hit_estimate(std::uint32_t set, unsigned way) const {
    return std::visit([&](const auto& banks) { return banks.at(set).hits.at(way).estimate(); },
                      banks_);
  }

  std::uint64_t epoch_estimate(std::uint32_t set) const {
    return std::visit([&](const auto& banks) { return banks.at(set).epoch.estimate(); }, banks_);
  }

 private:
  PolicyConfig cfg_;
  Rng rng_;
  std::variant<std::vector<SetCounters<ExactCounter>>, std::vector<SetCounters<LogCounter>>> banks_;
};

}  // namespace holiswap
