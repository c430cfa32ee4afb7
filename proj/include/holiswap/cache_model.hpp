#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holiswap/error.hpp"
#include "holiswap/trace_record.hpp"

namespace holiswap {

struct CacheConfig {
  std::uint64_t capacity_bytes = 32768;
  std::uint32_t line_bytes = 64;
  std::uint32_t associativity = 4;

  std::uint32_t set_count() const {
    return static_cast<std::uint32_t>(capacity_bytes /
                                      (std::uint64_t{line_bytes} * associativity));
  }

  void validate() const {
    if (capacity_bytes == 0 || line_bytes == 0 || associativity == 0)
      throw config_error("cache capacity, line size and associativity must be positive");
    if (!std::has_single_bit(line_bytes))
      throw config_error("line size must be a power of two");
    if (associativity > 255)
      throw config_error("associativity above 255 is not supported");
    const std::uint64_t set_bytes = std::uint64_t{line_bytes} * associativity;
    if (capacity_bytes % set_bytes != 0)
      throw config_error("capacity must be a multiple of line_bytes * associativity");
    if (!std::has_single_bit(capacity_bytes / set_bytes))
      throw config_error("set count must be a power of two");
  }

  friend bool operator==(const CacheConfig&, const CacheConfig&) = default;
};

struct SetTag {
  std::uint32_t set = 0;
  std::uint64_t tag = 0;

  friend bool operator==(const SetTag&, const SetTag&) = default;
};

inline SetTag index_of(std::uint64_t addr, const CacheConfig& cfg) {
  const std::uint64_t line = addr / cfg.line_bytes;
  const std::uint32_t sets = cfg.set_count();
  return {static_cast<std::uint32_t>(line % sets), line / sets};
}

// Inverse of index_of for the first byte of the line.
inline std::uint64_t line_address(SetTag st, const CacheConfig& cfg) {
  return (st.tag * cfg.set_count() + st.set) * cfg.line_bytes;
}

struct CacheLine {
  bool valid = false;
  std::uint64_t tag = 0;  // meaningless unless valid
  bool dirty = false;

  friend bool operator==(const CacheLine& a, const CacheLine& b) {
    if (a.valid != b.valid) return false;
    return !a.valid || (a.tag == b.tag && a.dirty == b.dirty);
  }
};

enum class AccessKind : std::uint8_t { hit, miss };

struct AccessOutcome {
  AccessKind kind = AccessKind::miss;
  unsigned way = 0;  // physical way served (hit) or filled (miss)
  bool victim_evicted = false;
  bool victim_dirty = false;
  std::uint64_t victim_tag = 0;

  bool hit() const { return kind == AccessKind::hit; }
};

// One set: physical ways W0..W(A-1) plus an LRU stack of way indices.
// Recency belongs to the logical line, so swap_ways carries each line's
// rank along with it and replacement never depends on placement.
class CacheSet {
 public:
  explicit CacheSet(unsigned associativity) : ways_(associativity), lru_(associativity) {
    for (unsigned w = 0; w < associativity; ++w) lru_[w] = static_cast<std::uint8_t>(w);
  }

  unsigned associativity() const { return static_cast<unsigned>(ways_.size()); }
  std::span<const CacheLine> ways() const { return ways_; }
  const CacheLine& line(unsigned way) const { return ways_.at(way); }
  // Most- to least-recently used.
  std::span<const std::uint8_t> lru_order() const { return lru_; }

  std::optional<unsigned> lookup(std::uint64_t tag) const {
    std::optional<unsigned> found;
    for (unsigned w = 0; w < ways_.size(); ++w) {
      if (!ways_[w].valid || ways_[w].tag != tag) continue;
      if (found)
        throw invariant_error("duplicate tag " + std::to_string(tag) + " in ways " +
                              std::to_string(*found) + " and " + std::to_string(w));
      found = w;
    }
    return found;
  }

  void touch(unsigned way) {
    auto it = std::find(lru_.begin(), lru_.end(), static_cast<std::uint8_t>(way));
    std::rotate(lru_.begin(), it, it + 1);
  }

  unsigned victim() const { return lru_.back(); }

  // Installs tag in the LRU way and makes it MRU.
  AccessOutcome fill(std::uint64_t tag, bool dirty) {
    AccessOutcome out;
    out.kind = AccessKind::miss;
    out.way = victim();
    CacheLine& slot = ways_[out.way];
    if (slot.valid) {
      out.victim_evicted = true;
      out.victim_dirty = slot.dirty;
      out.victim_tag = slot.tag;
    }
    slot = CacheLine{true, tag, dirty};
    touch(out.way);
    return out;
  }

  void mark_dirty(unsigned way) { ways_.at(way).dirty = true; }

  void swap_ways(unsigned a, unsigned b) {
    if (a >= ways_.size() || b >= ways_.size())
      throw config_error("swap_ways: way index out of range");
    if (a == b) return;
    std::swap(ways_[a], ways_[b]);
    for (auto& w : lru_) {
      if (w == a)
        w = static_cast<std::uint8_t>(b);
      else if (w == b)
        w = static_cast<std::uint8_t>(a);
    }
  }

  // Throws invariant_error if the LRU stack is not a permutation or a tag repeats.
  void check() const {
    std::vector<bool> seen(ways_.size(), false);
    if (lru_.size() != ways_.size()) throw invariant_error("lru stack size mismatch");
    for (auto w : lru_) {
      if (w >= ways_.size() || seen[w]) throw invariant_error("lru stack is not a permutation");
      seen[w] = true;
    }
    for (unsigned i = 0; i < ways_.size(); ++i)
      for (unsigned j = i + 1; j < ways_.size(); ++j)
        if (ways_[i].valid && ways_[j].valid && ways_[i].tag == ways_[j].tag)
          throw invariant_error("duplicate tag within set");
  }

  friend bool operator==(const CacheSet&, const CacheSet&) = default;

 private:
  std::vector<CacheLine> ways_;
  std::vector<std::uint8_t> lru_;
};

// Write-back, write-allocate cache with LRU replacement.
class CacheState {
 public:
  explicit CacheState(const CacheConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    sets_.assign(cfg_.set_count(), CacheSet(cfg_.associativity));
  }

  const CacheConfig& config() const { return cfg_; }
  std::size_t set_count() const { return sets_.size(); }
  const CacheSet& set(std::uint32_t s) const { return sets_.at(s); }

  AccessOutcome access(const TraceRecord& rec) {
    const SetTag st = index_of(rec.addr, cfg_);
    CacheSet& set = sets_[st.set];
    const bool store = rec.op == Op::store;
    if (auto way = set.lookup(st.tag)) {
      set.touch(*way);
      if (store) set.mark_dirty(*way);
      AccessOutcome out;
      out.kind = AccessKind::hit;
      out.way = *way;
      return out;
    }
    return set.fill(st.tag, store);
  }

  void swap_ways(std::uint32_t s, unsigned a, unsigned b) { sets_.at(s).swap_ways(a, b); }

  void check() const {
    for (const auto& s : sets_) s.check();
  }

 private:
  CacheConfig cfg_;
  std::vector<CacheSet> sets_;
};

}  // namespace holiswap
