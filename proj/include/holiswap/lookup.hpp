#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holiswap/cache_model.hpp"
#include "holiswap/energy.hpp"
#include "holiswap/error.hpp"
#include "holiswap/policy.hpp"
#include "holiswap/trace_record.hpp"

namespace holiswap {

enum class DesignKind : std::uint8_t { sequential, parallel, prediction_static, prediction_pc, filter };

inline std::string_view to_string(DesignKind d) {
  switch (d) {
    case DesignKind::sequential: return "sequential";
    case DesignKind::parallel: return "parallel";
    case DesignKind::prediction_static: return "prediction-static";
    case DesignKind::prediction_pc: return "prediction-pc";
    case DesignKind::filter: return "filter";
  }
  return "?";
}

inline std::optional<DesignKind> parse_design(std::string_view s) {
  for (auto d : {DesignKind::sequential, DesignKind::parallel, DesignKind::prediction_static,
                 DesignKind::prediction_pc, DesignKind::filter})
    if (s == to_string(d)) return d;
  if (s == "prediction") return DesignKind::prediction_static;
  return std::nullopt;
}

inline bool is_prediction(DesignKind d) {
  return d == DesignKind::prediction_static || d == DesignKind::prediction_pc;
}

// Latencies in cycles.
struct TimingParams {
  std::uint32_t seq_hit = 3;
  std::uint32_t par_hit = 2;
  std::uint32_t pred_hit = 2;
  std::uint32_t pred_penalty = 1;  // stores and mispredicted loads
  std::uint32_t l0_hit = 1;
  std::uint32_t swap_block = 4;
  std::uint32_t miss_penalty = 20;

  void validate() const {
    for (auto v : {seq_hit, par_hit, pred_hit, pred_penalty, l0_hit, swap_block, miss_penalty})
      if (v == 0) throw config_error("timing parameters must be positive");
  }
};

class WayPredictor {
 public:
  enum class Kind : std::uint8_t { static_w0, pc_table };

  explicit WayPredictor(Kind kind, unsigned index_bits = 10) : kind_(kind), index_bits_(index_bits) {
    if (index_bits > 24) throw config_error("predictor table too large");
    if (kind_ == Kind::pc_table) table_.assign(std::size_t{1} << index_bits, 0);
  }

  Kind kind() const { return kind_; }

  std::size_t index(std::uint64_t pc) const {
    return static_cast<std::size_t>((pc >> 2) & ((std::uint64_t{1} << index_bits_) - 1));
  }

  unsigned predict(std::uint64_t pc) const {
    return kind_ == Kind::static_w0 ? 0u : table_[index(pc)];
  }

  void update(std::uint64_t pc, unsigned actual_way) {
    if (kind_ == Kind::pc_table) table_[index(pc)] = static_cast<std::uint8_t>(actual_way);
  }

  // Table size in bits; the constant-W0 predictor has no state.
  std::uint64_t storage_bits(unsigned associativity) const {
    if (kind_ == Kind::static_w0) return 0;
    const auto way_bits = static_cast<std::uint64_t>(std::bit_width(associativity - 1u));
    return table_.size() * std::max<std::uint64_t>(way_bits, 1);
  }

 private:
  Kind kind_;
  unsigned index_bits_;
  std::vector<std::uint8_t> table_;
};

// Direct-mapped filter cache. Holds clean copies only; stores write through.
class L0Cache {
 public:
  explicit L0Cache(std::uint32_t capacity_bytes = 1024, std::uint32_t line_bytes = 64)
      : line_bytes_(line_bytes) {
    if (line_bytes == 0 || capacity_bytes < line_bytes || capacity_bytes % line_bytes != 0)
      throw config_error("L0 capacity must be a positive multiple of the line size");
    lines_.assign(capacity_bytes / line_bytes, Slot{});
  }

  std::size_t lines() const { return lines_.size(); }

  bool access(std::uint64_t addr) const {
    const std::uint64_t line = addr / line_bytes_;
    const Slot& s = lines_[line % lines_.size()];
    return s.valid && s.line == line;
  }

  void fill(std::uint64_t addr) {
    const std::uint64_t line = addr / line_bytes_;
    lines_[line % lines_.size()] = Slot{true, line};
  }

 private:
  struct Slot {
    bool valid = false;
    std::uint64_t line = 0;
  };
  std::uint32_t line_bytes_;
  std::vector<Slot> lines_;
};

enum class L0Result : std::uint8_t { hit, miss };

inline L0Result l0_access(const L0Cache& l0, std::uint64_t addr) {
  return l0.access(addr) ? L0Result::hit : L0Result::miss;
}

struct SimConfig {
  CacheConfig cache;
  PolicyConfig policy;
  TimingParams timing;
  DesignKind design = DesignKind::sequential;
  EnergyTable energy = EnergyTable::default_l1_32k();
  LookupRule filter_l1 = LookupRule::sequential;  // L1 lookup beneath the L0
  std::uint32_t l0_bytes = 1024;
  double l0_energy = 4.1;
  unsigned predictor_index_bits = 10;

  void validate() const {
    cache.validate();
    policy.validate();
    timing.validate();
    if (energy.ways() != cache.associativity)
      throw config_error("energy table has " + std::to_string(energy.ways()) + " ways, cache has " +
                         std::to_string(cache.associativity));
    if (!(l0_energy >= 0.0)) throw config_error("L0 energy must be non-negative");
  }
};

// Everything one reference cost.
struct StepResult {
  std::uint32_t cycles = 0;          // access latency, excluding port blocking
  std::uint32_t blocked_cycles = 0;  // swap issued by this access
  AccessEnergy l1;
  double swap_pj = 0.0;
  double counter_pj = 0.0;
  double l0_pj = 0.0;
  std::optional<AccessOutcome> outcome;  // empty when the L0 absorbed the reference
  bool l0_hit = false;
  std::optional<unsigned> predicted_way;  // set for predicted load hits
  bool correct = false;
  std::optional<unsigned> swapped_from;

  double energy() const { return l1.total() + swap_pj + counter_pj + l0_pj; }
};

struct SimStats {
  std::uint64_t references = 0;
  std::uint64_t accesses = 0;  // L1 accesses
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t dirty_evictions = 0;
  std::uint64_t swaps = 0;
  std::uint64_t access_cycles = 0;
  std::uint64_t blocked_cycles = 0;
  std::vector<std::uint64_t> way_hits;
  std::vector<std::uint64_t> load_way_hits;
  std::uint64_t predictions = 0;
  std::uint64_t correct_predictions = 0;
  std::uint64_t l0_hits = 0;
  std::uint64_t l0_misses = 0;

  std::uint64_t total_cycles() const { return access_cycles + blocked_cycles; }
};

// One cache instance running one design. Single-threaded; independent
// instances share nothing.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg)
      : cfg_((cfg.validate(), std::move(cfg))),
        cache_(cfg_.cache),
        policy_(cfg_.policy, cfg_.cache.set_count(), cfg_.cache.associativity),
        predictor_(cfg_.design == DesignKind::prediction_pc ? WayPredictor::Kind::pc_table
                                                            : WayPredictor::Kind::static_w0,
                   cfg_.predictor_index_bits),
        l0_(cfg_.l0_bytes, cfg_.cache.line_bytes),
        counter_pj_(counter_energy_per_access(cfg_.energy, cfg_.policy.counter_mode)) {
    stats_.way_hits.assign(cfg_.cache.associativity, 0);
    stats_.load_way_hits.assign(cfg_.cache.associativity, 0);
  }

  const SimConfig& config() const { return cfg_; }
  const SimStats& stats() const { return stats_; }
  const EnergyLedger& ledger() const { return ledger_; }
  const CacheState& cache() const { return cache_; }
  const HotLinePolicy& policy() const { return policy_; }
  const WayPredictor& predictor() const { return predictor_; }

  StepResult step(const TraceRecord& rec) {
    StepResult r;
    ++stats_.references;
    (rec.op == Op::load ? stats_.loads : stats_.stores) += 1;

    if (cfg_.design == DesignKind::filter) {
      r.l0_pj = cfg_.l0_energy;
      r.cycles = cfg_.timing.l0_hit;
      const bool hit = l0_access(l0_, rec.addr) == L0Result::hit;
      (hit ? stats_.l0_hits : stats_.l0_misses) += 1;
      r.l0_hit = hit;
      if (!hit || rec.op == Op::store) {
        l1_access(rec, r);
        l0_.fill(rec.addr);
      }
    } else {
      l1_access(rec, r);
    }

    stats_.access_cycles += r.cycles;
    stats_.blocked_cycles += r.blocked_cycles;
    ledger_.add(r.l1);
    ledger_.swap_pj += r.swap_pj;
    ledger_.counter_pj += r.counter_pj;
    ledger_.l0_pj += r.l0_pj;
    return r;
  }

 private:
  std::uint32_t hit_latency(LookupRule rule) const {
    return rule == LookupRule::sequential ? cfg_.timing.seq_hit : cfg_.timing.par_hit;
  }

  void l1_access(const TraceRecord& rec, StepResult& r) {
    const SetTag st = index_of(rec.addr, cfg_.cache);
    const AccessOutcome out = cache_.access(rec);
    r.outcome = out;
    ++stats_.accesses;
    if (out.hit()) {
      ++stats_.hits;
      ++stats_.way_hits[out.way];
      if (rec.op == Op::load) ++stats_.load_way_hits[out.way];
    } else {
      ++stats_.misses;
      if (out.victim_evicted) ++stats_.evictions;
      if (out.victim_dirty) ++stats_.dirty_evictions;
      policy_.on_fill(st.set, out.way);
    }

    charge_lookup(rec, out, r);

    if (policy_.enabled()) {
      r.counter_pj = counter_pj_;
      const PolicyAction action =
          policy_.on_access(st.set, out.hit() ? std::optional<unsigned>(out.way) : std::nullopt);
      if (action.is_swap()) {
        cache_.swap_ways(st.set, action.hot_way, 0);
        policy_.on_swap(st.set, action.hot_way, 0);
        ++stats_.swaps;
        r.swapped_from = action.hot_way;
        r.swap_pj = swap_energy(cfg_.energy, action.hot_way, 0);
        r.blocked_cycles = cfg_.timing.swap_block;
        if (out.way == action.hot_way) predictor_.update(rec.pc, 0);
      }
    }
  }

  void charge_lookup(const TraceRecord& rec, const AccessOutcome& out, StepResult& r) {
    const auto seq = [&](unsigned way) { return access_energy(cfg_.energy, LookupRule::sequential, way); };
    const std::uint32_t miss_extra = out.hit() ? 0 : cfg_.timing.miss_penalty;
    switch (cfg_.design) {
      case DesignKind::sequential:
      case DesignKind::parallel:
      case DesignKind::filter: {
        LookupRule rule = cfg_.design == DesignKind::parallel ? LookupRule::parallel : LookupRule::sequential;
        if (cfg_.design == DesignKind::filter) rule = cfg_.filter_l1;
        r.l1 = access_energy(cfg_.energy, rule, out.way);
        r.cycles += hit_latency(rule) + miss_extra;
        return;
      }
      case DesignKind::prediction_static:
      case DesignKind::prediction_pc: {
        if (rec.op == Op::store) {
          r.l1 = seq(out.way);
          r.cycles += cfg_.timing.pred_hit + cfg_.timing.pred_penalty + miss_extra;
          return;
        }
        const unsigned predicted = predictor_.predict(rec.pc);
        AccessEnergy e = seq(predicted);
        if (out.hit()) {
          ++stats_.predictions;
          r.predicted_way = predicted;
          r.correct = predicted == out.way;
          if (r.correct) {
            ++stats_.correct_predictions;
            r.cycles += cfg_.timing.pred_hit;
          } else {
            const AccessEnergy second = seq(out.way);
            e.sram += second.sram;
            e.wire += second.wire;
            r.cycles += cfg_.timing.pred_hit + cfg_.timing.pred_penalty;
          }
        } else {
          const AccessEnergy fill = seq(out.way);
          e.sram += fill.sram;
          e.wire += fill.wire;
          r.cycles += cfg_.timing.pred_hit + miss_extra;
        }
        r.l1 = e;
        predictor_.update(rec.pc, out.way);
        return;
      }
    }
  }

  SimConfig cfg_;
  CacheState cache_;
  HotLinePolicy policy_;
  WayPredictor predictor_;
  L0Cache l0_;
  double counter_pj_;
  SimStats stats_;
  EnergyLedger ledger_;
};

}  // namespace holiswap
