#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <future>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "holiswap/cache_model.hpp"
#include "holiswap/error.hpp"
#include "holiswap/lookup.hpp"
#include "holiswap/rng.hpp"
#include "holiswap/trace.hpp"

namespace holiswap {

inline constexpr std::string_view report_schema = "hlsw-report-1";

struct HotLineStats {
  std::uint64_t accesses = 0;
  std::uint64_t hot_accesses = 0;
  std::uint64_t distinct_lines = 0;
  std::uint64_t hot_lines = 0;
  std::uint64_t hot_residencies = 0;
  std::uint64_t cold_residencies = 0;
  double hot_access_share = 0.0;
  double hot_line_share = 0.0;
  double mean_hot_duration = 0.0;   // set accesses per residency
  double mean_cold_duration = 0.0;
};

struct HotWindow {
  std::uint32_t set_accesses = 128;
  std::uint32_t min_hits = 64;
};

// Offline classification, independent of any migration policy. Each set's
// access stream is cut into non-overlapping windows; a residency (fill to
// eviction, or to the end of the trace) is hot if it collects min_hits hits
// inside a single window. Durations count accesses to the line's set.
inline HotLineStats hot_line_stats(const Trace& trace, const CacheConfig& cfg, HotWindow window = {}) {
  struct Residency {
    bool live = false;
    std::uint64_t line = 0;
    std::uint64_t filled_at = 0;
    std::uint64_t accesses = 0;
    std::uint64_t window = 0;
    std::uint32_t window_hits = 0;
    bool hot = false;
  };

  HotLineStats st;
  CacheState cache(cfg);
  const unsigned assoc = cfg.associativity;
  std::vector<std::uint64_t> set_clock(cfg.set_count(), 0);
  std::vector<Residency> frames(std::size_t{cfg.set_count()} * assoc);
  std::set<std::uint64_t> lines, hot_lines;
  double hot_dur = 0.0, cold_dur = 0.0;

  const auto close = [&](Residency& r, std::uint64_t now) {
    if (!r.live) return;
    const double d = static_cast<double>(now - r.filled_at);
    if (r.hot) {
      ++st.hot_residencies;
      hot_dur += d;
      st.hot_accesses += r.accesses;
      hot_lines.insert(r.line);
    } else {
      ++st.cold_residencies;
      cold_dur += d;
    }
    r.live = false;
  };

  for (const auto& rec : trace) {
    const SetTag loc = index_of(rec.addr, cfg);
    const std::uint64_t now = set_clock[loc.set]++;
    const std::uint64_t win = now / window.set_accesses;
    const AccessOutcome out = cache.access(rec);
    Residency& r = frames[std::size_t{loc.set} * assoc + out.way];
    ++st.accesses;
    const std::uint64_t line = rec.addr / cfg.line_bytes;
    lines.insert(line);
    if (!out.hit()) {
      close(r, now);
      r = Residency{true, line, now, 1, win, 0, false};
      continue;
    }
    ++r.accesses;
    if (r.window != win) {
      r.window = win;
      r.window_hits = 0;
    }
    if (++r.window_hits >= window.min_hits) r.hot = true;
  }
  for (std::uint32_t s = 0; s < cfg.set_count(); ++s)
    for (unsigned w = 0; w < assoc; ++w) close(frames[std::size_t{s} * assoc + w], set_clock[s]);

  st.distinct_lines = lines.size();
  st.hot_lines = hot_lines.size();
  if (st.accesses) st.hot_access_share = static_cast<double>(st.hot_accesses) / st.accesses;
  if (st.distinct_lines) st.hot_line_share = static_cast<double>(st.hot_lines) / st.distinct_lines;
  if (st.hot_residencies) st.mean_hot_duration = hot_dur / st.hot_residencies;
  if (st.cold_residencies) st.mean_cold_duration = cold_dur / st.cold_residencies;
  return st;
}

struct SimReport {
  DesignKind design = DesignKind::sequential;
  CacheConfig cache;
  PolicyConfig policy;
  TimingParams timing;
  SimStats stats;
  EnergyLedger energy;
  std::uint64_t counter_storage_bits = 0;  // per set
  std::uint64_t predictor_storage_bits = 0;
  std::optional<HotLineStats> hot_lines;

  double miss_rate() const { return stats.accesses ? double(stats.misses) / stats.accesses : 0.0; }
  double prediction_accuracy() const {
    return stats.predictions ? double(stats.correct_predictions) / stats.predictions : 0.0;
  }
  double blocked_share() const {
    return stats.total_cycles() ? double(stats.blocked_cycles) / stats.total_cycles() : 0.0;
  }
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw invariant_error(std::string("report invariant violated: ") + what);
}

inline std::uint64_t sum(const std::vector<std::uint64_t>& v) {
  std::uint64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

}  // namespace detail

inline void check_report(const SimReport& r) {
  using detail::require;
  const SimStats& s = r.stats;
  require(s.hits + s.misses == s.accesses, "hits + misses == accesses");
  require(detail::sum(s.way_hits) == s.hits, "way histogram sums to hits");
  require(detail::sum(s.load_way_hits) <= s.hits, "load way histogram bounded by hits");
  require(s.correct_predictions <= s.predictions, "correct <= predictions");
  require(s.loads + s.stores == s.references, "loads + stores == references");
  require(s.blocked_cycles == std::uint64_t{r.timing.swap_block} * s.swaps, "blocked == swap_block * swaps");
  require(s.evictions <= s.misses && s.dirty_evictions <= s.evictions, "eviction counts");
  if (r.design == DesignKind::filter)
    require(s.l0_hits + s.l0_misses == s.references, "L0 hits + misses == references");
  else
    require(s.accesses == s.references, "every reference reaches L1");
  const EnergyLedger& e = r.energy;
  require(e.sram_pj >= 0 && e.wire_pj >= 0 && e.swap_pj >= 0 && e.counter_pj >= 0 && e.l0_pj >= 0,
          "energy components non-negative");
  if (!r.policy.enabled) require(s.swaps == 0 && e.swap_pj == 0.0 && e.counter_pj == 0.0, "disabled policy is free");
}

inline SimReport finalize_report(const Simulator& sim) {
  SimReport r;
  r.design = sim.config().design;
  r.cache = sim.config().cache;
  r.policy = sim.config().policy;
  r.timing = sim.config().timing;
  r.stats = sim.stats();
  r.energy = sim.ledger();
  r.counter_storage_bits = r.policy.enabled ? storage_bits(r.policy.counter_mode, r.cache.associativity) : 0;
  r.predictor_storage_bits = sim.predictor().storage_bits(r.cache.associativity);
  sim.cache().check();
  check_report(r);
  return r;
}

inline SimReport run_trace(const SimConfig& cfg, const Trace& trace, bool with_hot_lines = false) {
  Simulator sim(cfg);
  for (const auto& rec : trace) sim.step(rec);
  SimReport r = finalize_report(sim);
  if (with_hot_lines) r.hot_lines = hot_line_stats(trace, cfg.cache);
  return r;
}

struct SweepRow {
  std::uint32_t epoch = 0;
  std::uint32_t threshold = 0;
  double energy_pj = 0.0;
  double wire_pj = 0.0;
  double baseline_energy_pj = 0.0;
  double baseline_wire_pj = 0.0;
  std::uint64_t cycles = 0;
  std::uint64_t baseline_cycles = 0;
  std::uint64_t swaps = 0;
  std::uint64_t blocked_cycles = 0;
  std::uint64_t misses = 0;

  double energy_savings() const { return baseline_energy_pj > 0 ? 1.0 - energy_pj / baseline_energy_pj : 0.0; }
  double slowdown() const { return baseline_cycles ? double(cycles) / baseline_cycles - 1.0 : 0.0; }
  double blocked_share() const { return cycles ? double(blocked_cycles) / cycles : 0.0; }
};

// One run per epoch length with T = E/2, paired against a single
// HoLiSwap-off run of the same design on the same trace.
inline std::vector<SweepRow> sweep_epoch(const SimConfig& base, std::vector<std::uint32_t> epochs,
                                         const Trace& trace, bool parallel = true) {
  std::sort(epochs.begin(), epochs.end());
  epochs.erase(std::unique(epochs.begin(), epochs.end()), epochs.end());
  for (auto e : epochs)
    if (e < 2) throw config_error("sweep epochs must be at least 2");

  SimConfig off = base;
  off.policy.enabled = false;
  const SimReport baseline = run_trace(off, trace);

  const auto run_one = [&](std::uint32_t e) {
    SimConfig cfg = base;
    cfg.policy.enabled = true;
    cfg.policy.epoch_len = e;
    cfg.policy.threshold = e / 2;
    const SimReport rep = run_trace(cfg, trace);
    SweepRow row;
    row.epoch = e;
    row.threshold = e / 2;
    row.energy_pj = rep.energy.total();
    row.wire_pj = rep.energy.wire_pj;
    row.baseline_energy_pj = baseline.energy.total();
    row.baseline_wire_pj = baseline.energy.wire_pj;
    row.cycles = rep.stats.total_cycles();
    row.baseline_cycles = baseline.stats.total_cycles();
    row.swaps = rep.stats.swaps;
    row.blocked_cycles = rep.stats.blocked_cycles;
    row.misses = rep.stats.misses;
    return row;
  };

  for (auto e : epochs) {
    SimConfig probe = base;
    probe.policy.epoch_len = e;
    probe.policy.threshold = e / 2;
    probe.validate();
  }

  std::vector<SweepRow> rows;
  if (parallel) {
    std::vector<std::future<SweepRow>> jobs;
    for (auto e : epochs) jobs.push_back(std::async(std::launch::async, run_one, e));
    for (auto& j : jobs) rows.push_back(j.get());
  } else {
    for (auto e : epochs) rows.push_back(run_one(e));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization. Field order is fixed; energies carry 3 decimals, ratios 4.

namespace detail {

inline std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  std::string s(buf);
  if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string energy(double v) { return fixed(v, 3); }
inline std::string ratio(double v) { return fixed(v, 4); }

class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  void begin(const char* key = nullptr) { open(key, '{'); }
  void end() { close('}'); }
  void begin_array(const char* key) { open(key, '['); }
  void end_array() { close(']'); }

  void raw(const char* key, const std::string& literal) {
    item(key);
    out_ << literal;
  }
  void str(const char* key, std::string_view v) { raw(key, "\"" + std::string(v) + "\""); }
  void num(const char* key, std::uint64_t v) { raw(key, std::to_string(v)); }
  void boolean(const char* key, bool v) { raw(key, v ? "true" : "false"); }

 private:
  void item(const char* key) {
    if (!first_.empty()) {
      if (!first_.back()) out_ << ",";
      first_.back() = false;
      if (!inline_.back()) newline();
    }
    if (key) out_ << "\"" << key << "\": ";
  }
  void open(const char* key, char c) {
    item(key);
    out_ << c;
    first_.push_back(true);
    inline_.push_back(c == '[');
  }
  void close(char c) {
    const bool was_inline = inline_.back();
    first_.pop_back();
    inline_.pop_back();
    if (!was_inline) newline();
    out_ << c;
    if (first_.empty()) out_ << "\n";
  }
  void newline() {
    out_ << "\n" << std::string(2 * first_.size(), ' ');
  }

  std::ostream& out_;
  std::vector<bool> first_;
  std::vector<bool> inline_;
};

}  // namespace detail

inline void emit_json(std::ostream& out, const SimReport& r) {
  using detail::energy;
  using detail::ratio;
  detail::JsonWriter w(out);
  const SimStats& s = r.stats;
  w.begin();
  w.str("schema", report_schema);
  w.begin("config");
  w.str("design", to_string(r.design));
  w.boolean("holiswap", r.policy.enabled);
  w.num("epoch", r.policy.epoch_len);
  w.num("threshold", r.policy.threshold);
  w.str("counters", to_string(r.policy.counter_mode));
  w.num("seed", r.policy.rng_seed);
  w.str("rng", rng_algorithm);
  w.num("capacity_bytes", r.cache.capacity_bytes);
  w.num("line_bytes", r.cache.line_bytes);
  w.num("associativity", r.cache.associativity);
  w.num("sets", r.cache.set_count());
  w.num("miss_penalty", r.timing.miss_penalty);
  w.num("swap_block", r.timing.swap_block);
  w.end();
  w.begin("totals");
  w.num("references", s.references);
  w.num("accesses", s.accesses);
  w.num("loads", s.loads);
  w.num("stores", s.stores);
  w.num("hits", s.hits);
  w.num("misses", s.misses);
  w.num("evictions", s.evictions);
  w.num("dirty_evictions", s.dirty_evictions);
  w.num("swaps", s.swaps);
  w.num("access_cycles", s.access_cycles);
  w.num("blocked_cycles", s.blocked_cycles);
  w.num("total_cycles", s.total_cycles());
  w.end();
  w.begin("energy_pj");
  w.raw("sram", energy(r.energy.sram_pj));
  w.raw("wire", energy(r.energy.wire_pj));
  w.raw("swap", energy(r.energy.swap_pj));
  w.raw("counter", energy(r.energy.counter_pj));
  w.raw("l0", energy(r.energy.l0_pj));
  w.raw("total", energy(r.energy.total()));
  w.end();
  w.begin_array("way_histogram");
  for (auto v : s.way_hits) w.num(nullptr, v);
  w.end_array();
  w.begin_array("load_way_histogram");
  for (auto v : s.load_way_hits) w.num(nullptr, v);
  w.end_array();
  w.begin("prediction");
  w.num("predictions", s.predictions);
  w.num("correct", s.correct_predictions);
  w.raw("accuracy", ratio(r.prediction_accuracy()));
  w.end();
  w.begin("l0");
  w.num("hits", s.l0_hits);
  w.num("misses", s.l0_misses);
  w.end();
  w.begin("storage_bits");
  w.num("counters_per_set", r.counter_storage_bits);
  w.num("predictor", r.predictor_storage_bits);
  w.end();
  w.begin("ratios");
  w.raw("miss_rate", ratio(r.miss_rate()));
  w.raw("blocked_share", ratio(r.blocked_share()));
  w.end();
  if (r.hot_lines) {
    const HotLineStats& h = *r.hot_lines;
    w.begin("hot_lines");
    w.raw("hot_access_share", ratio(h.hot_access_share));
    w.raw("hot_line_share", ratio(h.hot_line_share));
    w.raw("mean_hot_duration", ratio(h.mean_hot_duration));
    w.raw("mean_cold_duration", ratio(h.mean_cold_duration));
    w.num("distinct_lines", h.distinct_lines);
    w.num("hot_lines", h.hot_lines);
    w.end();
  }
  w.end();
}

inline void emit_json(std::ostream& out, const HotLineStats& h) {
  detail::JsonWriter w(out);
  w.begin();
  w.str("schema", report_schema);
  w.num("accesses", h.accesses);
  w.num("hot_accesses", h.hot_accesses);
  w.num("distinct_lines", h.distinct_lines);
  w.num("hot_lines", h.hot_lines);
  w.raw("hot_access_share", detail::ratio(h.hot_access_share));
  w.raw("hot_line_share", detail::ratio(h.hot_line_share));
  w.raw("mean_hot_duration", detail::ratio(h.mean_hot_duration));
  w.raw("mean_cold_duration", detail::ratio(h.mean_cold_duration));
  w.end();
}

inline void emit_csv(std::ostream& out, const SimReport& r) {
  using detail::energy;
  using detail::ratio;
  const SimStats& s = r.stats;
  out << "schema,design,holiswap,epoch,threshold,counters,seed,accesses,hits,misses,swaps,"
         "blocked_cycles,total_cycles,sram_pj,wire_pj,swap_pj,counter_pj,l0_pj,total_pj,"
         "predictions,correct,accuracy,miss_rate";
  for (std::size_t w = 0; w < s.way_hits.size(); ++w) out << ",way" << w << "_hits";
  out << "\n";
  out << report_schema << ',' << to_string(r.design) << ',' << (r.policy.enabled ? "on" : "off") << ','
      << r.policy.epoch_len << ',' << r.policy.threshold << ',' << to_string(r.policy.counter_mode) << ','
      << r.policy.rng_seed << ',' << s.accesses << ',' << s.hits << ',' << s.misses << ',' << s.swaps << ','
      << s.blocked_cycles << ',' << s.total_cycles() << ',' << energy(r.energy.sram_pj) << ','
      << energy(r.energy.wire_pj) << ',' << energy(r.energy.swap_pj) << ',' << energy(r.energy.counter_pj)
      << ',' << energy(r.energy.l0_pj) << ',' << energy(r.energy.total()) << ',' << s.predictions << ','
      << s.correct_predictions << ',' << ratio(r.prediction_accuracy()) << ',' << ratio(r.miss_rate());
  for (auto v : s.way_hits) out << ',' << v;
  out << "\n";
}

inline void emit_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  using detail::energy;
  using detail::ratio;
  out << "epoch,threshold,energy_pj,baseline_energy_pj,energy_savings,wire_pj,baseline_wire_pj,"
         "cycles,baseline_cycles,slowdown,swaps,blocked_cycles,blocked_share,misses\n";
  for (const auto& r : rows)
    out << r.epoch << ',' << r.threshold << ',' << energy(r.energy_pj) << ',' << energy(r.baseline_energy_pj)
        << ',' << ratio(r.energy_savings()) << ',' << energy(r.wire_pj) << ',' << energy(r.baseline_wire_pj)
        << ',' << r.cycles << ',' << r.baseline_cycles << ',' << ratio(r.slowdown()) << ',' << r.swaps << ','
        << r.blocked_cycles << ',' << ratio(r.blocked_share()) << ',' << r.misses << "\n";
}

inline void emit_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  using detail::energy;
  using detail::ratio;
  detail::JsonWriter w(out);
  w.begin();
  w.str("schema", report_schema);
  w.begin_array("rows");
  for (const auto& r : rows) {
    w.raw(nullptr, "{\"epoch\": " + std::to_string(r.epoch) + ", \"threshold\": " + std::to_string(r.threshold) +
                       ", \"energy_pj\": " + energy(r.energy_pj) +
                       ", \"baseline_energy_pj\": " + energy(r.baseline_energy_pj) +
                       ", \"energy_savings\": " + ratio(r.energy_savings()) + ", \"wire_pj\": " + energy(r.wire_pj) +
                       ", \"cycles\": " + std::to_string(r.cycles) +
                       ", \"baseline_cycles\": " + std::to_string(r.baseline_cycles) +
                       ", \"swaps\": " + std::to_string(r.swaps) +
                       ", \"blocked_cycles\": " + std::to_string(r.blocked_cycles) +
                       ", \"blocked_share\": " + ratio(r.blocked_share()) + "}");
  }
  w.end_array();
  w.end();
}

}  // namespace holiswap
