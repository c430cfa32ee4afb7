#pragma once

#include <cstdint>
#include <string>

#include "holiswap/energy.hpp"
#include "holiswap/error.hpp"
#include "holiswap/key_value.hpp"
#include "holiswap/lookup.hpp"

namespace holiswap {

// Flat run description shared by the command line and HLSW_CONFIG files.
// Config keys carry the flag names without dashes (cache-kb -> cache_kb).
struct RunConfig {
  std::string design = "sequential";
  std::string holiswap = "on";
  std::uint32_t epoch = 256;
  std::uint32_t threshold = 0;  // 0: epoch / 2
  std::string counters = "log";
  std::uint64_t seed = 0;
  std::uint64_t cache_kb = 32;
  std::uint32_t line_bytes = 64;
  std::uint32_t assoc = 4;
  std::string geometry;
  std::string filter_l1 = "sequential";
  TimingParams timing;
  std::string trace;
  std::string format = "json";
  std::string out;

  void apply(const KeyValueFile& kv) {
    const auto u32 = [&](const char* key, std::uint32_t& dst) {
      if (auto v = kv.get_uint(key)) dst = static_cast<std::uint32_t>(*v);
    };
    const auto text = [&](const char* key, std::string& dst) {
      if (auto v = kv.get(key)) dst = *v;
    };
    text("design", design);
    text("holiswap", holiswap);
    u32("epoch", epoch);
    u32("threshold", threshold);
    text("counters", counters);
    if (auto v = kv.get_uint("seed")) seed = *v;
    if (auto v = kv.get_uint("cache_kb")) cache_kb = *v;
    u32("line_bytes", line_bytes);
    u32("assoc", assoc);
    text("geometry", geometry);
    text("filter_l1", filter_l1);
    u32("seq_hit", timing.seq_hit);
    u32("par_hit", timing.par_hit);
    u32("pred_hit", timing.pred_hit);
    u32("pred_penalty", timing.pred_penalty);
    u32("l0_hit", timing.l0_hit);
    u32("swap_block", timing.swap_block);
    u32("miss_penalty", timing.miss_penalty);
    text("trace", trace);
    text("format", format);
    text("out", out);
  }

  std::uint32_t effective_threshold() const { return threshold ? threshold : epoch / 2; }

  // config_error for bad or conflicting values, input_error for an
  // unreadable geometry file.
  SimConfig to_sim_config() const {
    SimConfig cfg;
    auto d = parse_design(design);
    if (!d) throw config_error("unknown design '" + design + "'");
    cfg.design = *d;
    if (holiswap != "on" && holiswap != "off") throw config_error("--holiswap takes on|off");
    cfg.policy.enabled = holiswap == "on";
    if (counters == "exact")
      cfg.policy.counter_mode = CounterMode::exact;
    else if (counters == "log")
      cfg.policy.counter_mode = CounterMode::logarithmic;
    else
      throw config_error("--counters takes exact|log");
    if (epoch < 2 && threshold == 0) throw config_error("--epoch must be at least 2");
    cfg.policy.epoch_len = epoch;
    cfg.policy.threshold = effective_threshold();
    cfg.policy.rng_seed = seed;
    cfg.cache.capacity_bytes = cache_kb * 1024;
    cfg.cache.line_bytes = line_bytes;
    cfg.cache.associativity = assoc;
    if (filter_l1 == "sequential")
      cfg.filter_l1 = LookupRule::sequential;
    else if (filter_l1 == "parallel")
      cfg.filter_l1 = LookupRule::parallel;
    else
      throw config_error("filter_l1 takes sequential|parallel");
    if (format != "json" && format != "csv") throw config_error("--format takes json|csv");
    cfg.timing = timing;
    cfg.cache.validate();
    if (!geometry.empty())
      cfg.energy = energy_table_from(KeyValueFile::load(geometry), assoc);
    else if (cfg.cache.capacity_bytes == 32768 && assoc == 4)
      cfg.energy = EnergyTable::default_l1_32k();
    else
      cfg.energy = GeometryModel::for_capacity(cfg.cache.capacity_bytes, assoc).table();
    cfg.validate();
    return cfg;
  }
};

}  // namespace holiswap
