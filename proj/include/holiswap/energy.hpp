#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "holiswap/error.hpp"
#include "holiswap/key_value.hpp"
#include "holiswap/policy.hpp"

namespace holiswap {

// Per-way access energies in pJ for a cache whose ways live in separate
// subarrays. A sequential probe pays the accessed way's array and output
// wire; a parallel probe pays every array but only the selected way's wire,
// the others being gated off before they toggle.
class EnergyTable {
 public:
  EnergyTable() = default;
  EnergyTable(std::vector<double> sram_seq, std::vector<double> wire)
      : sram_(std::move(sram_seq)), wire_(std::move(wire)) {
    if (sram_.empty() || sram_.size() != wire_.size())
      throw config_error("energy table needs matching, non-empty sram and wire columns");
    for (std::size_t w = 0; w < sram_.size(); ++w)
      if (!(sram_[w] >= 0.0) || !(wire_[w] >= 0.0))
        throw config_error("energy table entries must be non-negative");
  }

  // 32KB, 4-way, one 8KB subarray per way, 22nm.
  static EnergyTable default_l1_32k() {
    return from_totals({5.7, 8.8, 10.9, 14.0}, {1.6, 4.7, 6.8, 9.9});
  }

  static EnergyTable from_totals(const std::vector<double>& total_seq, const std::vector<double>& wire) {
    if (total_seq.size() != wire.size()) throw config_error("total and wire columns differ in length");
    std::vector<double> sram(total_seq.size());
    for (std::size_t w = 0; w < sram.size(); ++w) sram[w] = total_seq[w] - wire[w];
    return EnergyTable(std::move(sram), wire);
  }

  unsigned ways() const { return static_cast<unsigned>(wire_.size()); }
  double sram_seq(unsigned w) const { return sram_.at(w); }
  double wire(unsigned w) const { return wire_.at(w); }
  double total_seq(unsigned w) const { return sram_seq(w) + wire(w); }
  double sram_all() const { return std::accumulate(sram_.begin(), sram_.end(), 0.0); }
  double total_par(unsigned w) const { return sram_all() + wire(w); }

  double mean_total_seq() const {
    double sum = 0.0;
    for (unsigned w = 0; w < ways(); ++w) sum += total_seq(w);
    return sum / ways();
  }

 private:
  std::vector<double> sram_;
  std::vector<double> wire_;
};

enum class LookupRule : std::uint8_t { sequential, parallel };

struct AccessEnergy {
  double sram = 0.0;
  double wire = 0.0;
  double total() const { return sram + wire; }
};

inline AccessEnergy access_energy(const EnergyTable& table, LookupRule rule, unsigned way) {
  if (way >= table.ways())
    throw config_error("way " + std::to_string(way) + " not in energy table");
  if (rule == LookupRule::sequential) return {table.sram_seq(way), table.wire(way)};
  return {table.sram_all(), table.wire(way)};
}

// Two reads and two writes, each charged as a targeted sequential access;
// writes cost the same as reads.
inline double swap_energy(const EnergyTable& table, unsigned a, unsigned b) {
  if (a == b) throw config_error("swap_energy: ways must differ");
  return 2.0 * (access_energy(table, LookupRule::sequential, a).total() +
                access_energy(table, LookupRule::sequential, b).total());
}

// Counter upkeep is a flat per-access charge: logarithmic counters cost 0.62%
// of the mean sequential access energy, exact counters scale by their width.
inline constexpr double log_counter_energy_fraction = 0.0062;

inline double counter_energy_per_access(const EnergyTable& table, CounterMode mode) {
  const double log_cost = log_counter_energy_fraction * table.mean_total_seq();
  const double width_ratio = static_cast<double>(storage_bits(mode, table.ways())) /
                             storage_bits(CounterMode::logarithmic, table.ways());
  return log_cost * width_ratio;
}

inline double counter_overhead_energy(const EnergyTable& table, CounterMode mode, bool enabled,
                                      std::uint64_t events) {
  if (!enabled) return 0.0;
  return counter_energy_per_access(table, mode) * static_cast<double>(events);
}

inline constexpr double subarray_bytes = 8192;

struct GridPos {
  int x = 0;
  int y = 0;
};

// Subarrays on a rows x cols grid with output wires Manhattan-routed to the
// way multiplexer at (0,0). A way spread over several subarrays is charged
// the mean wire energy of its positions.
struct GeometryModel {
  unsigned rows = 2;
  unsigned cols = 2;
  std::vector<std::vector<GridPos>> way_positions;
  double base_wire = 1.6;
  double hop_x = 3.1;
  double hop_y = 5.2;
  double sram_access = 4.1;

  static GeometryModel default_2x2() { return round_robin(2, 2, 4); }

  // Ways assigned to subarrays in row-major order, wrapping around.
  static GeometryModel round_robin(unsigned rows, unsigned cols, unsigned ways) {
    if (rows == 0 || cols == 0 || ways == 0) throw config_error("geometry dimensions must be positive");
    GeometryModel g;
    g.rows = rows;
    g.cols = cols;
    g.way_positions.assign(ways, {});
    const unsigned subarrays = rows * cols;
    const unsigned slots = std::max(subarrays, ways);
    for (unsigned i = 0; i < slots; ++i) {
      const unsigned sub = i % subarrays;
      g.way_positions[i % ways].push_back({static_cast<int>(sub % cols), static_cast<int>(sub / cols)});
    }
    return g;
  }

  // 8KB subarrays: 16KB -> 2x1, 32KB -> 2x2, 64KB -> 2x4.
  static GeometryModel for_capacity(std::uint64_t capacity_bytes, unsigned ways) {
    const double subs = static_cast<double>(capacity_bytes) / subarray_bytes;
    if (subs == 1) return round_robin(1, 1, ways);
    if (subs == 2) return round_robin(2, 1, ways);
    if (subs == 4) return round_robin(2, 2, ways);
    if (subs == 8) return round_robin(2, 4, ways);
    throw config_error("no built-in subarray layout for " + std::to_string(capacity_bytes) +
                       " bytes; supply a geometry file");
  }

  unsigned ways() const { return static_cast<unsigned>(way_positions.size()); }

  EnergyTable table() const;
};

inline double wire_from_geometry(const GeometryModel& g, unsigned way) {
  if (way >= g.way_positions.size() || g.way_positions[way].empty())
    throw config_error("way " + std::to_string(way) + " has no subarray position");
  double sum = 0.0;
  for (const auto& p : g.way_positions[way]) {
    if (p.x < 0 || p.y < 0 || static_cast<unsigned>(p.x) >= g.cols || static_cast<unsigned>(p.y) >= g.rows)
      throw config_error("way " + std::to_string(way) + " placed outside the grid");
    sum += g.base_wire + p.x * g.hop_x + p.y * g.hop_y;
  }
  return sum / static_cast<double>(g.way_positions[way].size());
}

inline EnergyTable GeometryModel::table() const {
  std::vector<double> sram(ways(), sram_access), wire(ways());
  for (unsigned w = 0; w < ways(); ++w) wire[w] = wire_from_geometry(*this, w);
  return EnergyTable(std::move(sram), std::move(wire));
}

// Accumulated energy of one run, in pJ.
struct EnergyLedger {
  double sram_pj = 0.0;
  double wire_pj = 0.0;
  double swap_pj = 0.0;
  double counter_pj = 0.0;
  double l0_pj = 0.0;

  double total() const { return sram_pj + wire_pj + swap_pj + counter_pj + l0_pj; }
  void add(AccessEnergy e) {
    sram_pj += e.sram;
    wire_pj += e.wire;
  }
};

// Energy source file. Either an explicit table
//   wire = 1.6, 4.7, 6.8, 9.9
//   sram = 4.1, 4.1, 4.1, 4.1      (or total_seq = ...)
// or a subarray placement
//   rows = 2, cols = 2, base_wire, hop_x, hop_y, sram_access,
//   way0 = x,y[; x,y ...]          (unlisted ways: row-major round robin)
inline EnergyTable energy_table_from(const KeyValueFile& kv, unsigned ways) {
  EnergyTable table;
  if (auto wire = kv.get_doubles("wire")) {
    if (auto total = kv.get_doubles("total_seq")) {
      table = EnergyTable::from_totals(*total, *wire);
    } else {
      auto sram = kv.get_doubles("sram").value_or(std::vector<double>(wire->size(), 4.1));
      table = EnergyTable(std::move(sram), std::move(*wire));
    }
  } else {
    const auto rows = static_cast<unsigned>(kv.get_uint("rows").value_or(2));
    const auto cols = static_cast<unsigned>(kv.get_uint("cols").value_or(2));
    if (rows == 0 || cols == 0) throw input_error(kv.source() + ": rows and cols must be positive");
    GeometryModel g = GeometryModel::round_robin(rows, cols, ways);
    g.base_wire = kv.get_double("base_wire").value_or(g.base_wire);
    g.hop_x = kv.get_double("hop_x").value_or(g.hop_x);
    g.hop_y = kv.get_double("hop_y").value_or(g.hop_y);
    g.sram_access = kv.get_double("sram_access").value_or(g.sram_access);
    for (unsigned w = 0; w < ways; ++w) {
      const std::string key = "way" + std::to_string(w);
      auto spec = kv.get(key);
      if (!spec) continue;
      std::vector<GridPos> positions;
      for (const auto& pos : KeyValueFile::split(*spec, ';')) {
        auto xy = KeyValueFile::split(pos, ',');
        if (xy.size() != 2) throw input_error(kv.where(key) + ": expected x,y");
        positions.push_back({static_cast<int>(KeyValueFile::to_uint(xy[0], kv.where(key))),
                             static_cast<int>(KeyValueFile::to_uint(xy[1], kv.where(key)))});
      }
      g.way_positions[w] = std::move(positions);
    }
    try {
      table = g.table();
    } catch (const config_error& e) {
      throw input_error(kv.source() + ": " + e.what());
    }
  }
  if (table.ways() != ways)
    throw input_error(kv.source() + ": energy table has " + std::to_string(table.ways()) +
                      " ways, cache has " + std::to_string(ways));
  return table;
}

}  // namespace holiswap
