#include <gtest/gtest.h>

#include <sstream>

#include "holiswap/energy.hpp"

namespace holiswap {
namespace {

constexpr double kTol = 0.05;
const double kSeq[] = {5.7, 8.8, 10.9, 14.0};
const double kWire[] = {1.6, 4.7, 6.8, 9.9};
const double kPar[] = {18.0, 21.1, 23.2, 26.3};

TEST(EnergyTable, ReproducesMeasuredCells) {
  const auto t = EnergyTable::default_l1_32k();
  ASSERT_EQ(t.ways(), 4u);
  for (unsigned w = 0; w < 4; ++w) {
    EXPECT_NEAR(access_energy(t, LookupRule::sequential, w).total(), kSeq[w], kTol);
    EXPECT_NEAR(access_energy(t, LookupRule::parallel, w).total(), kPar[w], kTol);
    EXPECT_NEAR(access_energy(t, LookupRule::sequential, w).wire, kWire[w], kTol);
    EXPECT_NEAR(access_energy(t, LookupRule::parallel, w).wire, kWire[w], kTol);
  }
  EXPECT_GT(t.wire(3) / t.wire(0), 6.0);
}

TEST(EnergyTable, Examples) {
  const auto t = EnergyTable::default_l1_32k();
  auto w1 = access_energy(t, LookupRule::sequential, 1);
  EXPECT_NEAR(w1.total(), 8.8, 1e-9);
  EXPECT_NEAR(w1.wire, 4.7, 1e-9);
  auto p2 = access_energy(t, LookupRule::parallel, 2);
  EXPECT_NEAR(p2.total(), 23.2, 1e-9);
  EXPECT_NEAR(p2.wire, 6.8, 1e-9);
  auto p0 = access_energy(t, LookupRule::parallel, 0);
  EXPECT_NEAR(p0.sram, 16.4, 1e-9);
  EXPECT_NEAR(p0.wire, 1.6, 1e-9);
  EXPECT_THROW(access_energy(t, LookupRule::sequential, 4), config_error);
}

TEST(EnergyTable, ParallelRowConsistency) {
  const auto t = EnergyTable::default_l1_32k();
  for (unsigned w = 0; w < 4; ++w) EXPECT_NEAR(kPar[w] - kSeq[w], t.sram_all() - t.sram_seq(w), kTol);
  for (unsigned w = 1; w < 4; ++w) EXPECT_GT(t.wire(w), t.wire(w - 1));
}

TEST(SwapEnergy, TwoReadsTwoWrites) {
  const auto t = EnergyTable::default_l1_32k();
  EXPECT_NEAR(swap_energy(t, 0, 3), 39.4, 1e-9);
  EXPECT_NEAR(swap_energy(t, 3, 0), 39.4, 1e-9);
  EXPECT_NEAR(swap_energy(t, 0, 1), 29.0, 1e-9);
  EXPECT_THROW(swap_energy(t, 2, 2), config_error);
}

TEST(CounterEnergy, CalibratedToMeanSequentialAccess) {
  const auto t = EnergyTable::default_l1_32k();
  EXPECT_NEAR(t.mean_total_seq(), 9.85, 1e-9);
  EXPECT_NEAR(counter_energy_per_access(t, CounterMode::logarithmic), 0.0062 * 9.85, 1e-12);
  EXPECT_NEAR(counter_energy_per_access(t, CounterMode::exact), 2 * 0.0062 * 9.85, 1e-12);
  EXPECT_EQ(counter_overhead_energy(t, CounterMode::logarithmic, false, 1000), 0.0);
  EXPECT_NEAR(counter_overhead_energy(t, CounterMode::logarithmic, true, 1), 0.06107, 1e-5);
  EXPECT_NEAR(counter_overhead_energy(t, CounterMode::logarithmic, true, 1000),
              1000 * counter_overhead_energy(t, CounterMode::logarithmic, true, 1), 1e-9);
}

TEST(Geometry, DefaultFitRegeneratesWireColumn) {
  const auto g = GeometryModel::default_2x2();
  for (unsigned w = 0; w < 4; ++w) EXPECT_NEAR(wire_from_geometry(g, w), kWire[w], kTol);
  EXPECT_NEAR(wire_from_geometry(g, 3), 1.6 + 3.1 + 5.2, 1e-9);
  EXPECT_NEAR(wire_from_geometry(g, 0), 1.6, 1e-9);
  const auto t = g.table();
  for (unsigned w = 0; w < 4; ++w) {
    EXPECT_NEAR(t.total_seq(w), kSeq[w], kTol);
    EXPECT_NEAR(t.total_par(w), kPar[w], kTol);
  }
}

TEST(Geometry, DefaultPositions) {
  const auto g = GeometryModel::default_2x2();
  ASSERT_EQ(g.ways(), 4u);
  const int expect[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (unsigned w = 0; w < 4; ++w) {
    ASSERT_EQ(g.way_positions[w].size(), 1u);
    EXPECT_EQ(g.way_positions[w][0].x, expect[w][0]);
    EXPECT_EQ(g.way_positions[w][0].y, expect[w][1]);
  }
}

double wire_range(const GeometryModel& g) {
  double lo = 1e300, hi = 0;
  for (unsigned w = 0; w < g.ways(); ++w) {
    lo = std::min(lo, wire_from_geometry(g, w));
    hi = std::max(hi, wire_from_geometry(g, w));
  }
  return hi / lo;
}

TEST(Geometry, SmallerGridNarrowsRange) {
  const auto g16 = GeometryModel::for_capacity(16384, 4);
  const auto g32 = GeometryModel::for_capacity(32768, 4);
  const auto g64 = GeometryModel::for_capacity(65536, 4);
  EXPECT_EQ(g16.rows, 2u);
  EXPECT_EQ(g16.cols, 1u);
  EXPECT_EQ(g64.cols, 4u);
  EXPECT_LT(wire_range(g16), wire_range(g32));
  // 64KB: every way spans two subarrays.
  for (const auto& p : g64.way_positions) EXPECT_EQ(p.size(), 2u);
  EXPECT_THROW(GeometryModel::for_capacity(3 * 8192, 4), config_error);
}

TEST(Geometry, UnmappedWayIsConfigError) {
  GeometryModel g = GeometryModel::default_2x2();
  g.way_positions[2].clear();
  EXPECT_THROW(wire_from_geometry(g, 2), config_error);
  EXPECT_THROW(wire_from_geometry(g, 9), config_error);
  g.way_positions[2] = {{5, 0}};
  EXPECT_THROW(wire_from_geometry(g, 2), config_error);
}

TEST(EnergyFile, ExplicitTable) {
  std::istringstream in("# measured\nwire = 1, 2\nsram = 3, 3\n");
  const auto t = energy_table_from(KeyValueFile::parse(in), 2);
  EXPECT_NEAR(t.total_seq(1), 5.0, 1e-12);
  EXPECT_NEAR(t.total_par(0), 7.0, 1e-12);
}

TEST(EnergyFile, TotalsColumn) {
  std::istringstream in("total_seq = 5.7, 8.8, 10.9, 14.0\nwire = 1.6, 4.7, 6.8, 9.9\n");
  const auto t = energy_table_from(KeyValueFile::parse(in), 4);
  EXPECT_NEAR(t.sram_all(), 16.4, 1e-9);
}

TEST(EnergyFile, GeometryWithCustomPlacement) {
  std::istringstream in("rows = 1\ncols = 4\nhop_x = 2\nway3 = 0,0\nway0 = 3,0\n");
  const auto t = energy_table_from(KeyValueFile::parse(in), 4);
  EXPECT_NEAR(t.wire(0), 1.6 + 6, 1e-9);
  EXPECT_NEAR(t.wire(1), 1.6 + 2, 1e-9);
  EXPECT_NEAR(t.wire(3), 1.6, 1e-9);
}

TEST(EnergyFile, Errors) {
  std::istringstream mismatch("wire = 1, 2, 3\n");
  EXPECT_THROW(energy_table_from(KeyValueFile::parse(mismatch), 4), input_error);
  std::istringstream bad_number("wire = 1, x\n");
  EXPECT_THROW(energy_table_from(KeyValueFile::parse(bad_number), 2), input_error);
  std::istringstream outside("rows = 1\ncols = 1\nway1 = 2,0\n");
  EXPECT_THROW(energy_table_from(KeyValueFile::parse(outside), 2), input_error);
  std::istringstream no_equals("wire 1,2\n");
  EXPECT_THROW(KeyValueFile::parse(no_equals), input_error);
}

TEST(EnergyLedger, TotalIsSumOfComponents) {
  EnergyLedger l;
  l.add({1.0, 2.0});
  l.swap_pj = 3;
  l.counter_pj = 4;
  l.l0_pj = 5;
  EXPECT_DOUBLE_EQ(l.total(), 15.0);
}

}  // namespace
}  // namespace holiswap
