#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "holiswap/run_config.hpp"

namespace holiswap {
namespace {

TEST(RunConfig, DefaultsMirrorTheEvaluatedCache) {
  const SimConfig cfg = RunConfig{}.to_sim_config();
  EXPECT_EQ(cfg.cache.capacity_bytes, 32768u);
  EXPECT_EQ(cfg.cache.line_bytes, 64u);
  EXPECT_EQ(cfg.cache.associativity, 4u);
  EXPECT_EQ(cfg.policy.epoch_len, 256u);
  EXPECT_EQ(cfg.policy.threshold, 128u);
  EXPECT_EQ(cfg.policy.counter_mode, CounterMode::logarithmic);
  EXPECT_EQ(cfg.policy.rng_seed, 0u);
  EXPECT_TRUE(cfg.policy.enabled);
  EXPECT_EQ(cfg.design, DesignKind::sequential);
  EXPECT_NEAR(cfg.energy.total_seq(3), 14.0, 1e-9);
}

TEST(RunConfig, ThresholdFollowsEpoch) {
  RunConfig rc;
  rc.epoch = 64;
  EXPECT_EQ(rc.to_sim_config().policy.threshold, 32u);
  rc.threshold = 16;
  EXPECT_EQ(rc.to_sim_config().policy.threshold, 16u);
}

TEST(RunConfig, RejectsBadValues) {
  const auto bad = [](auto mutate) {
    RunConfig rc;
    mutate(rc);
    EXPECT_THROW(rc.to_sim_config(), config_error);
  };
  bad([](RunConfig& rc) { rc.design = "magic"; });
  bad([](RunConfig& rc) { rc.holiswap = "maybe"; });
  bad([](RunConfig& rc) { rc.counters = "approx"; });
  bad([](RunConfig& rc) { rc.epoch = 100; });  // log counters need 2^k
  bad([](RunConfig& rc) { rc.format = "xml"; });
  bad([](RunConfig& rc) { rc.line_bytes = 48; });
  bad([](RunConfig& rc) { rc.cache_kb = 24; });
  bad([](RunConfig& rc) { rc.timing.miss_penalty = 0; });
}

TEST(RunConfig, OtherCapacitiesUseBuiltInLayouts) {
  RunConfig rc;
  rc.cache_kb = 16;
  EXPECT_NEAR(rc.to_sim_config().energy.wire(1), 1.6 + 5.2, 1e-9);
  rc.cache_kb = 64;
  EXPECT_EQ(rc.to_sim_config().energy.ways(), 4u);
}

TEST(RunConfig, FileOverridesDefaults) {
  std::istringstream in("design = parallel\nepoch = 64\ncounters = exact\nseed = 9\nmiss_penalty = 40\n");
  RunConfig rc;
  rc.apply(KeyValueFile::parse(in));
  const SimConfig cfg = rc.to_sim_config();
  EXPECT_EQ(cfg.design, DesignKind::parallel);
  EXPECT_EQ(cfg.policy.epoch_len, 64u);
  EXPECT_EQ(cfg.policy.counter_mode, CounterMode::exact);
  EXPECT_EQ(cfg.policy.rng_seed, 9u);
  EXPECT_EQ(cfg.timing.miss_penalty, 40u);
}

TEST(RunConfig, MissingGeometryFileIsInputError) {
  RunConfig rc;
  rc.geometry = "/nonexistent/geometry.cfg";
  EXPECT_THROW(rc.to_sim_config(), input_error);
}

}  // namespace
}  // namespace holiswap
