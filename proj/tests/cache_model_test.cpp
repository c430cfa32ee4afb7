#include <gtest/gtest.h>

#include <random>

#include "holiswap/cache_model.hpp"
#include "oracles.hpp"

namespace holiswap {
namespace {

TraceRecord load(std::uint64_t addr) { return {0x400000, addr, Op::load}; }

// Address of the n-th distinct line mapping to set `set` under the default config.
std::uint64_t same_set(std::uint32_t set, std::uint64_t n) { return line_address({set, n}, CacheConfig{}); }

TEST(CacheConfig, DefaultGeometry) {
  CacheConfig cfg;
  EXPECT_EQ(cfg.set_count(), 128u);
  EXPECT_EQ(cfg.capacity_bytes, std::uint64_t{cfg.line_bytes} * cfg.associativity * cfg.set_count());
  EXPECT_NO_THROW(cfg.validate());
}

TEST(CacheConfig, RejectsBadShapes) {
  EXPECT_THROW((CacheConfig{32768, 48, 4}.validate()), config_error);
  EXPECT_THROW((CacheConfig{3 * 64 * 4, 64, 4}.validate()), config_error);
  EXPECT_THROW((CacheConfig{1000, 64, 4}.validate()), config_error);
  EXPECT_THROW((CacheConfig{0, 64, 4}.validate()), config_error);
}

TEST(IndexOf, Examples) {
  CacheConfig cfg;
  EXPECT_EQ(index_of(0x0, cfg), (SetTag{0, 0}));
  EXPECT_EQ(index_of(0x40, cfg), (SetTag{1, 0}));
  EXPECT_EQ(index_of(0x2000, cfg), (SetTag{0, 1}));
  EXPECT_EQ(index_of(0x2000 + 63, cfg), (SetTag{0, 1}));
}

TEST(Lookup, Examples) {
  CacheSet set(4);
  EXPECT_FALSE(set.lookup(7));

  for (std::uint64_t t : {1, 2, 3, 4}) set.fill(t, false);
  // Cold fills take the LRU end of the initial stack: W3, W2, W1, W0.
  EXPECT_EQ(set.lookup(1), 3u);
  EXPECT_EQ(set.lookup(4), 0u);
  set.swap_ways(0, 3);
  EXPECT_EQ(set.lookup(4), 3u);

  CacheSet one(4);
  one.fill(9, false);
  one.fill(8, false);
  one.fill(7, false);
  EXPECT_EQ(one.lookup(7), 1u);
}

TEST(Lookup, DuplicateTagIsCorruption) {
  CacheSet set(4);
  set.fill(5, false);
  set.fill(5, false);
  EXPECT_THROW(set.lookup(5), invariant_error);
  EXPECT_THROW(set.check(), invariant_error);
}

TEST(Access, ColdMissThenHitSameWay) {
  CacheState cache(CacheConfig{});
  auto a = cache.access(load(0x1234));
  EXPECT_FALSE(a.hit());
  EXPECT_FALSE(a.victim_evicted);
  auto b = cache.access(load(0x1234));
  EXPECT_TRUE(b.hit());
  EXPECT_EQ(b.way, a.way);
}

TEST(Access, FifthTagEvictsLru) {
  CacheState cache(CacheConfig{});
  for (std::uint64_t n = 0; n < 5; ++n) cache.access(load(same_set(3, n)));
  auto again = cache.access(load(same_set(3, 0)));
  EXPECT_FALSE(again.hit());
  EXPECT_TRUE(again.victim_evicted);
  EXPECT_EQ(again.victim_tag, 1u);  // tag 0 was re-filled over the then-LRU tag 1
}

TEST(Access, StoreHitSetsDirtyAndEvictionReportsIt) {
  CacheState cache(CacheConfig{});
  cache.access(load(same_set(0, 0)));
  cache.access({0, same_set(0, 0), Op::store});
  const auto way = *cache.set(0).lookup(0);
  EXPECT_TRUE(cache.set(0).line(way).dirty);
  for (std::uint64_t n = 1; n <= 3; ++n) cache.access(load(same_set(0, n)));
  auto evict = cache.access(load(same_set(0, 4)));
  EXPECT_TRUE(evict.victim_evicted);
  EXPECT_TRUE(evict.victim_dirty);
  EXPECT_EQ(evict.victim_tag, 0u);
}

TEST(SwapWays, ExchangesLines) {
  CacheSet set(4);
  for (std::uint64_t t : {0xD, 0xC, 0xB, 0xA}) set.fill(t, false);  // A in W0 ... D in W3
  set.swap_ways(0, 3);
  EXPECT_EQ(set.line(0).tag, 0xDu);
  EXPECT_EQ(set.line(1).tag, 0xBu);
  EXPECT_EQ(set.line(2).tag, 0xCu);
  EXPECT_EQ(set.line(3).tag, 0xAu);
}

TEST(SwapWays, Involution) {
  CacheSet set(4);
  set.fill(1, true);
  set.fill(2, false);
  set.fill(3, false);
  const CacheSet before = set;
  set.swap_ways(0, 3);
  EXPECT_NE(set, before);
  set.swap_ways(0, 3);
  EXPECT_EQ(set, before);
}

TEST(SwapWays, SameWayIsNoOp) {
  CacheSet set(4);
  set.fill(1, false);
  const CacheSet before = set;
  set.swap_ways(2, 2);
  EXPECT_EQ(set, before);
}

TEST(SwapWays, RecencyFollowsLine) {
  CacheSet set(4);
  for (std::uint64_t t : {1, 2, 3}) set.fill(t, false);  // W3, W2, W1
  set.fill(4, false);                                    // W0, so W3 holds the LRU line
  // Touch X=tag 1 in W3 so it is MRU, then move it to W0.
  set.touch(*set.lookup(1));
  set.swap_ways(3, 0);
  EXPECT_EQ(set.lookup(1), 0u);
  auto y = set.fill(99, false);
  EXPECT_NE(y.victim_tag, 1u);
  EXPECT_EQ(y.victim_tag, 2u);
  EXPECT_TRUE(set.lookup(1));
}

// Random interleavings of accesses and swaps keep every set well formed, and
// swaps never change which tag hits, misses or gets evicted.
TEST(CacheProperty, SwapsPreserveLogicalBehaviour) {
  CacheConfig cfg{4096, 64, 4};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    CacheState cache(cfg);
    oracle::ReferenceLru ref(cfg);
    for (int i = 0; i < 3000; ++i) {
      const std::uint64_t addr = (rng() % 256) * 64;
      const auto out = cache.access(load(addr));
      const auto expect = ref.access(addr);
      ASSERT_EQ(out.hit(), expect.hit);
      ASSERT_EQ(out.victim_evicted, expect.evicted_tag.has_value());
      if (expect.evicted_tag) {
        ASSERT_EQ(out.victim_tag, *expect.evicted_tag);
      }
      if (rng() % 3 == 0) cache.swap_ways(static_cast<std::uint32_t>(rng() % cache.set_count()),
                                          static_cast<unsigned>(rng() % 4), static_cast<unsigned>(rng() % 4));
    }
    EXPECT_NO_THROW(cache.check());
  }
}

TEST(CacheProperty, SwapPreservesLineMultiset) {
  std::mt19937_64 rng(7);
  CacheSet set(8);
  for (int i = 0; i < 6; ++i) set.fill(rng() % 100 + 100 * i, i % 2);
  for (int i = 0; i < 100; ++i) {
    auto lines = std::vector<CacheLine>(set.ways().begin(), set.ways().end());
    const unsigned a = rng() % 8, b = rng() % 8;
    set.swap_ways(a, b);
    auto after = std::vector<CacheLine>(set.ways().begin(), set.ways().end());
    std::swap(lines[a], lines[b]);
    ASSERT_EQ(lines, after);
    ASSERT_NO_THROW(set.check());
  }
}

}  // namespace
}  // namespace holiswap
