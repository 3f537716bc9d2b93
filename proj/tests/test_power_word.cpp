#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace scyc;
using namespace scyc::testing;

namespace {

PowerWord L(std::size_t t) { return PowerWord::leaf(t); }

}  // namespace

TEST(FirePowerWord, Examples) {
  const auto pair = canceling_pair();
  auto w = PowerWord::power(PowerWord::concat({L(0), L(1)}), 5);
  EXPECT_EQ(std::get<Configuration>(fire_power_word(conf({0, 0}), pair, w)), conf({0, 0}));
  EXPECT_EQ(std::get<Configuration>(fire_power_word(conf({0, 0}), pair, PowerWord::power(L(0), 3))), conf({3, 0}));
  auto r = fire_power_word(conf({0, 0}), pair, PowerWord::power(L(1), 2));
  ASSERT_FALSE(fired(r));
  EXPECT_EQ(std::get<PowerWordNotFireable>(r).transition, 1u);
}

TEST(FirePowerWord, FailurePathPointsAtFailingLeaf) {
  // (t1 t2)^3 then t2 t2: fails at the second t2 of the tail.
  const auto pair = canceling_pair();
  auto w = PowerWord::concat({PowerWord::power(PowerWord::concat({L(0), L(1)}), 3), L(0), L(1), L(1)});
  auto r = fire_power_word(conf({0, 0}), pair, w);
  const auto& nf = std::get<PowerWordNotFireable>(r);
  ASSERT_EQ(nf.path.size(), 1u);
  EXPECT_EQ(nf.path[0].kind, PathStep::Kind::item);
  EXPECT_EQ(nf.path[0].value, 3);
  EXPECT_EQ(nf.at, conf({0, 0}));
}

TEST(FirePowerWord, FailureInsideLateIteration) {
  // From (2,0): (t2)^3 fails at iteration 2 (0-based).
  const auto pair = canceling_pair();
  auto r = fire_power_word(conf({2, 0}), pair, PowerWord::power(L(1), 3));
  const auto& nf = std::get<PowerWordNotFireable>(r);
  ASSERT_EQ(nf.path.size(), 1u);
  EXPECT_EQ(nf.path[0].kind, PathStep::Kind::iteration);
  EXPECT_EQ(nf.path[0].value, 2);
}

TEST(FirePowerWord, HugeExponentsWithoutExpansion) {
  const auto pair = canceling_pair();
  BigInt big("100000000000000000000000000000", 10);
  auto w = PowerWord::concat({PowerWord::power(L(0), big), PowerWord::power(L(1), big)});
  EXPECT_EQ(std::get<Configuration>(fire_power_word(conf({0, 0}), pair, w)), conf({0, 0}));
  EXPECT_EQ(expanded_length(w), 2 * big);
  EXPECT_THROW(expand(w), ExpansionBudgetExceeded);
}

TEST(PowerWord, Builders) {
  EXPECT_EQ(power_of(L(0), 1), L(0));
  EXPECT_TRUE(power_of(PowerWord(), 7).is_empty_concat());
  EXPECT_THROW(power_of(L(0), 0), std::invalid_argument);
  EXPECT_EQ(concat_of({PowerWord(), L(1)}), L(1));
  EXPECT_EQ(concat_of({PowerWord::concat({L(0), L(1)}), L(2)}), PowerWord::concat({L(0), L(1), L(2)}));
}

TEST(PowerWord, ValidateRejectsUnknownTransitions) {
  EXPECT_THROW(validate(L(2), canceling_pair()), std::out_of_range);
  EXPECT_NO_THROW(validate(L(1), canceling_pair()));
}

TEST(PowerWord, ReversedAndRemap) {
  auto w = PowerWord::concat({L(0), PowerWord::power(PowerWord::concat({L(1), L(2)}), 2)});
  std::vector<std::size_t> flat;
  naive_expand(reversed(w), flat);
  EXPECT_EQ(flat, (std::vector<std::size_t>{2, 1, 2, 1, 0}));
  std::vector<std::size_t> mapped;
  naive_expand(remap(w, {5, 6, 7}), mapped);
  EXPECT_EQ(mapped, (std::vector<std::size_t>{5, 6, 7, 6, 7}));
}

TEST(PowerWord, ParikhLaws) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    auto a = random_power_word(rng, 3, 3, 6);
    auto b = random_power_word(rng, 3, 3, 6);
    EXPECT_EQ(parikh(PowerWord::concat({a, b})), parikh(a) + parikh(b));
    EXPECT_EQ(parikh(PowerWord::power(a, 5)), BigInt(5) * parikh(a));
    std::vector<std::size_t> flat;
    naive_expand(a, flat);
    EXPECT_EQ(parikh(a), parikh(std::span<const std::size_t>(flat)));
    EXPECT_EQ(expanded_length(a), BigInt(static_cast<unsigned long>(flat.size())));
    EXPECT_EQ(expand(a), flat);
  }
}

TEST(PowerWord, ReplayMatchesExpansion) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    const auto net = random_net(rng, 3, 2, 4);
    if (net.empty()) continue;
    auto w = random_power_word(rng, net.size(), 3, 8);
    std::vector<std::size_t> flat;
    naive_expand(w, flat);
    Vec c(net.dimension());
    std::uniform_int_distribution<long> e(0, 4);
    for (auto& x : c) x = e(rng);
    auto compressed = fire_power_word(conf(c), net, w);
    auto plain = fire_word(conf(c), net, flat);
    ASSERT_EQ(fired(compressed), fired(plain));
    if (fired(plain)) {
      EXPECT_EQ(std::get<Configuration>(compressed), std::get<Configuration>(plain));
    } else {
      const auto& nf = std::get<PowerWordNotFireable>(compressed);
      const auto& pf = std::get<NotFireable>(plain);
      EXPECT_EQ(nf.transition, pf.transition);
      EXPECT_EQ(nf.index, pf.index);
    }
  }
}
