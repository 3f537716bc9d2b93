#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace scyc;
using namespace scyc::testing;

namespace {

void check_report(const PetriNet& net, const AnalysisReport& r) {
  ASSERT_EQ(r.structurally_cyclic, !r.lambda_set.empty());
  ASSERT_FALSE(r.rounds.empty());
  ASSERT_EQ(r.rounds.front(), TransitionSet::full(net.size()));
  ASSERT_EQ(r.rounds.back(), r.lambda_set);
  ASSERT_LE(r.rounds.size(), net.size() + 1);
  for (std::size_t k = 1; k < r.rounds.size(); ++k) {
    ASSERT_TRUE(r.rounds[k].subset_of(r.rounds[k - 1]));
    ASSERT_NE(r.rounds[k], r.rounds[k - 1]);
  }
  ASSERT_EQ(mu(net, r.lambda_set), r.lambda_set);
  const auto input = mutually_fireable_set(net);
  ASSERT_TRUE(r.lambda_set.subset_of(input.mutually_fireable));
  ASSERT_TRUE(r.lambda_set.subset_of(ultimately_cyclic(net).u_set));
  ASSERT_EQ(r.witness.has_value(), r.structurally_cyclic);
  if (r.witness) {
    auto v = verify_witness(net, *r.witness);
    ASSERT_TRUE(v.valid) << v.reason;
    ASSERT_EQ(v.transitions_used, r.lambda_set);
  }
}

}  // namespace

TEST(Mu, Examples) {
  const auto net = two_round_net();
  EXPECT_EQ(mu(net, TransitionSet::full(3)), tset(3, {2}));
  EXPECT_TRUE(mu(net, tset(3, {2})).empty());
  EXPECT_EQ(mu(canceling_pair(), TransitionSet::full(2)), TransitionSet::full(2));
  EXPECT_TRUE(mu(net, TransitionSet(3)).empty());
}

TEST(Lambda, Examples) {
  auto a = lambda(canceling_pair());
  EXPECT_TRUE(a.structurally_cyclic);
  EXPECT_EQ(a.lambda_set, TransitionSet::full(2));
  check_report(canceling_pair(), a);

  const auto swap = make_net(2, {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}});
  auto b = lambda(swap);
  EXPECT_FALSE(b.structurally_cyclic);
  EXPECT_TRUE(b.lambda_set.empty());
  EXPECT_FALSE(b.witness);

  const auto idle = make_net(2, {{{0, 0}, {0, 0}}});
  auto c = lambda(idle);
  EXPECT_EQ(c.lambda_set, TransitionSet::full(1));
  EXPECT_EQ(*c.witness, PowerWord::leaf(0));
}

TEST(Lambda, TwoRoundNetTakesExactlyTwoStrictRounds) {
  auto r = lambda(two_round_net());
  EXPECT_EQ(r.strict_rounds(), 2u);
  ASSERT_EQ(r.rounds.size(), 3u);
  EXPECT_EQ(r.rounds[1], tset(3, {2}));
  EXPECT_TRUE(r.rounds[2].empty());
  EXPECT_FALSE(r.structurally_cyclic);
}

TEST(Lambda, RoundDetailsChain) {
  auto r = lambda(two_round_net(), LambdaOptions{true, true});
  ASSERT_EQ(r.round_details.size(), r.rounds.size());
  for (std::size_t k = 0; k < r.round_details.size(); ++k) {
    const auto& d = r.round_details[k];
    EXPECT_EQ(d.active, r.rounds[k]);
    EXPECT_EQ(d.next, d.m_set & d.u_certified);
    EXPECT_EQ(d.i_both, d.i_plus & d.i_minus);
  }
  ASSERT_TRUE(r.input_u);
  EXPECT_EQ(r.input_u->u_set, tset(3, {1, 2}));
  EXPECT_EQ(r.input_markable, mutually_fireable_set(two_round_net()));
}

TEST(Lambda, SynthesisExamples) {
  const auto both = make_net(2, {{{0, 0}, {1, 1}}, {{1, 1}, {0, 0}}});
  auto r = lambda(both);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(verify_witness(both, *r.witness).valid);
  EXPECT_EQ(synthesize_witness(both, TransitionSet::full(2)), *r.witness);
}

TEST(Lambda, WitnessParikhIsAMultipleOfTheCertificate) {
  const auto net = make_net(2, {{{0, 0}, {2, 0}}, {{1, 0}, {0, 1}}, {{0, 3}, {0, 0}}});
  auto r = lambda(net);
  ASSERT_TRUE(r.structurally_cyclic);
  const auto p = parikh(*r.witness);
  const auto& psi0 = r.u_certificate.psi;
  // p = k * psi0 for one positive integer k.
  const BigInt k = p.get(0) / psi0.get(0);
  for (std::size_t t = 0; t < net.size(); ++t) EXPECT_EQ(p.get(t), k * psi0.get(t));
}

TEST(VerifyWitness, Examples) {
  const auto pair = canceling_pair();
  auto ok = verify_witness(pair, PowerWord::concat({PowerWord::leaf(0), PowerWord::leaf(1)}));
  EXPECT_TRUE(ok.valid);
  EXPECT_EQ(ok.transitions_used, TransitionSet::full(2));
  EXPECT_FALSE(verify_witness(pair, PowerWord()).valid);
  auto bad = verify_witness(pair, PowerWord::leaf(1));
  EXPECT_FALSE(bad.valid);
  EXPECT_TRUE(bad.failure);
  EXPECT_FALSE(verify_witness(pair, PowerWord::leaf(0)).valid);
}

TEST(Lambda, CfgExamples) {
  EXPECT_TRUE(is_structurally_cyclic(make_net(1, {{{0}, {1}}, {{1}, {0}}})));
  EXPECT_FALSE(is_structurally_cyclic(make_net(1, {{{0}, {1}}, {{1}, {2}}})));
}

TEST(Lambda, TinySuiteAgainstOracle) {
  const SearchBudget budget{6, 100000, std::nullopt};
  for (const auto& net : tiny_nets()) {
    auto r = lambda(net);
    check_report(net, r);
    auto cyc = brute_zero_cycle_transitions(net, budget);
    ASSERT_TRUE(cyc.subset_of(r.lambda_set));
    if (!r.structurally_cyclic) ASSERT_TRUE(cyc.empty());
  }
}

TEST(Lambda, RandomNetsAgainstOracle) {
  const SearchBudget budget{5, 50000, std::nullopt};
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 300; ++iter) {
    const auto net = random_net(rng, 4, 2, 6);
    auto r = lambda(net);
    check_report(net, r);
    EXPECT_TRUE(brute_zero_cycle_transitions(net, budget).subset_of(r.lambda_set));
  }
}

TEST(Lambda, WithoutWitness) {
  auto r = lambda(canceling_pair(), LambdaOptions{false, false});
  EXPECT_TRUE(r.structurally_cyclic);
  EXPECT_FALSE(r.witness);
}

TEST(Lambda, SparseMediumNets) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto net = sparse_random_net(40, 80, seed);
    auto r = lambda(net);
    check_report(net, r);
  }
}
