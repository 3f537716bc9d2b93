#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace scyc;
using namespace scyc::testing;

TEST(ParseNet, Examples) {
  EXPECT_EQ(parse_net("petri 2\n0 0 -> 1 0\n1 0 -> 0 0"), canceling_pair());
  EXPECT_THROW(parse_net("petri 1\n0 -> 1 1"), DimensionMismatch);
  auto empty = parse_net("petri 2\n# comment\n");
  EXPECT_EQ(empty.dimension(), 2u);
  EXPECT_TRUE(empty.empty());
}

TEST(ParseNet, LabelsAndComments) {
  auto net = parse_net("# header comment\npetri 2   # two places\n\nmake: 0 0 -> 1 0\nuse:1 0 -> 0 0 # inline\n");
  EXPECT_EQ(net.name(0), "make");
  EXPECT_EQ(net.name(1), "use");
  EXPECT_EQ(net[1].pre, conf({1, 0}));
}

TEST(ParseNet, ErrorsCarryPositions) {
  try {
    parse_net("petri 2\n0 0 -> 1 -1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 10u);
  }
  try {
    parse_net("petri 2\n0 x -> 1 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 3u);
  }
  EXPECT_THROW(parse_net("0 0 -> 1 0\n"), ParseError);
  EXPECT_THROW(parse_net(""), ParseError);
  EXPECT_THROW(parse_net("petri 1\n0 1\n"), ParseError);
  EXPECT_THROW(parse_net("petri 1\n0 -> 1 -> 0\n"), ParseError);
  EXPECT_THROW(parse_net("petri 1\na: 0 -> 1\na: 1 -> 0\n"), ParseError);
  EXPECT_THROW(parse_net("petri -1\n"), ParseError);
}

TEST(ParseNet, DuplicatesDroppedWithWarning) {
  std::vector<std::string> warnings;
  auto net = parse_net("petri 1\n0 -> 1\n1 -> 0\n0 -> 1\n", &warnings);
  EXPECT_EQ(net.size(), 2u);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("line 4"), std::string::npos);
}

TEST(ParseNet, BigEntries) {
  auto net = parse_net("petri 1\n0 -> 123456789012345678901234567890\n");
  EXPECT_EQ(net[0].post[0], BigInt("123456789012345678901234567890", 10));
}

TEST(SerializeNet, RoundTrip) {
  std::mt19937_64 rng(43);
  for (int iter = 0; iter < 200; ++iter) {
    auto net = random_net(rng, 4, 5, 6);
    EXPECT_EQ(parse_net(serialize_net(net)), net);
    std::vector<Transition> labelled;
    for (std::size_t k = 0; k < net.size(); ++k) {
      labelled.emplace_back(net[k].pre, net[k].post, k % 2 == 0 ? std::optional<std::string>("x" + std::to_string(k)) : std::nullopt);
    }
    PetriNet ln(net.dimension(), labelled);
    EXPECT_EQ(parse_net(serialize_net(ln)), ln);
  }
  PetriNet zero_dim(0, {Transition(Configuration(), Configuration())});
  EXPECT_EQ(parse_net(serialize_net(zero_dim)), zero_dim);
}

TEST(SerializeNet, RejectsUnwritableLabels) {
  PetriNet net(1, {Transition(conf({0}), conf({1}), "a b")});
  EXPECT_THROW(serialize_net(net), std::invalid_argument);
}

TEST(Grammar, ParseAndRoundTrip) {
  auto g = parse_grammar("S -> A b\nA ->\nA -> S S\n");
  EXPECT_EQ(g.start, "S");
  EXPECT_EQ(g.nonterminals, (std::vector<std::string>{"S", "A"}));
  EXPECT_EQ(g.terminals, (std::vector<std::string>{"b"}));
  ASSERT_EQ(g.productions.size(), 3u);
  EXPECT_TRUE(g.productions[1].rhs.empty());
  EXPECT_EQ(parse_grammar(serialize_grammar(g)), g);
  auto net = cfg_to_net(g);
  EXPECT_EQ(net.dimension(), 3u);
}

TEST(Grammar, ParseErrors) {
  EXPECT_THROW(parse_grammar(""), ParseError);
  EXPECT_THROW(parse_grammar("S A\n"), ParseError);
  EXPECT_THROW(parse_grammar("s -> A\n"), ParseError);
  EXPECT_THROW(parse_grammar("S -> A -> B\n"), ParseError);
}

TEST(Grammar, FromCfgSingleEpsilon) {
  auto net = cfg_to_net(parse_grammar("S ->\n"));
  EXPECT_EQ(net.dimension(), 1u);
  EXPECT_EQ(net.size(), 2u);
}

TEST(Grammar, EnumeratedRoundTrip) {
  for_each_grammar(2, 2, 2, [](const Grammar& g) { ASSERT_EQ(parse_grammar(serialize_grammar(g)), g); });
}

TEST(Dag, ParseAndRoundTrip) {
  auto a = parse_dag("{} -a-> {q,q}\n{q} -b-> {}  # leaf\n{p, q} -c-> {p}\n");
  EXPECT_EQ(a.states, (std::vector<std::string>{"q", "p"}));
  ASSERT_EQ(a.rules.size(), 3u);
  EXPECT_EQ(a.rules[0].tails, (std::vector<std::string>{"q", "q"}));
  EXPECT_EQ(a.rules[2].label, "c");
  EXPECT_EQ(parse_dag(serialize_dag(a)), a);
  auto net = dag_automaton_to_net(a);
  EXPECT_EQ(net[0].post, conf({2, 0}));
}

TEST(Dag, ParseErrors) {
  EXPECT_THROW(parse_dag("{q} -> {}\n"), ParseError);
  EXPECT_THROW(parse_dag("{q} -a-> \n"), ParseError);
  EXPECT_THROW(parse_dag("q -a-> {}\n"), ParseError);
  EXPECT_THROW(parse_dag("{q,} -a-> {}\n"), ParseError);
}

TEST(Configuration, Parse) {
  EXPECT_EQ(parse_configuration("1 0 3", 3), conf({1, 0, 3}));
  EXPECT_THROW(parse_configuration("1 0", 3), DimensionMismatch);
  EXPECT_THROW(parse_configuration("1 -1", 2), ParseError);
}

TEST(Json, PowerWordRoundTrip) {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 200; ++iter) {
    auto w = random_power_word(rng, 4, 3, 30);
    EXPECT_EQ(power_word_from_json(to_json(w)), w);
  }
  BigInt big("98765432109876543210987654321", 10);
  auto j = to_json(PowerWord::power(PowerWord::leaf(2), big));
  EXPECT_EQ(j["exponent"], big.get_str());
  EXPECT_EQ(j["body"]["transition"], 3);
}

TEST(Json, ReportRoundTrip) {
  std::mt19937_64 rng(53);
  for (int iter = 0; iter < 100; ++iter) {
    const auto net = random_net(rng, 4, 2, 6);
    auto report = lambda(net, LambdaOptions{true, true});
    auto j = report_to_json(report, {true});
    EXPECT_EQ(report_from_json(Json::parse(j.dump())), report);
    // Serialization is deterministic.
    EXPECT_EQ(report_to_json(lambda(net, LambdaOptions{true, true}), {true}).dump(), j.dump());
  }
}

TEST(Json, ReportFields) {
  auto report = lambda(canceling_pair(), LambdaOptions{true, true});
  auto j = report_to_json(report);
  EXPECT_EQ(j["structurally_cyclic"], true);
  EXPECT_EQ(j["lambda_set"], Json::parse("[1,2]"));
  EXPECT_EQ(j["i_plus"], Json::parse("[1]"));
  EXPECT_EQ(j["psi"], Json::parse(R"(["1","1"])"));
  EXPECT_FALSE(j.contains("round_details"));
  EXPECT_TRUE(j["expanded_length"].is_string());
}

TEST(Text, RendersWitness) {
  auto report = lambda(canceling_pair());
  auto text = report_to_text(report, canceling_pair());
  EXPECT_NE(text.find("structurally cyclic: yes"), std::string::npos);
  EXPECT_NE(text.find("witness: t1 t2"), std::string::npos);
  EXPECT_EQ(render_word(PowerWord::power(PowerWord::concat({PowerWord::leaf(0), PowerWord::leaf(1)}), 3), canceling_pair()),
            "(t1 t2)^3");
}
