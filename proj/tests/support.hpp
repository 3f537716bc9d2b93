#pragma once

// Shared fixtures and independent oracles for the test suites.  Nothing here
// calls the analysis engines; the oracles are deliberately naive.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "scyc/scyc.hpp"

namespace scyc::testing {

using Vec = std::vector<long>;

inline Configuration conf(const Vec& v) {
  std::vector<BigInt> e;
  for (long x : v) e.emplace_back(x);
  return Configuration(std::move(e));
}

inline PetriNet make_net(std::size_t d, const std::vector<std::pair<Vec, Vec>>& ts) {
  std::vector<Transition> out;
  for (const auto& [u, v] : ts) out.emplace_back(conf(u), conf(v));
  return PetriNet(d, std::move(out));
}

inline PetriNet canceling_pair() { return make_net(2, {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}}); }

inline PetriNet two_round_net() {
  return make_net(2, {{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{0, 1}, {0, 0}}});
}

inline TransitionSet tset(std::size_t n, std::initializer_list<std::size_t> members) { return TransitionSet(n, members); }

/// Every net over d=2 with entries in {0,1} and at most 3 distinct
/// transitions, listed as subsets of the 16 possible transitions.
inline std::vector<PetriNet> tiny_nets() {
  std::vector<std::pair<Vec, Vec>> all;
  for (int code = 0; code < 16; ++code) {
    all.push_back({{code & 1, (code >> 1) & 1}, {(code >> 2) & 1, (code >> 3) & 1}});
  }
  std::vector<PetriNet> nets;
  nets.push_back(make_net(2, {}));
  for (std::size_t a = 0; a < all.size(); ++a) {
    nets.push_back(make_net(2, {all[a]}));
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      nets.push_back(make_net(2, {all[a], all[b]}));
      for (std::size_t c = b + 1; c < all.size(); ++c) nets.push_back(make_net(2, {all[a], all[b], all[c]}));
    }
  }
  return nets;
}

/// Random net with dimension in [1, max_d], entries in [0, max_entry] and
/// between 0 and max_t transitions, duplicates removed.
inline PetriNet random_net(std::mt19937_64& rng, std::size_t max_d, long max_entry, std::size_t max_t) {
  std::uniform_int_distribution<std::size_t> dd(1, max_d);
  std::uniform_int_distribution<std::size_t> tt(0, max_t);
  std::uniform_int_distribution<long> ee(0, max_entry);
  const std::size_t d = dd(rng);
  const std::size_t n = tt(rng);
  std::vector<std::pair<Vec, Vec>> ts;
  for (std::size_t k = 0; k < n; ++k) {
    Vec u(d);
    Vec v(d);
    for (auto& x : u) x = ee(rng);
    for (auto& x : v) x = ee(rng);
    ts.push_back({u, v});
  }
  return deduplicate(make_net(d, ts)).first;
}

/// Sparse random net: each side touches 0..3 random indices with values in
/// 1..10.
inline PetriNet sparse_random_net(std::size_t d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> val(1, 10);
  std::uniform_int_distribution<std::size_t> place(0, d - 1);
  std::uniform_int_distribution<int> k(0, 3);
  std::vector<Transition> ts;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<BigInt> u(d);
    std::vector<BigInt> v(d);
    for (int r = k(rng); r > 0; --r) u[place(rng)] = val(rng);
    for (int r = k(rng); r > 0; --r) v[place(rng)] = val(rng);
    ts.emplace_back(Configuration(std::move(u)), Configuration(std::move(v)));
  }
  return PetriNet(d, std::move(ts));
}

/// Union of supports of all psi in {0..bound}^|T| with zero displacement.
inline TransitionSet brute_invariant_support(const PetriNet& net, long bound) {
  const std::size_t n = net.size();
  const std::size_t d = net.dimension();
  std::vector<std::vector<long>> delta(n, std::vector<long>(d));
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < d; ++i) delta[t][i] = BigInt(net[t].post[i] - net[t].pre[i]).get_si();
  }
  TransitionSet out(n);
  std::vector<long> psi(n, 0);
  std::vector<long> sum(d, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == n) {
      for (long s : sum) {
        if (s != 0) return;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (psi[j] > 0) out.insert(j);
      }
      return;
    }
    for (long c = 0; c <= bound; ++c) {
      psi[t] = c;
      for (std::size_t i = 0; i < d; ++i) sum[i] += c * delta[t][i];
      rec(t + 1);
      for (std::size_t i = 0; i < d; ++i) sum[i] -= c * delta[t][i];
    }
    psi[t] = 0;
  };
  rec(0);
  return out;
}

/// Naive least fixpoint of prop_T straight from its definition.
inline IndexSet naive_forward_markable(const PetriNet& net) {
  std::set<std::size_t> cur;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : net) {
      bool enabled = true;
      for (std::size_t i = 0; i < net.dimension(); ++i) {
        if (sgn(t.pre[i]) > 0 && cur.count(i) == 0) enabled = false;
      }
      if (!enabled) continue;
      for (std::size_t i = 0; i < net.dimension(); ++i) {
        if (sgn(t.post[i]) > 0 && cur.insert(i).second) changed = true;
      }
    }
  }
  IndexSet out(net.dimension());
  for (auto i : cur) out.insert(i);
  return out;
}

/// Random power word of bounded depth whose leaves draw from `transitions`
/// transitions.
inline PowerWord random_power_word(std::mt19937_64& rng, std::size_t transitions, int depth, long max_exponent) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 2 : 0);
  std::uniform_int_distribution<std::size_t> leaf(0, transitions - 1);
  switch (kind(rng)) {
    case 1: {
      std::uniform_int_distribution<int> len(0, 3);
      std::vector<PowerWord> items;
      for (int i = len(rng); i > 0; --i) items.push_back(random_power_word(rng, transitions, depth - 1, max_exponent));
      return PowerWord::concat(std::move(items));
    }
    case 2: {
      std::uniform_int_distribution<long> e(1, max_exponent);
      return PowerWord::power(random_power_word(rng, transitions, depth - 1, max_exponent), BigInt(e(rng)));
    }
    default:
      return PowerWord::leaf(leaf(rng));
  }
}

/// Direct expansion for oracles, independent of scyc::expand.
inline void naive_expand(const PowerWord& w, std::vector<std::size_t>& out) {
  if (const auto* l = w.as_leaf()) {
    out.push_back(l->transition);
  } else if (const auto* c = w.as_concat()) {
    for (const auto& x : c->items) naive_expand(x, out);
  } else {
    const auto& p = *w.as_power();
    for (unsigned long k = 0; k < p.exponent.get_ui(); ++k) naive_expand(p.body, out);
  }
}

/// Enumerates grammars over nonterminals S, A, B (up to `max_nt`) with up to
/// `max_prod` productions whose right-hand sides have length at most
/// `max_rhs`.  Productions form a set in canonical order and the
/// first production has lhs S.
inline void for_each_grammar(std::size_t max_nt, std::size_t max_prod, std::size_t max_rhs,
                             const std::function<void(const Grammar&)>& fn) {
  const std::vector<std::string> names{"S", "A", "B"};
  for (std::size_t k = 1; k <= max_nt; ++k) {
    std::vector<std::string> nts(names.begin(), names.begin() + static_cast<long>(k));
    std::vector<Production> prods;
    for (const auto& l : nts) {
      prods.push_back({l, {}});
      for (const auto& a : nts) {
        prods.push_back({l, {a}});
        if (max_rhs >= 2) {
          for (const auto& b : nts) prods.push_back({l, {a, b}});
        }
      }
    }
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (!pick.empty()) {
        Grammar g;
        g.nonterminals = nts;
        g.start = "S";
        for (auto i : pick) g.productions.push_back(prods[i]);
        // Every nonterminal must occur, S must head some production.
        std::set<std::string> used;
        bool s_lhs = false;
        for (const auto& p : g.productions) {
          used.insert(p.lhs);
          s_lhs = s_lhs || p.lhs == "S";
          for (const auto& s : p.rhs) used.insert(s);
        }
        if (used.size() == k && s_lhs) {
          std::stable_partition(g.productions.begin(), g.productions.end(),
                                [](const Production& p) { return p.lhs == "S"; });
          fn(g);
        }
      }
      if (pick.size() == max_prod) return;
      for (std::size_t i = from; i < prods.size(); ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }
}

}  // namespace scyc::testing
