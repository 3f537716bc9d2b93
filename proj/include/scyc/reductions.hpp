#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scyc/net.hpp"

namespace scyc {

struct UnknownSymbol : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownState : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Production {
  std::string lhs;
  std::vector<std::string> rhs;

  friend bool operator==(const Production&, const Production&) = default;
};

/// A context-free grammar.  Nonterminals are ordered with the start symbol
/// first; terminals get dimensions after all nonterminals.
struct Grammar {
  std::vector<std::string> nonterminals;
  std::vector<std::string> terminals;
  std::string start;
  std::vector<Production> productions;

  friend bool operator==(const Grammar&, const Grammar&) = default;

  /// Position of a symbol in the dimension order, or nullopt.
  std::optional<std::size_t> index_of(const std::string& symbol) const {
    for (std::size_t i = 0; i < nonterminals.size(); ++i) {
      if (nonterminals[i] == symbol) return i;
    }
    for (std::size_t i = 0; i < terminals.size(); ++i) {
      if (terminals[i] == symbol) return nonterminals.size() + i;
    }
    return std::nullopt;
  }

  bool is_nonterminal(const std::string& symbol) const {
    return std::find(nonterminals.begin(), nonterminals.end(), symbol) != nonterminals.end();
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& s : nonterminals) {
      if (!seen.insert(s).second) throw std::invalid_argument("grammar: symbol '" + s + "' declared twice");
    }
    for (const auto& s : terminals) {
      if (!seen.insert(s).second) throw std::invalid_argument("grammar: symbol '" + s + "' declared twice");
    }
    if (nonterminals.empty() || nonterminals.front() != start) {
      throw std::invalid_argument("grammar: the start symbol must be the first nonterminal");
    }
    for (const auto& p : productions) {
      if (!is_nonterminal(p.lhs)) throw UnknownSymbol("grammar: unknown nonterminal '" + p.lhs + "'");
      for (const auto& s : p.rhs) {
        if (!index_of(s)) throw UnknownSymbol("grammar: unknown symbol '" + s + "'");
      }
    }
  }
};

/// Net with t0 = (0, e_start) followed by one transition (lhs, Parikh image of
/// rhs) per production, labelled t0, p1, p2, ...  Terminal dimensions are
/// produced but never consumed.
inline PetriNet cfg_to_net(const Grammar& g) {
  g.validate();
  const std::size_t d = g.nonterminals.size() + g.terminals.size();
  std::vector<Transition> ts;
  ts.emplace_back(Configuration::zero(d), Configuration::unit(d, 0), "t0");
  for (std::size_t k = 0; k < g.productions.size(); ++k) {
    const auto& p = g.productions[k];
    std::vector<BigInt> u(d);
    std::vector<BigInt> v(d);
    u[*g.index_of(p.lhs)] += 1;
    for (const auto& s : p.rhs) v[*g.index_of(s)] += 1;
    ts.emplace_back(Configuration(std::move(u)), Configuration(std::move(v)), "p" + std::to_string(k + 1));
  }
  return PetriNet(d, std::move(ts));
}

/// Whether the start symbol derives the empty word: least set of nonterminals
/// closed under "lhs is nullable when every rhs symbol is a nullable
/// nonterminal".
inline bool nullable_epsilon(const Grammar& g) {
  g.validate();
  std::set<std::string> nullable;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (nullable.count(p.lhs) != 0) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](const std::string& s) { return nullable.count(s) != 0; })) {
        nullable.insert(p.lhs);
        changed = true;
      }
    }
  }
  return nullable.count(g.start) != 0;
}

struct DagRule {
  std::vector<std::string> heads;
  std::string label;
  std::vector<std::string> tails;

  friend bool operator==(const DagRule&, const DagRule&) = default;
};

struct DagAutomaton {
  std::vector<std::string> states;
  std::vector<DagRule> rules;

  friend bool operator==(const DagAutomaton&, const DagAutomaton&) = default;

  std::optional<std::size_t> index_of(const std::string& s) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == s) return i;
    }
    return std::nullopt;
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& s : states) {
      if (!seen.insert(s).second) throw std::invalid_argument("automaton: state '" + s + "' declared twice");
    }
    for (const auto& r : rules) {
      for (const auto* side : {&r.heads, &r.tails}) {
        for (const auto& s : *side) {
          if (!index_of(s)) throw UnknownState("automaton: unknown state '" + s + "'");
        }
      }
    }
  }
};

/// States become dimensions and each rule the transition between the count
/// vectors of its head and tail multisets, labelled r1, r2, ...
inline PetriNet dag_automaton_to_net(const DagAutomaton& a) {
  a.validate();
  const std::size_t d = a.states.size();
  std::vector<Transition> ts;
  for (std::size_t k = 0; k < a.rules.size(); ++k) {
    std::vector<BigInt> u(d);
    std::vector<BigInt> v(d);
    for (const auto& s : a.rules[k].heads) u[*a.index_of(s)] += 1;
    for (const auto& s : a.rules[k].tails) v[*a.index_of(s)] += 1;
    ts.emplace_back(Configuration(std::move(u)), Configuration(std::move(v)), "r" + std::to_string(k + 1));
  }
  return PetriNet(d, std::move(ts));
}

/// Raised when some unit-loss transition (e_i, 0) is missing; `missing` holds
/// the 0-based indices i.
struct NotLossy : std::invalid_argument {
  std::vector<std::size_t> missing;

  NotLossy(const std::string& what, std::vector<std::size_t> m) : std::invalid_argument(what), missing(std::move(m)) {}
};

struct LossyInstance {
  PetriNet net;
  Configuration source;
  Configuration target;
};

inline std::vector<std::size_t> missing_unit_losses(const PetriNet& net) {
  std::vector<std::size_t> missing;
  const auto zero = Configuration::zero(net.dimension());
  for (std::size_t i = 0; i < net.dimension(); ++i) {
    const auto unit = Configuration::unit(net.dimension(), i);
    bool found = std::any_of(net.begin(), net.end(), [&](const Transition& t) { return t.pre == unit && t.post == zero; });
    if (!found) missing.push_back(i);
  }
  return missing;
}

namespace detail {

inline std::string fresh_label(const PetriNet& net, std::string base, const std::set<std::string>& extra = {}) {
  std::set<std::string> taken = extra;
  for (const auto& t : net) {
    if (t.label) taken.insert(*t.label);
  }
  while (taken.count(base) != 0) base += "_";
  return base;
}

inline Configuration extend(const Configuration& c, long last) {
  auto e = c.entries();
  e.emplace_back(last);
  return Configuration(std::move(e));
}

}  // namespace detail

struct LossyReduction {
  PetriNet net;
  Configuration query;
  /// Unit-loss transitions inserted before the reduction (indices i of e_i).
  std::vector<std::size_t> inserted;
};

/// S = phi(T) + {s_down, s_reset} over one extra dimension, with
/// phi(u, v) = ((u,0), (v,1)), s_down = ((y,1), (y,0)), s_reset = ((y,0), (x,0)),
/// and query (x, 0).  With auto_insert, missing unit losses are appended to T
/// first instead of raising NotLossy.
inline LossyReduction lossy_to_cyclicity(const LossyInstance& inst, bool auto_insert = false) {
  const std::size_t d = inst.net.dimension();
  if (inst.source.dimension() != d || inst.target.dimension() != d) {
    throw DimensionMismatch("lossy_to_cyclicity: configuration dimension differs from the net");
  }
  auto missing = missing_unit_losses(inst.net);
  std::vector<Transition> base = inst.net.transitions();
  if (!missing.empty()) {
    if (!auto_insert) {
      std::string list;
      for (auto i : missing) list += (list.empty() ? "" : ", ") + std::string("e") + std::to_string(i + 1);
      throw NotLossy("net is not lossy; missing (e_i, 0) for " + list, missing);
    }
    std::set<std::string> taken;
    for (auto i : missing) {
      auto label = detail::fresh_label(inst.net, "loss" + std::to_string(i + 1), taken);
      taken.insert(label);
      base.emplace_back(Configuration::unit(d, i), Configuration::zero(d), label);
    }
  }
  const PetriNet t(d, std::move(base));

  std::vector<Transition> s;
  for (const auto& tr : t) s.emplace_back(detail::extend(tr.pre, 0), detail::extend(tr.post, 1), tr.label);
  const auto down = detail::fresh_label(t, "s_down");
  const auto reset = detail::fresh_label(t, "s_reset", {down});
  s.emplace_back(detail::extend(inst.target, 1), detail::extend(inst.target, 0), down);
  s.emplace_back(detail::extend(inst.target, 0), detail::extend(inst.source, 0), reset);
  return LossyReduction{PetriNet(d + 1, std::move(s)), detail::extend(inst.source, 0), std::move(missing)};
}

struct RevReachInstance {
  Configuration x;
  PetriNet net;
  Configuration y;
  /// The transition firing x to y.
  std::size_t transition;
};

/// One instance (x, T, y) per distinct one-step successor y of x; x is cyclic
/// iff y reaches x, which for y reachable from x is reversible reachability.
inline std::vector<RevReachInstance> cyclicity_to_revreach(const PetriNet& net, const Configuration& x) {
  if (x.dimension() != net.dimension()) throw DimensionMismatch("cyclicity_to_revreach: dimension differs");
  std::vector<RevReachInstance> out;
  std::set<std::vector<BigInt>> seen;
  for (std::size_t k = 0; k < net.size(); ++k) {
    auto r = fire(x, net[k]);
    if (!fired(r)) continue;
    auto& y = std::get<Configuration>(r);
    if (!seen.insert(y.entries()).second) continue;
    out.push_back(RevReachInstance{x, net, std::move(y), k});
  }
  return out;
}

}  // namespace scyc
