#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "scyc/net.hpp"
#include "scyc/numeric.hpp"

namespace scyc {

/// Compressed firing sequence: a transition, a concatenation, or a word
/// repeated `exponent` times.  Nodes are immutable and shared, so copies are
/// cheap and subtrees may be reused.
class PowerWord {
 public:
  struct Leaf;
  struct Concat;
  struct Power;
  using Node = std::variant<Leaf, Concat, Power>;

  /// The empty word.
  PowerWord();

  static PowerWord leaf(std::size_t transition);
  static PowerWord concat(std::vector<PowerWord> items);
  static PowerWord power(PowerWord body, BigInt exponent);

  const Node& node() const;
  const Leaf* as_leaf() const;
  const Concat* as_concat() const;
  const Power* as_power() const;

  /// Structurally empty (a concatenation of nothing).
  bool is_empty_concat() const;

  const void* identity() const { return node_.get(); }

  friend bool operator==(const PowerWord& a, const PowerWord& b);

 private:
  explicit PowerWord(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct PowerWord::Leaf {
  std::size_t transition;
};

struct PowerWord::Concat {
  std::vector<PowerWord> items;
};

struct PowerWord::Power {
  PowerWord body;
  BigInt exponent;
};

inline PowerWord::PowerWord() : node_(std::make_shared<const Node>(Concat{})) {}

inline PowerWord PowerWord::leaf(std::size_t transition) {
  return PowerWord(std::make_shared<const Node>(Leaf{transition}));
}

inline PowerWord PowerWord::concat(std::vector<PowerWord> items) {
  return PowerWord(std::make_shared<const Node>(Concat{std::move(items)}));
}

inline PowerWord PowerWord::power(PowerWord body, BigInt exponent) {
  if (exponent < 1) throw std::invalid_argument("power exponent must be at least 1");
  return PowerWord(std::make_shared<const Node>(Power{std::move(body), std::move(exponent)}));
}

inline const PowerWord::Node& PowerWord::node() const { return *node_; }
inline const PowerWord::Leaf* PowerWord::as_leaf() const { return std::get_if<Leaf>(node_.get()); }
inline const PowerWord::Concat* PowerWord::as_concat() const { return std::get_if<Concat>(node_.get()); }
inline const PowerWord::Power* PowerWord::as_power() const { return std::get_if<Power>(node_.get()); }

inline bool PowerWord::is_empty_concat() const {
  const auto* c = as_concat();
  return c != nullptr && c->items.empty();
}

inline bool operator==(const PowerWord& a, const PowerWord& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (const auto* l = a.as_leaf()) return l->transition == b.as_leaf()->transition;
  if (const auto* c = a.as_concat()) return c->items == b.as_concat()->items;
  const auto* p = a.as_power();
  const auto* q = b.as_power();
  return p->exponent == q->exponent && p->body == q->body;
}

/// Builds w^n, collapsing n = 1 and empty bodies.
inline PowerWord power_of(PowerWord body, const BigInt& exponent) {
  if (exponent < 1) throw std::invalid_argument("power exponent must be at least 1");
  if (exponent == 1 || body.is_empty_concat()) return body;
  return PowerWord::power(std::move(body), exponent);
}

/// Concatenation that drops empty items and splices nested concatenations;
/// a single remaining item is returned as is.
inline PowerWord concat_of(const std::vector<PowerWord>& parts) {
  std::vector<PowerWord> items;
  for (const auto& p : parts) {
    if (const auto* c = p.as_concat()) {
      items.insert(items.end(), c->items.begin(), c->items.end());
    } else {
      items.push_back(p);
    }
  }
  if (items.size() == 1) return items.front();
  return PowerWord::concat(std::move(items));
}

/// Firing summary of a word: its displacement and the least configuration it
/// is fireable from.  A word w is fireable from c iff c >= need, and then
/// reaches c + delta.
struct WordSummary {
  Displacement delta;
  std::vector<BigInt> need;
};

namespace detail {

class Summarizer {
 public:
  explicit Summarizer(const PetriNet& net) : net_(net) {}

  const WordSummary& operator()(const PowerWord& w) {
    if (auto it = cache_.find(w.identity()); it != cache_.end()) return it->second;
    WordSummary s = compute(w);
    return cache_.emplace(w.identity(), std::move(s)).first->second;
  }

 private:
  WordSummary compute(const PowerWord& w) {
    const std::size_t d = net_.dimension();
    if (const auto* l = w.as_leaf()) {
      if (l->transition >= net_.size()) throw std::out_of_range("power word refers to an unknown transition");
      const auto& t = net_[l->transition];
      return WordSummary{displacement(t), t.pre.entries()};
    }
    if (const auto* c = w.as_concat()) {
      WordSummary acc{Displacement(d), std::vector<BigInt>(d)};
      for (const auto& item : c->items) {
        const WordSummary& s = (*this)(item);
        for (std::size_t i = 0; i < d; ++i) {
          BigInt shifted = s.need[i] - acc.delta[i];
          if (shifted > acc.need[i]) acc.need[i] = std::move(shifted);
        }
        acc.delta += s.delta;
      }
      return acc;
    }
    // Each coordinate along the iterations is affine in the iteration number,
    // so the binding iteration is the first one or the last one.
    const auto& p = *w.as_power();
    const WordSummary& s = (*this)(p.body);
    WordSummary out{s.delta, s.need};
    BigInt last = p.exponent - 1;
    for (std::size_t i = 0; i < d; ++i) {
      if (sgn(s.delta[i]) < 0) out.need[i] -= last * s.delta[i];
    }
    out.delta.scale(p.exponent);
    return out;
  }

  const PetriNet& net_;
  std::unordered_map<const void*, WordSummary> cache_;
};

inline bool covers(const Configuration& c, const std::vector<BigInt>& need) {
  for (std::size_t i = 0; i < need.size(); ++i) {
    if (c[i] < need[i]) return false;
  }
  return true;
}

}  // namespace detail

inline WordSummary summarize(const PetriNet& net, const PowerWord& w) {
  detail::Summarizer s(net);
  return s(w);
}

/// One step of a path into a power word: an item position inside a
/// concatenation, or an iteration number inside a power.
struct PathStep {
  enum class Kind { item, iteration };
  Kind kind;
  BigInt value;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Where replay first fails: the path to the failing leaf, its transition, the
/// lowest deficient index, and the configuration just before that leaf.
struct PowerWordNotFireable {
  std::vector<PathStep> path;
  std::size_t transition = 0;
  std::size_t index = 0;
  Configuration at;
};

using PowerFireResult = std::variant<Configuration, PowerWordNotFireable>;

namespace detail {

inline PowerWordNotFireable locate_failure(Summarizer& summary, const PetriNet& net, Configuration c,
                                           const PowerWord& w) {
  PowerWordNotFireable out;
  const PowerWord* cur = &w;
  for (;;) {
    if (const auto* l = cur->as_leaf()) {
      out.transition = l->transition;
      out.index = *first_deficit(c, net[l->transition].pre);
      out.at = std::move(c);
      return out;
    }
    if (const auto* cat = cur->as_concat()) {
      const PowerWord* next = nullptr;
      for (std::size_t k = 0; k < cat->items.size(); ++k) {
        const auto& s = summary(cat->items[k]);
        if (covers(c, s.need)) {
          c = *apply(c, s.delta);
          continue;
        }
        out.path.push_back({PathStep::Kind::item, BigInt(static_cast<unsigned long>(k))});
        next = &cat->items[k];
        break;
      }
      if (next == nullptr) throw std::logic_error("failure localization: concatenation fires");
      cur = next;
      continue;
    }
    const auto& p = *cur->as_power();
    const auto& s = summary(p.body);
    // First iteration k at which c + k*delta no longer covers the body's need.
    std::optional<BigInt> first;
    for (std::size_t i = 0; i < c.dimension(); ++i) {
      BigInt k;
      if (c[i] < s.need[i]) {
        k = 0;
      } else if (sgn(s.delta[i]) < 0) {
        k = floor_div(c[i] - s.need[i], -s.delta[i]) + 1;
      } else {
        continue;
      }
      if (!first || k < *first) first = k;
    }
    if (!first || *first >= p.exponent) throw std::logic_error("failure localization: power fires");
    out.path.push_back({PathStep::Kind::iteration, *first});
    c = *apply(c, *first * s.delta);
    cur = &p.body;
  }
}

}  // namespace detail

/// Replays `w` from `c` without expanding it.
inline PowerFireResult fire_power_word(const Configuration& c, const PetriNet& net, const PowerWord& w) {
  if (c.dimension() != net.dimension()) throw DimensionMismatch("fire_power_word: dimensions differ");
  detail::Summarizer summary(net);
  const auto& s = summary(w);
  if (detail::covers(c, s.need)) return *apply(c, s.delta);
  return detail::locate_failure(summary, net, c, w);
}

inline bool fired(const PowerFireResult& r) { return std::holds_alternative<Configuration>(r); }

namespace detail {

template <typename Fn>
void visit_nodes(const PowerWord& w, Fn&& fn) {
  fn(w);
  if (const auto* c = w.as_concat()) {
    for (const auto& item : c->items) visit_nodes(item, fn);
  } else if (const auto* p = w.as_power()) {
    visit_nodes(p->body, fn);
  }
}

}  // namespace detail

inline ParikhVector parikh(const PowerWord& w) {
  if (const auto* l = w.as_leaf()) return ParikhVector{{l->transition, 1}};
  if (const auto* c = w.as_concat()) {
    ParikhVector acc;
    for (const auto& item : c->items) acc += parikh(item);
    return acc;
  }
  const auto& p = *w.as_power();
  return p.exponent * parikh(p.body);
}

inline BigInt expanded_length(const PowerWord& w) {
  if (w.as_leaf() != nullptr) return 1;
  if (const auto* c = w.as_concat()) {
    BigInt n = 0;
    for (const auto& item : c->items) n += expanded_length(item);
    return n;
  }
  const auto& p = *w.as_power();
  return p.exponent * expanded_length(p.body);
}

/// Number of stored nodes.
inline std::size_t stored_size(const PowerWord& w) {
  std::size_t n = 0;
  detail::visit_nodes(w, [&](const PowerWord&) { ++n; });
  return n;
}

struct ExpansionBudgetExceeded : std::length_error {
  using std::length_error::length_error;
};

inline constexpr unsigned long default_expansion_budget = 1'000'000;

inline std::vector<std::size_t> expand(const PowerWord& w, unsigned long budget = default_expansion_budget) {
  BigInt len = expanded_length(w);
  if (len > budget) {
    throw ExpansionBudgetExceeded("power word expands to " + len.get_str() + " steps, budget is " +
                                  std::to_string(budget));
  }
  std::vector<std::size_t> out;
  out.reserve(len.get_ui());
  auto rec = [&](auto&& self, const PowerWord& x) -> void {
    if (const auto* l = x.as_leaf()) {
      out.push_back(l->transition);
    } else if (const auto* c = x.as_concat()) {
      for (const auto& item : c->items) self(self, item);
    } else {
      const auto& p = *x.as_power();
      for (unsigned long k = 0; k < p.exponent.get_ui(); ++k) self(self, p.body);
    }
  };
  rec(rec, w);
  return out;
}

/// The mirror word: concatenations reversed at every level.
inline PowerWord reversed(const PowerWord& w) {
  if (w.as_leaf() != nullptr) return w;
  if (const auto* c = w.as_concat()) {
    std::vector<PowerWord> items;
    items.reserve(c->items.size());
    for (auto it = c->items.rbegin(); it != c->items.rend(); ++it) items.push_back(reversed(*it));
    return PowerWord::concat(std::move(items));
  }
  const auto& p = *w.as_power();
  return PowerWord::power(reversed(p.body), p.exponent);
}

/// Renames leaves through `mapping` (e.g. subnet index -> parent index).
inline PowerWord remap(const PowerWord& w, const std::vector<std::size_t>& mapping) {
  if (const auto* l = w.as_leaf()) return PowerWord::leaf(mapping.at(l->transition));
  if (const auto* c = w.as_concat()) {
    std::vector<PowerWord> items;
    items.reserve(c->items.size());
    for (const auto& item : c->items) items.push_back(remap(item, mapping));
    return PowerWord::concat(std::move(items));
  }
  const auto& p = *w.as_power();
  return PowerWord::power(remap(p.body, mapping), p.exponent);
}

inline void validate(const PowerWord& w, const PetriNet& net) {
  detail::visit_nodes(w, [&](const PowerWord& x) {
    if (const auto* l = x.as_leaf(); l != nullptr && l->transition >= net.size()) {
      throw std::out_of_range("power word refers to transition " + std::to_string(l->transition + 1) +
                              " of a net with " + std::to_string(net.size()) + " transitions");
    }
  });
}

}  // namespace scyc
