#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scyc/index_set.hpp"
#include "scyc/numeric.hpp"

namespace scyc {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Displacement;

/// A vector of naturals: one token count per index.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t dimension) : entries_(dimension) {}
  explicit Configuration(std::vector<BigInt> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (sgn(e) < 0) throw std::invalid_argument("configuration entries must be nonnegative");
    }
  }
  Configuration(std::initializer_list<long> entries) {
    entries_.reserve(entries.size());
    for (long e : entries) {
      if (e < 0) throw std::invalid_argument("configuration entries must be nonnegative");
      entries_.emplace_back(e);
    }
  }

  static Configuration zero(std::size_t dimension) { return Configuration(dimension); }

  static Configuration unit(std::size_t dimension, std::size_t index) {
    Configuration c(dimension);
    c.entries_.at(index) = 1;
    return c;
  }

  std::size_t dimension() const { return entries_.size(); }
  const BigInt& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<BigInt>& entries() const { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& e) { return sgn(e) == 0; });
  }

  Configuration& operator+=(const Configuration& other) {
    require_same(other.dimension());
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
  }
  friend Configuration operator+(Configuration a, const Configuration& b) { return a += b; }

  friend Configuration operator*(const BigInt& k, Configuration c) {
    if (sgn(k) < 0) throw std::invalid_argument("negative scaling of a configuration");
    for (auto& e : c.entries_) e *= k;
    return c;
  }

  /// Pointwise order.
  bool leq(const Configuration& other) const {
    require_same(other.dimension());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i] > other.entries_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  void require_same(std::size_t d) const {
    if (d != entries_.size()) throw DimensionMismatch("configuration dimensions differ");
  }

  std::vector<BigInt> entries_;
};

/// Integer vector: post minus pre for transitions, summed along words.
class Displacement {
 public:
  Displacement() = default;
  explicit Displacement(std::size_t dimension) : entries_(dimension) {}
  explicit Displacement(std::vector<BigInt> entries) : entries_(std::move(entries)) {}
  Displacement(std::initializer_list<long> entries) {
    for (long e : entries) entries_.emplace_back(e);
  }

  std::size_t dimension() const { return entries_.size(); }
  const BigInt& operator[](std::size_t i) const { return entries_[i]; }
  BigInt& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<BigInt>& entries() const { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& e) { return sgn(e) == 0; });
  }

  Displacement& operator+=(const Displacement& other) {
    if (other.dimension() != dimension()) throw DimensionMismatch("displacement dimensions differ");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
  }
  friend Displacement operator+(Displacement a, const Displacement& b) { return a += b; }

  Displacement& scale(const BigInt& k) {
    for (auto& e : entries_) e *= k;
    return *this;
  }
  friend Displacement operator*(const BigInt& k, Displacement d) { return d.scale(k); }

  friend bool operator==(const Displacement&, const Displacement&) = default;

 private:
  std::vector<BigInt> entries_;
};

/// c + delta if the result is a configuration.
inline std::optional<Configuration> apply(const Configuration& c, const Displacement& delta) {
  if (c.dimension() != delta.dimension()) throw DimensionMismatch("apply: dimensions differ");
  std::vector<BigInt> out(c.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = c[i] + delta[i];
    if (sgn(out[i]) < 0) return std::nullopt;
  }
  return Configuration(std::move(out));
}

inline IndexSet support(const Configuration& c) {
  IndexSet s(c.dimension());
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    if (sgn(c[i]) > 0) s.insert(i);
  }
  return s;
}

struct Transition {
  Configuration pre;
  Configuration post;
  std::optional<std::string> label;

  Transition() = default;
  Transition(Configuration u, Configuration v, std::optional<std::string> l = std::nullopt)
      : pre(std::move(u)), post(std::move(v)), label(std::move(l)) {
    if (pre.dimension() != post.dimension()) throw DimensionMismatch("transition pre/post dimensions differ");
  }

  std::size_t dimension() const { return pre.dimension(); }

  friend bool operator==(const Transition&, const Transition&) = default;
};

inline Displacement displacement(const Transition& t) {
  Displacement d(t.dimension());
  for (std::size_t i = 0; i < t.dimension(); ++i) d[i] = t.post[i] - t.pre[i];
  return d;
}

/// Finite indexed set of transitions over a fixed dimension.  Transition
/// identity is the position in the sequence.
class PetriNet {
 public:
  PetriNet() = default;
  explicit PetriNet(std::size_t dimension, std::vector<Transition> transitions = {})
      : dimension_(dimension), transitions_(std::move(transitions)) {
    std::set<std::string> labels;
    for (const auto& t : transitions_) {
      if (t.dimension() != dimension_) throw DimensionMismatch("transition dimension differs from net dimension");
      if (t.label && !labels.insert(*t.label).second) {
        throw std::invalid_argument("duplicate transition label '" + *t.label + "'");
      }
    }
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }
  const Transition& operator[](std::size_t i) const { return transitions_[i]; }
  const Transition& at(std::size_t i) const { return transitions_.at(i); }
  const std::vector<Transition>& transitions() const { return transitions_; }
  auto begin() const { return transitions_.begin(); }
  auto end() const { return transitions_.end(); }

  /// Label if present, else the 1-based name "t<k>".
  std::string name(std::size_t i) const {
    const auto& t = transitions_.at(i);
    return t.label ? *t.label : "t" + std::to_string(i + 1);
  }

  friend bool operator==(const PetriNet&, const PetriNet&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Transition> transitions_;
};

/// A net restricted to a subset of transitions of a parent net.  `origin[k]`
/// is the parent index of the k-th transition of `net`.
struct Subnet {
  PetriNet net;
  std::vector<std::size_t> origin;

  TransitionSet lift(const TransitionSet& local, std::size_t parent_size) const {
    TransitionSet out(parent_size);
    for (auto k : local.elements()) out.insert(origin[k]);
    return out;
  }
};

inline Subnet restrict(const PetriNet& net, const TransitionSet& active) {
  std::vector<Transition> ts;
  std::vector<std::size_t> origin;
  for (auto i : active.elements()) {
    ts.push_back(net.at(i));
    origin.push_back(i);
  }
  return Subnet{PetriNet(net.dimension(), std::move(ts)), std::move(origin)};
}

inline PetriNet reverse_net(const PetriNet& net) {
  std::vector<Transition> ts;
  ts.reserve(net.size());
  for (const auto& t : net) ts.emplace_back(t.post, t.pre, t.label);
  return PetriNet(net.dimension(), std::move(ts));
}

/// Removes exact duplicates (same pre and post), keeping the first
/// occurrence.  Returns the indices that were dropped.
inline std::pair<PetriNet, std::vector<std::size_t>> deduplicate(const PetriNet& net) {
  std::vector<Transition> kept;
  std::vector<std::size_t> dropped;
  std::set<std::pair<std::vector<BigInt>, std::vector<BigInt>>> seen;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& t = net[i];
    if (seen.emplace(t.pre.entries(), t.post.entries()).second) {
      kept.push_back(t);
    } else {
      dropped.push_back(i);
    }
  }
  return {PetriNet(net.dimension(), std::move(kept)), std::move(dropped)};
}

/// Multiplicity per transition index; absent means zero.
class ParikhVector {
 public:
  ParikhVector() = default;
  ParikhVector(std::initializer_list<std::pair<const std::size_t, long>> counts) {
    for (const auto& [t, n] : counts) add(t, BigInt(n));
  }

  BigInt get(std::size_t t) const {
    auto it = counts_.find(t);
    return it == counts_.end() ? BigInt(0) : it->second;
  }

  void add(std::size_t t, const BigInt& n) {
    if (sgn(n) < 0) throw std::invalid_argument("negative Parikh count");
    if (sgn(n) == 0) return;
    counts_[t] += n;
  }

  void set(std::size_t t, const BigInt& n) {
    if (sgn(n) < 0) throw std::invalid_argument("negative Parikh count");
    if (sgn(n) == 0) {
      counts_.erase(t);
    } else {
      counts_[t] = n;
    }
  }

  const std::map<std::size_t, BigInt>& counts() const { return counts_; }
  bool empty() const { return counts_.empty(); }

  TransitionSet support(std::size_t universe) const {
    TransitionSet s(universe);
    for (const auto& [t, n] : counts_) s.insert(t);
    return s;
  }

  ParikhVector& operator+=(const ParikhVector& other) {
    for (const auto& [t, n] : other.counts_) add(t, n);
    return *this;
  }
  friend ParikhVector operator+(ParikhVector a, const ParikhVector& b) { return a += b; }

  friend ParikhVector operator*(const BigInt& k, ParikhVector p) {
    if (sgn(k) < 0) throw std::invalid_argument("negative Parikh scaling");
    if (sgn(k) == 0) return {};
    for (auto& [t, n] : p.counts_) n *= k;
    return p;
  }

  friend bool operator==(const ParikhVector&, const ParikhVector&) = default;

 private:
  std::map<std::size_t, BigInt> counts_;
};

inline Displacement displacement_of_parikh(const PetriNet& net, const ParikhVector& psi) {
  Displacement total(net.dimension());
  for (const auto& [t, n] : psi.counts()) {
    if (t >= net.size()) throw std::out_of_range("Parikh vector refers to an unknown transition");
    total += n * displacement(net[t]);
  }
  return total;
}

inline ParikhVector parikh(std::span<const std::size_t> word) {
  ParikhVector p;
  for (auto t : word) p.add(t, 1);
  return p;
}

/// Firing failure: `position` in the word, the transition there, and the
/// lowest index whose count is below the transition's pre-vector.
struct NotFireable {
  std::size_t position = 0;
  std::size_t transition = 0;
  std::size_t index = 0;

  friend bool operator==(const NotFireable&, const NotFireable&) = default;
};

using FireResult = std::variant<Configuration, NotFireable>;

inline bool fired(const FireResult& r) { return std::holds_alternative<Configuration>(r); }

inline std::optional<std::size_t> first_deficit(const Configuration& c, const Configuration& pre) {
  if (c.dimension() != pre.dimension()) throw DimensionMismatch("fire: dimensions differ");
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    if (c[i] < pre[i]) return i;
  }
  return std::nullopt;
}

inline FireResult fire(const Configuration& c, const Transition& t) {
  if (auto i = first_deficit(c, t.pre)) return NotFireable{0, 0, *i};
  std::vector<BigInt> out(c.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c[i] - t.pre[i] + t.post[i];
  return Configuration(std::move(out));
}

/// Sequence of configurations visited by `word`, starting with `c`.
using Trace = std::vector<Configuration>;

inline std::variant<Trace, NotFireable> trace_word(const Configuration& c, const PetriNet& net,
                                                   std::span<const std::size_t> word) {
  Trace trace{c};
  for (std::size_t pos = 0; pos < word.size(); ++pos) {
    const auto t = word[pos];
    if (t >= net.size()) throw std::out_of_range("word refers to an unknown transition");
    auto r = fire(trace.back(), net[t]);
    if (auto* nf = std::get_if<NotFireable>(&r)) return NotFireable{pos, t, nf->index};
    trace.push_back(std::get<Configuration>(std::move(r)));
  }
  return trace;
}

inline FireResult fire_word(const Configuration& c, const PetriNet& net, std::span<const std::size_t> word) {
  Configuration cur = c;
  for (std::size_t pos = 0; pos < word.size(); ++pos) {
    const auto t = word[pos];
    if (t >= net.size()) throw std::out_of_range("word refers to an unknown transition");
    auto r = fire(cur, net[t]);
    if (auto* nf = std::get_if<NotFireable>(&r)) return NotFireable{pos, t, nf->index};
    cur = std::get<Configuration>(std::move(r));
  }
  return cur;
}

inline Displacement displacement_of_word(const PetriNet& net, std::span<const std::size_t> word) {
  return displacement_of_parikh(net, parikh(word));
}

}  // namespace scyc
