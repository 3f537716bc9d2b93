#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include "scyc/index_set.hpp"
#include "scyc/net.hpp"

namespace scyc {

/// Bounds for the exhaustive searches: configurations with an entry above
/// coordinate_bound are pruned, at most max_states configurations are stored,
/// and with max_depth set no configuration deeper than that is expanded.
struct SearchBudget {
  std::uint64_t coordinate_bound = 6;
  std::size_t max_states = 100000;
  std::optional<std::size_t> max_depth;

  void validate() const {
    if (coordinate_bound == 0 || max_states == 0 || (max_depth && *max_depth == 0)) {
      throw std::invalid_argument("SearchBudget: all bounds must be positive");
    }
    if (coordinate_bound > (std::uint64_t{1} << 40)) throw std::invalid_argument("SearchBudget: coordinate bound too large");
  }
};

struct Reached {
  std::vector<std::size_t> path;
};
/// The bounded region was explored completely and holds no path.
struct ProvablyUnreachableWithinBound {};
/// The state or depth budget ran out first; nothing is known.
struct BudgetExhausted {};

using ReachResult = std::variant<Reached, ProvablyUnreachableWithinBound, BudgetExhausted>;

namespace detail {

using State = std::vector<std::int64_t>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : s) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Breadth-first exploration of the marking graph inside the box
/// [0, coordinate_bound]^d, with transitions tried in index order.
class BoundedGraph {
 public:
  struct Edge {
    std::size_t transition;
    std::size_t target;
  };

  BoundedGraph(const PetriNet& net, const SearchBudget& budget) : net_(net), budget_(budget) {
    budget_.validate();
    const std::int64_t cap = static_cast<std::int64_t>(budget_.coordinate_bound) + 1;
    auto clamp = [&](const BigInt& v) -> std::int64_t {
      return cmp(v, cap) >= 0 ? cap : static_cast<std::int64_t>(v.get_si());
    };
    for (const auto& t : net) {
      State u(net.dimension());
      State v(net.dimension());
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = clamp(t.pre[i]);
        v[i] = clamp(t.post[i]);
      }
      pre_.push_back(std::move(u));
      post_.push_back(std::move(v));
    }
  }

  std::optional<State> to_state(const Configuration& c) const {
    State s(c.dimension());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (cmp(c[i], budget_.coordinate_bound) > 0) return std::nullopt;
      s[i] = static_cast<std::int64_t>(c[i].get_si());
    }
    return s;
  }

  /// Explores from `start`.  `stop` is consulted on every generated edge
  /// (source id, transition, successor state) and ends the search when it
  /// returns true.
  void explore(const State& start,
               const std::function<bool(std::size_t, std::size_t, const State&)>& stop = nullptr) {
    add(start, 0, npos, 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      const std::size_t id = queue.front();
      queue.pop_front();
      if (budget_.max_depth && depth_[id] >= *budget_.max_depth) {
        if (has_successor(states_[id])) exhausted_ = true;
        continue;
      }
      for (std::size_t k = 0; k < pre_.size(); ++k) {
        auto next = successor(states_[id], k);
        if (!next) continue;
        if (stop && stop(id, k, *next)) {
          stopped_ = true;
          return;
        }
        auto it = index_.find(*next);
        if (it != index_.end()) {
          edges_[id].push_back({k, it->second});
          continue;
        }
        if (states_.size() >= budget_.max_states) {
          exhausted_ = true;
          continue;
        }
        const std::size_t fresh = add(std::move(*next), depth_[id] + 1, id, k);
        edges_[id].push_back({k, fresh});
        queue.push_back(fresh);
      }
    }
  }

  std::vector<std::size_t> path_to(std::size_t id) const {
    std::vector<std::size_t> path;
    for (; parent_[id] != npos; id = parent_[id]) path.push_back(via_[id]);
    return {path.rbegin(), path.rend()};
  }

  std::optional<std::size_t> find(const State& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool exhausted() const { return exhausted_; }
  bool stopped() const { return stopped_; }
  std::size_t size() const { return states_.size(); }
  const State& state(std::size_t id) const { return states_[id]; }
  const std::vector<Edge>& edges(std::size_t id) const { return edges_[id]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t add(State s, std::size_t depth, std::size_t parent, std::size_t via) {
    const std::size_t id = states_.size();
    index_.emplace(s, id);
    states_.push_back(std::move(s));
    depth_.push_back(depth);
    parent_.push_back(parent);
    via_.push_back(via);
    edges_.emplace_back();
    return id;
  }

  std::optional<State> successor(const State& s, std::size_t k) const {
    const auto& u = pre_[k];
    const auto& v = post_[k];
    State next(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < u[i]) return std::nullopt;
      next[i] = s[i] - u[i] + v[i];
      if (next[i] > static_cast<std::int64_t>(budget_.coordinate_bound)) return std::nullopt;
    }
    return next;
  }

  bool has_successor(const State& s) const {
    for (std::size_t k = 0; k < pre_.size(); ++k) {
      if (successor(s, k)) return true;
    }
    return false;
  }

  const PetriNet& net_;
  SearchBudget budget_;
  std::vector<State> pre_;
  std::vector<State> post_;
  std::vector<State> states_;
  std::unordered_map<State, std::size_t, StateHash> index_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> via_;
  std::vector<std::vector<Edge>> edges_;
  bool exhausted_ = false;
  bool stopped_ = false;
};

}  // namespace detail

/// Bounded breadth-first search for a path from `from` to `to`.  A returned
/// path is a shortest one inside the box; with allow_empty false only nonempty
/// paths count, so from = to asks for a cycle.
inline ReachResult bounded_reach(const PetriNet& net, const Configuration& from, const Configuration& to,
                                 const SearchBudget& budget, bool allow_empty = true) {
  if (from.dimension() != net.dimension() || to.dimension() != net.dimension()) {
    throw DimensionMismatch("bounded_reach: configuration dimension differs from the net");
  }
  detail::BoundedGraph graph(net, budget);
  const auto start = graph.to_state(from);
  const auto goal = graph.to_state(to);
  if (!start || !goal) return ProvablyUnreachableWithinBound{};
  if (allow_empty && *start == *goal) return Reached{};

  std::optional<std::vector<std::size_t>> found;
  graph.explore(*start, [&](std::size_t source, std::size_t t, const detail::State& next) {
    if (next != *goal) return false;
    auto path = graph.path_to(source);
    path.push_back(t);
    found = std::move(path);
    return true;
  });
  if (found) return Reached{std::move(*found)};
  if (graph.exhausted()) return BudgetExhausted{};
  return ProvablyUnreachableWithinBound{};
}

/// Union of the supports of configurations reachable from 0 inside the box.
inline IndexSet brute_forward_markable(const PetriNet& net, const SearchBudget& budget) {
  detail::BoundedGraph graph(net, budget);
  graph.explore(detail::State(net.dimension(), 0));
  IndexSet out(net.dimension());
  for (std::size_t id = 0; id < graph.size(); ++id) {
    const auto& s = graph.state(id);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] > 0) out.insert(i);
    }
  }
  return out;
}

/// Transitions on some nonempty cycle through 0 inside the explored region: an
/// edge c -t-> c' counts when c is reachable from 0 (always, by construction)
/// and c' reaches 0 again along explored edges.
inline TransitionSet brute_zero_cycle_transitions(const PetriNet& net, const SearchBudget& budget) {
  detail::BoundedGraph graph(net, budget);
  graph.explore(detail::State(net.dimension(), 0));
  const std::size_t n = graph.size();
  std::vector<std::vector<std::size_t>> incoming(n);
  for (std::size_t id = 0; id < n; ++id) {
    for (const auto& e : graph.edges(id)) incoming[e.target].push_back(id);
  }
  std::vector<bool> back(n, false);
  std::deque<std::size_t> queue{0};
  back[0] = true;
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    for (auto p : incoming[id]) {
      if (!back[p]) {
        back[p] = true;
        queue.push_back(p);
      }
    }
  }
  TransitionSet out(net.size());
  for (std::size_t id = 0; id < n; ++id) {
    for (const auto& e : graph.edges(id)) {
      if (back[e.target]) out.insert(e.transition);
    }
  }
  return out;
}

struct CyclicWithin {
  std::vector<std::size_t> path;
};
struct NoCycleWithinBound {};

using CyclicResult = std::variant<CyclicWithin, NoCycleWithinBound, BudgetExhausted>;

/// Bounded search for c -T+-> c.
inline CyclicResult brute_cyclic(const PetriNet& net, const Configuration& c, const SearchBudget& budget) {
  auto r = bounded_reach(net, c, c, budget, false);
  if (auto* hit = std::get_if<Reached>(&r)) return CyclicWithin{std::move(hit->path)};
  if (std::holds_alternative<BudgetExhausted>(r)) return BudgetExhausted{};
  return NoCycleWithinBound{};
}

}  // namespace scyc
