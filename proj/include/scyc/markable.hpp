#pragma once

#include <utility>
#include <vector>

#include "scyc/index_set.hpp"
#include "scyc/net.hpp"
#include "scyc/power_word.hpp"

namespace scyc {

/// Union of the post-supports of the transitions whose pre-support lies in
/// `indices`.
inline IndexSet prop_step(const PetriNet& net, const IndexSet& indices) {
  IndexSet out(net.dimension());
  for (const auto& t : net) {
    if (support(t.pre).subset_of(indices)) out |= support(t.post);
  }
  return out;
}

/// A set of markable indices with a word realizing it.
struct MarkableDirection {
  IndexSet indices;
  PowerWord witness;
};

/// Least fixpoint of prop_step by Kleene iteration from the empty set,
/// together with a word that fires from 0 to a configuration whose support is
/// exactly that fixpoint.
///
/// Each round takes the transitions enabled by the support at the start of the
/// round, in ascending index order.  A transition (u, v) that adds indices turns
/// the current word w into w^n t, with n the least integer exceeding every
/// entry of u: if 0 reaches y by w, then 0 reaches n*y by w^n, and n*y - u is
/// positive wherever y is.
inline MarkableDirection forward_markable(const PetriNet& net) {
  const std::size_t d = net.dimension();
  IndexSet current(d);
  PowerWord word;
  for (;;) {
    const IndexSet round_start = current;
    for (std::size_t k = 0; k < net.size(); ++k) {
      const auto& t = net[k];
      if (!support(t.pre).subset_of(round_start)) continue;
      const IndexSet post = support(t.post);
      if (post.subset_of(current)) continue;
      BigInt n = 1;
      for (const auto& e : t.pre.entries()) {
        if (e >= n) n = e + 1;
      }
      word = concat_of({power_of(word, n), PowerWord::leaf(k)});
      current |= post;
    }
    if (current == round_start) break;
  }
  return {std::move(current), std::move(word)};
}

/// Backward markable indices, via the reversed net.  The returned word is over
/// the original net: it fires from some y with support exactly the returned
/// set down to 0.
inline MarkableDirection backward_markable(const PetriNet& net) {
  auto reverse = forward_markable(reverse_net(net));
  return {std::move(reverse.indices), reversed(reverse.witness)};
}

/// The configuration a backward witness starts from: minus its displacement.
inline Configuration backward_start(const PetriNet& net, const PowerWord& backward_witness) {
  const auto s = summarize(net, backward_witness);
  std::vector<BigInt> y(net.dimension());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = -s.delta[i];
  return Configuration(std::move(y));
}

struct MarkableResult {
  IndexSet i_plus;
  IndexSet i_minus;
  IndexSet i_both;
  PowerWord forward_witness;
  PowerWord backward_witness;
  TransitionSet mutually_fireable;

  friend bool operator==(const MarkableResult&, const MarkableResult&) = default;
};

inline TransitionSet mutually_fireable_from(const PetriNet& net, const IndexSet& i_both) {
  TransitionSet m(net.size());
  for (std::size_t k = 0; k < net.size(); ++k) {
    if ((support(net[k].pre) | support(net[k].post)).subset_of(i_both)) m.insert(k);
  }
  return m;
}

inline MarkableResult mutually_fireable_set(const PetriNet& net) {
  auto fwd = forward_markable(net);
  auto bwd = backward_markable(net);
  IndexSet both = fwd.indices & bwd.indices;
  TransitionSet m = mutually_fireable_from(net, both);
  return MarkableResult{std::move(fwd.indices), std::move(bwd.indices), std::move(both),
                        std::move(fwd.witness), std::move(bwd.witness), std::move(m)};
}

}  // namespace scyc
