#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scyc/cyclic.hpp"
#include "scyc/index_set.hpp"
#include "scyc/markable.hpp"
#include "scyc/net.hpp"
#include "scyc/power_word.hpp"

namespace scyc {

/// One application of mu to the subnet `active`; every set is in the numbering
/// of the original net.
struct RoundRecord {
  TransitionSet active;
  IndexSet i_plus;
  IndexSet i_minus;
  IndexSet i_both;
  TransitionSet m_set;
  /// Transitions certified to be in U(T'); contains U(T') & m_set, and equals
  /// U(T') whenever m_set is all of T'.
  TransitionSet u_certified;
  TransitionSet next;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct AnalysisReport {
  std::size_t dimension = 0;
  std::size_t transition_count = 0;
  /// Markable analysis of the input net.
  MarkableResult input_markable;
  /// U(T) of the input net, when requested.
  std::optional<CyclicCertificate> input_u;
  /// Markable analysis of the final fixpoint subnet.
  MarkableResult markable;
  /// U-certificate of the final fixpoint subnet, where U is all of it.
  CyclicCertificate u_certificate;
  TransitionSet lambda_set;
  /// T0 > T1 > ... > Tn, strictly decreasing, with mu(Tn) = Tn.
  std::vector<TransitionSet> rounds;
  std::vector<RoundRecord> round_details;
  bool structurally_cyclic = false;
  std::optional<PowerWord> witness;

  std::size_t strict_rounds() const { return rounds.empty() ? 0 : rounds.size() - 1; }

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Raised when witness synthesis produces a word that does not replay; this
/// indicates a bug, never a property of the input.
struct ConstructionFailure : std::logic_error {
  using std::logic_error::logic_error;
};

struct WitnessVerdict {
  bool valid = false;
  TransitionSet transitions_used;
  BigInt expanded_length;
  std::optional<PowerWordNotFireable> failure;
  std::string reason;
};

/// A word witnesses cyclicity of 0 when it is nonempty and replays from 0
/// back to 0.
inline WitnessVerdict verify_witness(const PetriNet& net, const PowerWord& pw) {
  validate(pw, net);
  WitnessVerdict v;
  v.transitions_used = parikh(pw).support(net.size());
  v.expanded_length = expanded_length(pw);
  if (v.expanded_length < 1) {
    v.reason = "empty word";
    return v;
  }
  auto r = fire_power_word(Configuration::zero(net.dimension()), net, pw);
  if (auto* nf = std::get_if<PowerWordNotFireable>(&r)) {
    v.reason = "transition " + net.name(nf->transition) + " not fireable (index " + std::to_string(nf->index + 1) + ")";
    v.failure = std::move(*nf);
    return v;
  }
  if (!std::get<Configuration>(r).is_zero()) {
    v.reason = "replay does not return to the zero configuration";
    return v;
  }
  v.valid = true;
  return v;
}

namespace detail {

struct MuRound {
  RoundRecord record;
  Subnet subnet;
  MarkableResult markable;
  CyclicCertificate certificate;
};

/// `known` is a T-invariant of `net` (parent indices); it seeds the
/// certificate when its support lies inside `active`.
inline MuRound mu_round(const PetriNet& net, const TransitionSet& active, bool full_u = false,
                        const ParikhVector* known = nullptr) {
  if (active.universe() != net.size()) throw std::invalid_argument("mu: active set is not over the net's transitions");
  MuRound r;
  r.subnet = restrict(net, active);
  r.markable = mutually_fireable_set(r.subnet.net);
  std::optional<ParikhVector> seed;
  if (known != nullptr) {
    std::vector<std::size_t> local(net.size(), net.size());
    for (std::size_t k = 0; k < r.subnet.origin.size(); ++k) local[r.subnet.origin[k]] = k;
    seed.emplace();
    for (const auto& [j, count] : known->counts()) {
      if (local[j] == net.size()) {
        seed.reset();
        break;
      }
      seed->add(local[j], count);
    }
  }
  r.certificate = certify_cyclic(r.subnet.net,
                                 full_u ? TransitionSet::full(r.subnet.net.size()) : r.markable.mutually_fireable,
                                 nullptr, seed ? &*seed : nullptr);
  r.record.active = active;
  r.record.i_plus = r.markable.i_plus;
  r.record.i_minus = r.markable.i_minus;
  r.record.i_both = r.markable.i_both;
  r.record.m_set = r.subnet.lift(r.markable.mutually_fireable, net.size());
  r.record.u_certified = r.subnet.lift(r.certificate.u_set, net.size());
  r.record.next = r.record.m_set & r.record.u_certified;
  return r;
}

inline MarkableResult lift(const MarkableResult& m, const Subnet& s, std::size_t parent_size) {
  return MarkableResult{m.i_plus,
                        m.i_minus,
                        m.i_both,
                        remap(m.forward_witness, s.origin),
                        remap(m.backward_witness, s.origin),
                        s.lift(m.mutually_fireable, parent_size)};
}

inline CyclicCertificate lift(const CyclicCertificate& c, const Subnet& s, std::size_t parent_size) {
  ParikhVector psi;
  for (const auto& [k, count] : c.psi.counts()) psi.add(s.origin[k], count);
  return CyclicCertificate{s.lift(c.u_set, parent_size), std::move(psi)};
}

inline std::string describe(const ParikhVector& p) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [t, n] : p.counts()) {
    out << (first ? "" : ", ") << 't' << (t + 1) << ':' << n.get_str();
    first = false;
  }
  out << '}';
  return out.str();
}

/// Builds w+^n w^n w-^n on a subnet with M = U = all transitions.
inline PowerWord build_cycle(const PetriNet& sub, const MarkableResult& markable, const CyclicCertificate& cert) {
  const std::size_t n_tr = sub.size();
  const ParikhVector psi_plus = parikh(markable.forward_witness);
  const ParikhVector psi_minus = parikh(markable.backward_witness);
  const ParikhVector& psi0 = cert.psi;

  // Least m >= 1 with m * psi0 >= psi+ + psi- componentwise.
  BigInt m = 1;
  for (std::size_t t = 0; t < n_tr; ++t) {
    const BigInt want = psi_plus.get(t) + psi_minus.get(t);
    const BigInt have = psi0.get(t);
    if (sgn(have) == 0) throw ConstructionFailure("witness synthesis: psi0 vanishes on t" + std::to_string(t + 1));
    BigInt k = ceil_div(want, have);
    if (k > m) m = std::move(k);
  }

  // The middle word: psi = m*psi0 - psi+ - psi-, in ascending transition order.
  std::vector<PowerWord> blocks;
  for (std::size_t t = 0; t < n_tr; ++t) {
    const BigInt count = m * psi0.get(t) - psi_plus.get(t) - psi_minus.get(t);
    if (sgn(count) > 0) blocks.push_back(power_of(PowerWord::leaf(t), count));
  }
  const PowerWord middle = concat_of(blocks);

  // Least n >= 1 such that the middle word fires from n*z, z the indicator of
  // I(T): every transition lives inside I(T), so the need vector of the middle
  // word vanishes outside it.
  BigInt n = 1;
  for (const auto& need : summarize(sub, middle).need) {
    if (need > n) n = need;
  }

  return concat_of({power_of(markable.forward_witness, n), power_of(middle, n),
                    power_of(markable.backward_witness, n)});
}

inline PowerWord synthesize_checked(const PetriNet& net, const Subnet& s, const MarkableResult& markable,
                                    const CyclicCertificate& cert) {
  const auto all = TransitionSet::full(s.net.size());
  if (markable.mutually_fireable != all || cert.u_set != all) {
    throw ConstructionFailure("witness synthesis: subnet is not a fixpoint of mu");
  }
  PowerWord witness = remap(build_cycle(s.net, markable, cert), s.origin);
  auto verdict = verify_witness(net, witness);
  if (!verdict.valid || verdict.transitions_used != s.lift(all, net.size())) {
    throw ConstructionFailure("witness synthesis produced an invalid cycle (" + verdict.reason +
                              "); psi0 = " + describe(cert.psi) +
                              ", psi+ = " + describe(parikh(markable.forward_witness)) +
                              ", psi- = " + describe(parikh(markable.backward_witness)));
  }
  return witness;
}

}  // namespace detail

/// mu(T') = M(T') & U(T') for the subnet T' given by `active`.  Only the
/// members of M(T') need a U certificate.
inline TransitionSet mu(const PetriNet& net, const TransitionSet& active) {
  return detail::mu_round(net, active).record.next;
}

/// A zero-to-zero cycle using exactly the transitions of `fixpoint`, which must
/// satisfy mu(fixpoint) = fixpoint and be nonempty.
inline PowerWord synthesize_witness(const PetriNet& net, const TransitionSet& fixpoint) {
  if (fixpoint.empty()) throw std::invalid_argument("synthesize_witness: empty transition set");
  const Subnet s = restrict(net, fixpoint);
  return detail::synthesize_checked(net, s, mutually_fireable_set(s.net), ultimately_cyclic(s.net));
}

struct LambdaOptions {
  bool synthesize_witness = true;
  /// Certify all of U(T) for the input net instead of only U(T) & M(T).
  bool certify_input = false;
};

/// Iterates mu from the full net down to its greatest fixpoint, which is the
/// set of transitions occurring on zero-to-zero cycles.
inline AnalysisReport lambda(const PetriNet& net, const LambdaOptions& options = {}) {
  AnalysisReport report;
  report.dimension = net.dimension();
  report.transition_count = net.size();

  TransitionSet active = TransitionSet::full(net.size());
  report.rounds.push_back(active);
  detail::MuRound last;
  std::optional<ParikhVector> known;
  for (;;) {
    const bool first = report.round_details.empty();
    last = detail::mu_round(net, active, first && options.certify_input, known ? &*known : nullptr);
    known = detail::lift(last.certificate, last.subnet, net.size()).psi;
    if (first) {
      report.input_markable = last.markable;
      if (options.certify_input) report.input_u = last.certificate;
    }
    report.round_details.push_back(last.record);
    if (last.record.next == active) break;
    active = last.record.next;
    report.rounds.push_back(active);
  }

  report.lambda_set = active;
  report.structurally_cyclic = !active.empty();
  report.markable = detail::lift(last.markable, last.subnet, net.size());
  report.u_certificate = detail::lift(last.certificate, last.subnet, net.size());
  if (report.structurally_cyclic && options.synthesize_witness) {
    report.witness = detail::synthesize_checked(net, last.subnet, last.markable, last.certificate);
  }
  return report;
}

inline bool is_structurally_cyclic(const PetriNet& net) {
  return lambda(net, LambdaOptions{.synthesize_witness = false}).structurally_cyclic;
}

}  // namespace scyc
