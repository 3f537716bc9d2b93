#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <stdexcept>
#include <vector>

#include "scyc/index_set.hpp"
#include "scyc/lp.hpp"
#include "scyc/net.hpp"

namespace scyc {

/// The ultimately cyclic transitions U(T) with one natural-valued T-invariant
/// psi: zero displacement, psi >= 1 on u_set and psi = 0 elsewhere.
struct CyclicCertificate {
  TransitionSet u_set;
  ParikhVector psi;

  friend bool operator==(const CyclicCertificate&, const CyclicCertificate&) = default;
};

struct CyclicStats {
  std::size_t lp_solves = 0;
  std::size_t sign_eliminated = 0;
  std::size_t farkas_eliminated = 0;
  std::size_t pivots = 0;
};

/// Certifies membership in U(T) for every transition of `targets` that
/// belongs to it.  A transition t is in U(T) iff some psi >= 0 with
/// Delta(psi) = 0 has psi(t) >= 1 (the system is homogeneous, so psi(t) > 0 can
/// be scaled up to 1).
///
/// Rows whose remaining entries all share one sign exclude their nonzero
/// columns.  Then one LP asks for psi >= 1 on every undecided target at once,
/// over all columns not yet excluded.  A feasible solution puts its whole
/// support into U(T); an infeasible one yields a Farkas vector f with
/// f^T Delta >= 0 positive on some undecided target, and every column where
/// f^T Delta is positive is excluded.  Each LP either finishes or excludes a
/// column.
///
/// The returned u_set is the support of psi: it lies inside U(T) and contains
/// U(T) & targets.
///
/// `known`, when given, is a T-invariant of `net` already in hand; its support
/// is certified without an LP.
inline CyclicCertificate certify_cyclic(const PetriNet& net, const TransitionSet& targets,
                                        CyclicStats* stats = nullptr, const ParikhVector* known = nullptr) {
  const std::size_t n = net.size();
  if (targets.universe() != n) throw std::invalid_argument("certify_cyclic: targets are not over the net's transitions");
  const std::size_t d = net.dimension();
  const IntegerMatrix delta = displacement_matrix(net);

  TransitionSet in_u(n);
  TransitionSet candidates = TransitionSet::full(n);
  ParikhVector psi;

  for (std::size_t j = 0; j < n; ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < d && zero; ++i) zero = sgn(delta[i][j]) == 0;
    if (zero) {
      in_u.insert(j);
      psi.add(j, 1);
    }
  }

  if (known != nullptr) {
    for (const auto& [j, count] : known->counts()) {
      if (j >= n || sgn(count) < 0) throw std::invalid_argument("certify_cyclic: known invariant is not over the net");
    }
    if (!displacement_of_parikh(net, *known).is_zero()) throw std::invalid_argument("certify_cyclic: known vector is not a T-invariant");
    for (const auto& [j, count] : known->counts()) {
      if (sgn(count) > 0) in_u.insert(j);
    }
    psi += *known;
  }

  auto exclude = [&](std::size_t j) {
    if (in_u.contains(j)) throw std::logic_error("certify_cyclic: excluding a certified transition");
    candidates.erase(j);
  };

  for (;;) {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < d; ++i) {
        bool pos = false;
        bool neg = false;
        for (auto j : candidates.elements()) {
          const int s = sgn(delta[i][j]);
          pos = pos || s > 0;
          neg = neg || s < 0;
        }
        if (pos == neg) continue;
        for (auto j : candidates.elements()) {
          if (sgn(delta[i][j]) != 0) {
            exclude(j);
            changed = true;
            if (stats != nullptr) ++stats->sign_eliminated;
          }
        }
      }
    }

    const TransitionSet undecided = (candidates - in_u) & targets;
    if (undecided.empty()) break;
    if (stats != nullptr) ++stats->lp_solves;

    const auto columns = candidates.elements();
    IntegerMatrix a(d, std::vector<BigInt>(columns.size()));
    std::vector<Rational> lb(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
      for (std::size_t i = 0; i < d; ++i) a[i][k] = delta[i][columns[k]];
      if (undecided.contains(columns[k])) lb[k] = 1;
    }
    std::size_t pivots = 0;
    auto result = lp_feasible(a, lb, &pivots);
    if (stats != nullptr) stats->pivots += pivots;

    if (auto* ok = std::get_if<LpFeasible>(&result)) {
      const auto scaled = clear_denominators(ok->solution);
      ParikhVector local;
      for (std::size_t k = 0; k < columns.size(); ++k) local.add(columns[k], scaled[k]);
      if (!displacement_of_parikh(net, local).is_zero()) {
        throw std::logic_error("certify_cyclic: LP solution is not a T-invariant");
      }
      for (const auto& [j, count] : local.counts()) in_u.insert(j);
      psi += local;
      continue;
    }

    const auto& f = std::get<LpInfeasible>(result).farkas;
    std::vector<std::size_t> cut;
    bool forced_cut = false;
    for (auto j : columns) {
      Rational g = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (sgn(delta[i][j]) != 0 && sgn(f[i]) != 0) g += f[i] * delta[i][j];
      }
      if (sgn(g) < 0) throw std::logic_error("certify_cyclic: invalid Farkas certificate");
      if (sgn(g) > 0) {
        cut.push_back(j);
        forced_cut = forced_cut || undecided.contains(j);
      }
    }
    if (!forced_cut) throw std::logic_error("certify_cyclic: Farkas certificate cuts no forced transition");
    for (auto j : cut) exclude(j);
    if (stats != nullptr) stats->farkas_eliminated += cut.size();
  }

  if (!psi.empty()) {
    BigInt g = 0;
    for (const auto& [j, count] : psi.counts()) g = gcd(g, count);
    ParikhVector reduced;
    for (const auto& [j, count] : psi.counts()) reduced.add(j, count / g);
    psi = std::move(reduced);
  }
  return CyclicCertificate{std::move(in_u), std::move(psi)};
}

/// U(T) with one natural-valued T-invariant positive exactly on it.
inline CyclicCertificate ultimately_cyclic(const PetriNet& net, CyclicStats* stats = nullptr) {
  return certify_cyclic(net, TransitionSet::full(net.size()), stats);
}

}  // namespace scyc
