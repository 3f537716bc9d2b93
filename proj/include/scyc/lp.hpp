#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "scyc/net.hpp"
#include "scyc/numeric.hpp"

namespace scyc {

using IntegerMatrix = std::vector<std::vector<BigInt>>;

struct LpFeasible {
  std::vector<Rational> solution;
};

/// Farkas certificate f: f^T A >= 0 componentwise and f^T A lb > 0, which rules
/// out every x >= lb with A x = 0.
struct LpInfeasible {
  std::vector<Rational> farkas;
};

using LpResult = std::variant<LpFeasible, LpInfeasible>;

struct NegativeInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Revised phase-one simplex in integer arithmetic.  Starting from the
/// identity basis of artificial variables, every tableau row is an integer
/// combination of the original rows, so only the coefficients of that
/// combination (the row of the basis inverse) and the right-hand side are
/// stored, divided by their content; a structural entry is recovered as the
/// product of that row with a sparse column of A.  The basic column of a row
/// carries a positive coefficient c, so the basic value is rhs / c.  A pivot
/// recombines only the rows with a nonzero entry in the entering column.
///
/// Artificials of rows with a positive right-hand side are summed in the
/// objective; those of zero rows are pinned at zero and leave the basis as soon
/// as the entering column touches their row.  Pricing is Dantzig's until a long
/// run of degenerate pivots, then Bland's rule for good.  Artificial columns
/// never re-enter.
class IntegerPhaseOne {
 public:
  /// `a` is m x n with b >= 0 componentwise.
  IntegerPhaseOne(const IntegerMatrix& a, std::vector<BigInt> b, std::size_t columns) : m_(a.size()), n_(columns) {
    columns_.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(a[i][j]) != 0) columns_[j].emplace_back(i, a[i][j]);
      }
    }
    inverse_.assign(m_, std::vector<BigInt>(m_));
    rhs_ = std::move(b);
    basis_.resize(m_);
    in_objective_.assign(m_, false);
    weights_.assign(m_, BigInt(0));
    for (std::size_t i = 0; i < m_; ++i) {
      inverse_[i][i] = 1;
      basis_[i] = n_ + i;
      if (sgn(rhs_[i]) > 0) {
        in_objective_[i] = true;
        weights_[i] = -1;
        cost_rhs_ -= rhs_[i];
      }
    }
  }

  void solve() {
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::vector<bool> basic(n_, false);
    std::vector<BigInt> column(m_);
    BigInt rc;
    BigInt best_rc;
    for (;;) {
      std::size_t q = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (basic[j]) continue;
        reduced_cost(j, rc);
        if (sgn(rc) >= 0) continue;
        if (q == n_ || (!bland && rc < best_rc)) {
          q = j;
          best_rc = rc;
        }
        if (bland) break;
      }
      if (q == n_) return;

      for (std::size_t i = 0; i < m_; ++i) entry(i, q, column[i]);
      std::size_t p = m_;
      for (std::size_t i = 0; i < m_ && p == m_; ++i) {
        if (pinned(i) && sgn(column[i]) != 0) p = i;
      }
      if (p == m_) {
        BigInt lhs;
        BigInt rhs;
        for (std::size_t i = 0; i < m_; ++i) {
          if (sgn(column[i]) <= 0) continue;
          if (p == m_) {
            p = i;
            continue;
          }
          // rhs_i / T_iq < rhs_p / T_pq
          mpz_mul(lhs.get_mpz_t(), rhs_[i].get_mpz_t(), column[p].get_mpz_t());
          mpz_mul(rhs.get_mpz_t(), rhs_[p].get_mpz_t(), column[i].get_mpz_t());
          const int c = cmp(lhs, rhs);
          if (c < 0 || (c == 0 && basis_[i] < basis_[p])) p = i;
        }
        if (p == m_) throw std::logic_error("phase-one simplex reported an unbounded direction");
      }
      degenerate_run = sgn(rhs_[p]) == 0 ? degenerate_run + 1 : 0;
      if (degenerate_run > degenerate_limit) bland = true;
      if (basis_[p] < n_) basic[basis_[p]] = false;
      basic[q] = true;
      pivot(p, q, column, best_rc);
      ++pivots_;
    }
  }

  bool feasible() const { return sgn(cost_rhs_) == 0; }

  /// Values of the structural columns.
  std::vector<Rational> primal() const {
    std::vector<Rational> s(n_);
    BigInt c;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) continue;
      entry(i, basis_[i], c);
      s[basis_[i]] = Rational(rhs_[i], c);
      s[basis_[i]].canonicalize();
    }
    return s;
  }

  /// Phase-one dual y.  When the optimum is positive, y^T A <= 0 and
  /// y^T b > 0.
  std::vector<Rational> dual() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      y[i] = Rational(-weights_[i], scale_);
      y[i].canonicalize();
    }
    return y;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  bool pinned(std::size_t i) const { return basis_[i] >= n_ && !in_objective_[basis_[i] - n_]; }

  /// Tableau entry (i, j) for a structural column j.
  void entry(std::size_t i, std::size_t j, BigInt& out) const {
    out = 0;
    for (const auto& [k, v] : columns_[j]) {
      if (sgn(inverse_[i][k]) != 0) mpz_addmul(out.get_mpz_t(), inverse_[i][k].get_mpz_t(), v.get_mpz_t());
    }
  }

  /// Reduced cost of structural column j, times scale_.
  void reduced_cost(std::size_t j, BigInt& out) const {
    out = 0;
    for (const auto& [k, v] : columns_[j]) {
      if (sgn(weights_[k]) != 0) mpz_addmul(out.get_mpz_t(), weights_[k].get_mpz_t(), v.get_mpz_t());
    }
  }

  /// Integer-preserving update: every row stays scaled by the common
  /// denominator scale_, and the division by the previous pivot is exact.
  void pivot(std::size_t p, std::size_t q, std::vector<BigInt>& column, const BigInt& cost_q) {
    auto& prow = inverse_[p];
    if (sgn(column[p]) < 0) {
      // Only pinned rows, whose right-hand side is zero, pivot on a negative.
      for (auto& v : prow) v = -v;
      rhs_[p] = -rhs_[p];
      column[p] = -column[p];
    }
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < m_; ++k) {
      if (sgn(prow[k]) != 0) nz.push_back(k);
    }
    const BigInt& a = column[p];
    const bool unit = scale_ == 1;
    auto combine = [&](std::vector<BigInt>& row, BigInt& rhs, const BigInt& f) {
      // row <- (a * row - f * prow) / scale_
      for (auto& v : row) {
        if (sgn(v) != 0) mpz_mul(v.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t());
      }
      if (sgn(f) != 0) {
        for (auto k : nz) mpz_submul(row[k].get_mpz_t(), f.get_mpz_t(), prow[k].get_mpz_t());
      }
      mpz_mul(rhs.get_mpz_t(), rhs.get_mpz_t(), a.get_mpz_t());
      mpz_submul(rhs.get_mpz_t(), f.get_mpz_t(), rhs_[p].get_mpz_t());
      if (unit) return;
      for (auto& v : row) {
        if (sgn(v) != 0) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), scale_.get_mpz_t());
      }
      mpz_divexact(rhs.get_mpz_t(), rhs.get_mpz_t(), scale_.get_mpz_t());
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != p) combine(inverse_[i], rhs_[i], column[i]);
    }
    combine(weights_, cost_rhs_, cost_q);
    scale_ = a;
    basis_[p] = q;
  }

  static constexpr std::size_t degenerate_limit = 50;

  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<std::pair<std::size_t, BigInt>>> columns_;
  std::vector<std::vector<BigInt>> inverse_;
  std::vector<BigInt> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<bool> in_objective_;
  /// The objective row is weights^T [A | I] / scale_ plus the cost vector, so
  /// weights = -scale_ * y; cost_rhs_ is minus the objective value times scale_.
  std::vector<BigInt> weights_;
  BigInt cost_rhs_ = 0;
  BigInt scale_ = 1;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Decides whether some x >= max(lower_bounds, 0) satisfies A x = 0, in exact
/// arithmetic.  With x = lb + s the system becomes A s = -A lb, s >= 0; rows
/// are negated as needed to make the right-hand side nonnegative and all-zero
/// rows are dropped.
inline LpResult lp_feasible(const IntegerMatrix& a, std::span<const Rational> lower_bounds,
                            std::size_t* pivots = nullptr) {
  const std::size_t n = lower_bounds.size();
  for (const auto& row : a) {
    if (row.size() != n) throw DimensionMismatch("lp_feasible: row length differs from number of bounds");
  }
  std::vector<Rational> lb(n);
  BigInt den = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(lower_bounds[j]) > 0) {
      lb[j] = lower_bounds[j];
      den = lcm(den, lb[j].get_den());
    }
  }
  // A s = -A lb is scaled by den, which only rescales s.
  std::vector<BigInt> lb_int(n);
  for (std::size_t j = 0; j < n; ++j) lb_int[j] = lb[j].get_num() * (den / lb[j].get_den());

  IntegerMatrix rows;
  std::vector<BigInt> b;
  std::vector<std::size_t> origin;
  std::vector<int> flip;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::all_of(a[i].begin(), a[i].end(), [](const BigInt& v) { return sgn(v) == 0; })) continue;
    BigInt r = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(lb_int[j]) != 0) r -= a[i][j] * lb_int[j];
    }
    const int s = sgn(r) < 0 ? -1 : 1;
    std::vector<BigInt> row = a[i];
    if (s < 0) {
      for (auto& v : row) v = -v;
      r = -r;
    }
    rows.push_back(std::move(row));
    b.push_back(std::move(r));
    origin.push_back(i);
    flip.push_back(s);
  }

  detail::IntegerPhaseOne simplex(rows, std::move(b), n);
  simplex.solve();
  if (pivots != nullptr) *pivots = simplex.pivots();
  if (simplex.feasible()) {
    auto s = simplex.primal();
    for (std::size_t j = 0; j < n; ++j) s[j] = s[j] / den + lb[j];
    return LpFeasible{std::move(s)};
  }
  // y^T (F A) <= 0 and y^T F (-A lb) > 0, so f = -F y.
  const auto y = simplex.dual();
  std::vector<Rational> f(a.size());
  for (std::size_t k = 0; k < origin.size(); ++k) f[origin[k]] = flip[k] < 0 ? y[k] : Rational(-y[k]);
  return LpInfeasible{std::move(f)};
}

/// Scales nonnegative rationals by the lcm of their denominators.
inline std::vector<BigInt> clear_denominators(std::span<const Rational> x) {
  BigInt l = 1;
  for (const auto& v : x) {
    if (sgn(v) < 0) throw NegativeInput("clear_denominators: negative entry " + v.get_str());
    l = lcm(l, v.get_den());
  }
  std::vector<BigInt> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(v.get_num() * (l / v.get_den()));
  return out;
}

/// The displacement matrix of a net: one row per index, one column per
/// transition.
inline IntegerMatrix displacement_matrix(const PetriNet& net) {
  IntegerMatrix a(net.dimension(), std::vector<BigInt>(net.size()));
  for (std::size_t j = 0; j < net.size(); ++j) {
    for (std::size_t i = 0; i < net.dimension(); ++i) a[i][j] = net[j].post[i] - net[j].pre[i];
  }
  return a;
}

}  // namespace scyc
