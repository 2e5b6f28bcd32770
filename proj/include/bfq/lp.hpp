#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "bfq/combinatorial.hpp"
#include "bfq/core.hpp"
#include "bfq/rational.hpp"

namespace bfq {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpRelation { LessEq, GreaterEq, Equal };

struct LpRow {
  std::vector<Rational> coeffs;
  LpRelation rel = LpRelation::LessEq;
  Rational rhs;
};

/// A linear program over nonnegative variables with optional upper bounds.
struct LinearProgram {
  bool maximize = true;
  unsigned num_vars = 0;
  std::vector<Rational> objective;
  std::vector<std::optional<Rational>> upper_bounds;  // per variable, optional
  std::vector<LpRow> rows;

  void add_row(std::vector<Rational> coeffs, LpRelation rel, Rational rhs) {
    if (coeffs.size() != num_vars)
      throw std::invalid_argument("LP row width != variable count");
    rows.push_back({std::move(coeffs), rel, std::move(rhs)});
  }

  void dump(std::ostream& os) const {
    os << (maximize ? "max" : "min");
    for (unsigned j = 0; j < num_vars; ++j)
      os << ' ' << objective[j].to_string() << "*y" << j;
    os << '\n';
    for (const auto& row : rows) {
      for (unsigned j = 0; j < num_vars; ++j)
        os << row.coeffs[j].to_string() << "*y" << j << ' ';
      os << (row.rel == LpRelation::LessEq ? "<="
             : row.rel == LpRelation::GreaterEq ? ">=" : "=")
         << ' ' << row.rhs.to_string() << '\n';
    }
  }
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> assignment;
};

namespace detail {

// Two-phase primal simplex on the full tableau, exact rational arithmetic,
// Bland's rule throughout (entering: lowest eligible column; leaving: lowest
// basic variable among minimal ratios), so cycling cannot occur.
class SimplexTableau {
public:
  SimplexTableau(unsigned n, const std::vector<std::vector<Rational>>& a,
                 const std::vector<Rational>& b)
      : n_(n), m_(static_cast<unsigned>(a.size())) {
    num_cols_ = n_ + m_;  // originals + slacks; artificials appended later
    basis_.resize(m_);
    tab_.assign(m_, {});
    rhs_.resize(m_);
    for (unsigned i = 0; i < m_; ++i) {
      tab_[i].assign(num_cols_, Rational(0));
      bool flip = b[i].sign() < 0;
      for (unsigned j = 0; j < n_; ++j)
        tab_[i][j] = flip ? -a[i][j] : a[i][j];
      tab_[i][n_ + i] = flip ? Rational(-1) : Rational(1);
      rhs_[i] = flip ? -b[i] : b[i];
      basis_[i] = n_ + i;
      if (flip) flipped_.push_back(i);
    }
  }

  // Returns false if the constraints are infeasible.
  bool phase1() {
    if (flipped_.empty()) return true;
    unsigned first_art = num_cols_;
    num_cols_ += static_cast<unsigned>(flipped_.size());
    for (auto& row : tab_) row.resize(num_cols_, Rational(0));
    obj_.assign(num_cols_, Rational(0));
    obj_value_ = Rational(0);
    for (unsigned t = 0; t < flipped_.size(); ++t) {
      unsigned i = flipped_[t];
      tab_[i][first_art + t] = Rational(1);
      basis_[i] = first_art + t;
      // objective: max -sum(artificials); eliminate the basic column
      for (unsigned j = 0; j < num_cols_; ++j) obj_[j] += tab_[i][j];
      obj_value_ -= rhs_[i];
    }
    for (unsigned j = first_art; j < num_cols_; ++j) obj_[j] -= Rational(1);
    run();
    if (obj_value_.sign() != 0) return false;  // some artificial stuck > 0
    // Pivot any zero-valued artificial out of the basis.
    for (unsigned i = 0; i < m_; ++i) {
      if (basis_[i] < first_art) continue;
      unsigned j = 0;
      for (; j < first_art; ++j)
        if (tab_[i][j].sign() != 0) break;
      if (j < first_art) pivot(i, j);
      // else: redundant row; its artificial stays basic at zero, harmless
      // because artificial columns are barred from entering below.
    }
    bar_from_ = first_art;
    return true;
  }

  // Returns false if unbounded.
  bool phase2(const std::vector<Rational>& c) {
    obj_.assign(num_cols_, Rational(0));
    for (unsigned j = 0; j < n_; ++j) obj_[j] = c[j];
    obj_value_ = Rational(0);
    for (unsigned i = 0; i < m_; ++i) {
      if (obj_[basis_[i]].sign() == 0) continue;
      Rational coef = obj_[basis_[i]];
      for (unsigned j = 0; j < num_cols_; ++j) obj_[j] -= coef * tab_[i][j];
      obj_value_ += coef * rhs_[i];
    }
    return run();
  }

  Rational objective_value() const { return obj_value_; }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_, Rational(0));
    for (unsigned i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    return x;
  }

private:
  bool run() {
    for (;;) {
      unsigned enter = num_cols_;
      for (unsigned j = 0; j < num_cols_; ++j) {
        if (j >= bar_from_) break;
        if (obj_[j].sign() > 0) { enter = j; break; }
      }
      if (enter == num_cols_) return true;  // optimal
      unsigned leave = m_;
      Rational best_ratio;
      for (unsigned i = 0; i < m_; ++i) {
        if (tab_[i][enter].sign() <= 0) continue;
        Rational ratio = rhs_[i] / tab_[i][enter];
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(unsigned r, unsigned c) {
    Rational inv = Rational(1) / tab_[r][c];
    for (auto& v : tab_[r]) v *= inv;
    rhs_[r] *= inv;
    for (unsigned i = 0; i < m_; ++i) {
      if (i == r || tab_[i][c].sign() == 0) continue;
      Rational factor = tab_[i][c];
      for (unsigned j = 0; j < num_cols_; ++j)
        tab_[i][j] -= factor * tab_[r][j];
      rhs_[i] -= factor * rhs_[r];
    }
    if (!obj_.empty() && obj_[c].sign() != 0) {
      Rational factor = obj_[c];
      for (unsigned j = 0; j < num_cols_; ++j) obj_[j] -= factor * tab_[r][j];
      obj_value_ += factor * rhs_[r];
    }
    basis_[r] = c;
  }

  unsigned n_, m_, num_cols_ = 0;
  unsigned bar_from_ = ~0u;
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> rhs_, obj_;
  Rational obj_value_;
  std::vector<unsigned> basis_;
  std::vector<unsigned> flipped_;
};

}  // namespace detail

/// Exact LP solve. When status is Optimal the assignment is feasible and
/// attains the optimum exactly.
inline LpResult solve_exact(const LinearProgram& lp) {
  // Canonicalize to max c'x, Ax <= b, x >= 0.
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  auto push = [&](const std::vector<Rational>& coeffs, const Rational& rhs,
                  bool negate) {
    std::vector<Rational> row(lp.num_vars);
    for (unsigned j = 0; j < lp.num_vars; ++j)
      row[j] = negate ? -coeffs[j] : coeffs[j];
    a.push_back(std::move(row));
    b.push_back(negate ? -rhs : rhs);
  };
  for (const auto& row : lp.rows) {
    if (row.rel != LpRelation::GreaterEq) push(row.coeffs, row.rhs, false);
    if (row.rel != LpRelation::LessEq) push(row.coeffs, row.rhs, true);
  }
  for (unsigned j = 0; j < lp.num_vars; ++j) {
    if (!lp.upper_bounds.empty() && lp.upper_bounds[j]) {
      std::vector<Rational> row(lp.num_vars, Rational(0));
      row[j] = Rational(1);
      a.push_back(std::move(row));
      b.push_back(*lp.upper_bounds[j]);
    }
  }

  detail::SimplexTableau tab(lp.num_vars, a, b);
  LpResult result;
  if (!tab.phase1()) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  std::vector<Rational> c(lp.num_vars);
  for (unsigned j = 0; j < lp.num_vars; ++j)
    c[j] = lp.maximize ? lp.objective[j] : -lp.objective[j];
  if (!tab.phase2(c)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.objective = lp.maximize ? tab.objective_value() : -tab.objective_value();
  result.assignment = tab.solution();
  return result;
}

/// The block-packing LP over the given sensitive blocks: maximize the total
/// weight subject to unit load per variable.
inline LinearProgram fbs_program(unsigned arity,
                                 const std::vector<uint64_t>& blocks) {
  LinearProgram lp;
  lp.maximize = true;
  lp.num_vars = static_cast<unsigned>(blocks.size());
  lp.objective.assign(lp.num_vars, Rational(1));
  lp.upper_bounds.assign(lp.num_vars, Rational(1));
  for (unsigned i = 0; i < arity; ++i) {
    std::vector<Rational> row(lp.num_vars, Rational(0));
    bool nonzero = false;
    for (unsigned b = 0; b < blocks.size(); ++b)
      if ((blocks[b] >> i) & 1) {
        row[b] = Rational(1);
        nonzero = true;
      }
    if (nonzero) lp.add_row(std::move(row), LpRelation::LessEq, Rational(1));
  }
  return lp;
}

/// Fractional block sensitivity at x: exact optimum of the packing LP over
/// the minimal sensitive blocks (every sensitive block contains a minimal
/// one, and shifting weight onto subsets only relaxes the constraints).
inline Rational fbs_at(const BoolFun& f, uint64_t x) {
  auto blocks = minimal_sensitive_blocks(f, x);
  if (blocks.empty()) return Rational(0);
  auto result = solve_exact(fbs_program(f.arity(), blocks));
  if (result.status != LpStatus::Optimal)
    throw std::logic_error("packing LP must be feasible and bounded");
  return result.objective;
}

struct RationalMax {
  Rational value;
  uint64_t witness = 0;
  bool found = false;
};

/// Global fractional block sensitivity. Where the integral packing already
/// meets the covering bound (bs = C at the input) the LP optimum is pinched
/// and the solve is skipped.
inline RationalMax fbs(const BoolFun& f, std::optional<bool> side = {},
                       unsigned threads = 1) {
  unsigned cap = std::max(1u, sensitivity(f, {}, threads).value);
  auto masks = detail::masks_by_size(f.arity(), cap);
  auto shard_results = detail::sharded<RationalMax>(
      f.table_size(), threads, [&](unsigned, uint64_t begin, uint64_t end) {
        RationalMax local;
        std::vector<uint64_t> blocks;
        for (uint64_t x = begin; x < end; ++x) {
          if (side && f.value(x) != *side) continue;
          detail::minimal_blocks_into(f, x, masks, blocks);
          Rational v;
          if (blocks.empty()) {
            v = Rational(0);
          } else {
            unsigned packed = static_cast<unsigned>(detail::max_packing(blocks).size());
            unsigned covered = static_cast<unsigned>(
                std::popcount(detail::min_hitting_set(blocks)));
            if (packed == covered) {
              v = Rational(static_cast<long>(packed));
            } else {
              auto result = solve_exact(fbs_program(f.arity(), blocks));
              if (result.status != LpStatus::Optimal)
                throw std::logic_error("packing LP must be feasible and bounded");
              v = result.objective;
            }
          }
          if (!local.found || v > local.value) local = {v, x, true};
        }
        return local;
      });
  RationalMax out;
  for (const auto& r : shard_results) {
    if (!r.found) continue;
    if (!out.found || r.value > out.value) out = r;
  }
  return out;
}

/// Smallest degree d such that some polynomial over the monomials of degree
/// <= d stays within eps of f on every input. Feasibility is tested exactly;
/// the scan ascends so the last infeasible degree is certified along the way.
inline unsigned approx_degree(const BoolFun& f, const Rational& eps = Rational(1, 3)) {
  std::vector<uint64_t> monomials;
  for (unsigned d = 0; d <= f.arity(); ++d) {
    monomials.clear();
    for (uint64_t m = 0; m < f.table_size(); ++m)
      if (unsigned(std::popcount(m)) <= d) monomials.push_back(m);

    // Coefficients are free: split each into a difference of nonnegatives.
    LinearProgram lp;
    lp.maximize = true;
    lp.num_vars = static_cast<unsigned>(2 * monomials.size());
    lp.objective.assign(lp.num_vars, Rational(0));
    for (uint64_t x = 0; x < f.table_size(); ++x) {
      std::vector<Rational> row(lp.num_vars, Rational(0));
      for (unsigned j = 0; j < monomials.size(); ++j)
        if ((monomials[j] & x) == monomials[j]) {
          row[2 * j] = Rational(1);
          row[2 * j + 1] = Rational(-1);
        }
      Rational fx(f.value(x) ? 1 : 0);
      std::vector<Rational> row_neg = row;
      lp.add_row(std::move(row), LpRelation::LessEq, fx + eps);
      for (auto& c : row_neg) c = -c;
      lp.add_row(std::move(row_neg), LpRelation::LessEq, eps - fx);
    }
    if (solve_exact(lp).status == LpStatus::Optimal) return d;
  }
  throw std::logic_error("degree-n polynomial must approximate exactly");
}

}  // namespace bfq
