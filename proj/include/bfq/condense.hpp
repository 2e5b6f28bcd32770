#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfq/algebraic.hpp"
#include "bfq/combinatorial.hpp"
#include "bfq/core.hpp"
#include "bfq/detail/parallel.hpp"
#include "bfq/dt.hpp"
#include "bfq/lp.hpp"
#include "bfq/rational.hpp"
#include "bfq/zoo.hpp"

namespace bfq {

enum class Measure { S, Bs, Fbs, C, UcMin, Uc1, Uc, D, Deg, Adeg, Lambda };

inline const char* measure_name(Measure m) {
  switch (m) {
    case Measure::S: return "s";
    case Measure::Bs: return "bs";
    case Measure::Fbs: return "fbs";
    case Measure::C: return "C";
    case Measure::UcMin: return "UCmin";
    case Measure::Uc1: return "UC1";
    case Measure::Uc: return "UC";
    case Measure::D: return "D";
    case Measure::Deg: return "deg";
    case Measure::Adeg: return "adeg";
    case Measure::Lambda: return "lambda";
  }
  return "?";
}

inline std::optional<Measure> parse_measure(const std::string& name) {
  for (Measure m : {Measure::S, Measure::Bs, Measure::Fbs, Measure::C,
                    Measure::UcMin, Measure::Uc1, Measure::Uc, Measure::D,
                    Measure::Deg, Measure::Adeg, Measure::Lambda})
    if (name == measure_name(m)) return m;
  if (name == "C0" || name == "C1" || name == "s0" || name == "s1" ||
      name == "bs0" || name == "bs1" || name == "UC0")
    return std::nullopt;  // sided variants handled by the CLI directly
  return std::nullopt;
}

/// Per-measure arity caps: brute-force loops stay tractable below these.
inline unsigned measure_arity_cap(Measure m) {
  switch (m) {
    case Measure::UcMin:
    case Measure::Uc1:
    case Measure::Uc: return 6;
    case Measure::Adeg: return 8;
    case Measure::D: return 12;
    case Measure::Lambda: return 14;
    default: return default_table_cap;
  }
}

/// Either an exact rational or (for the eigensolver-backed measure) a real.
struct MeasureValue {
  Rational exact;
  double real = 0.0;
  bool is_real = false;

  static MeasureValue from_int(unsigned long v) {
    return {Rational(long(v)), 0.0, false};
  }
  static MeasureValue from_rational(Rational r) { return {std::move(r), 0.0, false}; }
  static MeasureValue from_real(double v) { return {Rational(0), v, true}; }

  double as_double() const { return is_real ? real : exact.to_double(); }
  std::string to_string() const {
    return is_real ? std::to_string(real) : exact.to_string();
  }
};

inline MeasureValue measure_value(const BoolFun& f, Measure m,
                                  unsigned threads = 1) {
  if (f.arity() > measure_arity_cap(m))
    throw std::invalid_argument(std::string("measure ") + measure_name(m) +
                                ": arity " + std::to_string(f.arity()) +
                                " over cap " +
                                std::to_string(measure_arity_cap(m)));
  switch (m) {
    case Measure::S: return MeasureValue::from_int(sensitivity(f, {}, threads).value);
    case Measure::Bs:
      return MeasureValue::from_int(block_sensitivity(f, {}, threads).value);
    case Measure::Fbs: return MeasureValue::from_rational(fbs(f, {}, threads).value);
    case Measure::C:
      return MeasureValue::from_int(certificate_complexity(f, {}, threads).value);
    case Measure::UcMin: return MeasureValue::from_int(uc_min(f));
    case Measure::Uc1: return MeasureValue::from_int(uc_value(f, true).value);
    case Measure::Uc: return MeasureValue::from_int(uc(f));
    case Measure::D: return MeasureValue::from_int(dt_depth(f).depth);
    case Measure::Deg: return MeasureValue::from_int(degree(f));
    case Measure::Adeg: return MeasureValue::from_int(approx_degree(f));
    case Measure::Lambda: return MeasureValue::from_real(spectral_sensitivity(f));
  }
  throw std::logic_error("unreachable");
}

struct CondensationResult {
  Measure measure;
  MeasureValue original;
  Restriction rho;
  MeasureValue restricted;
  unsigned star_count = 0;
  std::string construction;
};

namespace detail {

inline unsigned ceil_sqrt(const Rational& r) {
  if (r.sign() <= 0) return 0;
  auto u = static_cast<unsigned long>(std::ceil(std::sqrt(r.to_double())));
  while (u > 0 && Rational(long((u - 1) * (u - 1))) >= r) --u;
  while (Rational(long(u * u)) < r) ++u;
  return static_cast<unsigned>(u);
}

inline CondensationResult finish(const BoolFun& f, Measure m, Restriction rho,
                                 const MeasureValue& original,
                                 const char* construction) {
  BoolFun g = restrict(f, rho);
  CondensationResult result{m, original, rho, measure_value(g, m),
                            rho.star_count(), construction};
  return result;
}

}  // namespace detail

/// Stars k sensitive variables (lowest indices) of a maximum-sensitivity
/// input and fixes the rest to that input; s(f|rho) = k exactly.
inline CondensationResult condense_by_sensitivity(const BoolFun& f, unsigned k,
                                                  Measure report = Measure::S) {
  auto s = sensitivity(f);
  if (k > s.value)
    throw std::invalid_argument("condense_by_sensitivity: k exceeds s(f)");
  uint64_t a = s.witness;
  std::vector<Trit> assign(f.arity());
  unsigned left = k;
  for (unsigned i = 0; i < f.arity(); ++i) {
    bool bit = (a >> i) & 1;
    if (left > 0 && f.value(a) != f.value(a ^ (uint64_t{1} << i))) {
      assign[i] = Trit::Star;
      --left;
    } else {
      assign[i] = bit ? Trit::One : Trit::Zero;
    }
  }
  return detail::finish(f, report, Restriction(std::move(assign)),
                        measure_value(f, report), "sensitivity");
}

/// Stars the variables of a top monomial so that deg(f|rho) = k exactly:
/// either a degree-k monomial directly, or k variables of the next monomial
/// above a degree gap with the remainder forced to 1.
inline CondensationResult condense_by_degree(const BoolFun& f, unsigned k,
                                             Measure report = Measure::Deg) {
  MultilinearPoly poly = mobius(f);
  unsigned deg = poly.degree();
  if (k > deg) throw std::invalid_argument("condense_by_degree: k exceeds deg(f)");
  MeasureValue original = measure_value(f, report);

  std::vector<Trit> assign(f.arity(), Trit::Zero);
  auto monomials_k = poly.monomials_of_degree(k);
  if (!monomials_k.empty() || k == 0) {
    uint64_t mono = monomials_k.empty() ? 0 : monomials_k.front();
    for (unsigned i = 0; i < f.arity(); ++i)
      if ((mono >> i) & 1) assign[i] = Trit::Star;
  } else {
    unsigned d = k + 1;
    while (poly.monomials_of_degree(d).empty()) ++d;
    uint64_t mono = poly.monomials_of_degree(d).front();
    unsigned stars_left = k;
    for (unsigned i = 0; i < f.arity(); ++i) {
      if (!((mono >> i) & 1)) continue;
      if (stars_left > 0) {
        assign[i] = Trit::Star;
        --stars_left;
      } else {
        assign[i] = Trit::One;
      }
    }
  }
  return detail::finish(f, report, Restriction(std::move(assign)), original,
                        "degree");
}

/// Stars the union of t disjoint minimal sensitive blocks at a maximum
/// block-sensitivity input and fixes the rest; the blocks survive, so
/// bs(f|rho) >= t with at most t * s(f) stars.
inline CondensationResult condense_by_blocks(const BoolFun& f, unsigned t,
                                             Measure report = Measure::Bs) {
  auto bs = block_sensitivity(f);
  if (t > bs.value)
    throw std::invalid_argument("condense_by_blocks: t exceeds bs(f)");
  auto [value, family] = block_sensitivity_at(f, bs.witness);
  uint64_t star_mask = 0;
  for (unsigned b = 0; b < t; ++b) star_mask |= family.blocks[b];
  std::vector<Trit> assign(f.arity());
  for (unsigned i = 0; i < f.arity(); ++i) {
    if ((star_mask >> i) & 1)
      assign[i] = Trit::Star;
    else
      assign[i] = ((bs.witness >> i) & 1) ? Trit::One : Trit::Zero;
  }
  return detail::finish(f, report, Restriction(std::move(assign)),
                        measure_value(f, report), "blocks");
}

/// Lossy condensation: a restriction with O(M(f)) stars whose restricted
/// M-value is at least ceil(sqrt(M(f))) (for the eigensolver- and
/// LP-approximation measures the bound is reported through the exact
/// sensitivity/degree statements).
inline CondensationResult condense_positive(const BoolFun& f, Measure m) {
  if (m == Measure::S || m == Measure::Deg)
    throw std::invalid_argument(
        "condense_positive: s and deg condense losslessly; use the direct builders");
  MeasureValue original = measure_value(f, m);
  if (f.is_constant() || original.as_double() == 0.0)
    return condense_by_sensitivity(f, 0, m);

  if (m == Measure::Lambda) {
    unsigned k = static_cast<unsigned>(std::ceil(original.real - 1e-9));
    return condense_by_sensitivity(f, std::min(k, sensitivity(f).value), m);
  }
  if (m == Measure::Adeg) {
    unsigned k = static_cast<unsigned>(original.exact.to_double());
    return condense_by_degree(f, k, m);
  }

  unsigned u = detail::ceil_sqrt(original.exact);
  if (sensitivity(f).value >= u)
    return condense_by_sensitivity(f, sensitivity(f).value, m);
  bool deg_family = m == Measure::UcMin || m == Measure::Uc1 ||
                    m == Measure::Uc || m == Measure::D;
  if (deg_family && degree(f) >= u) return condense_by_degree(f, degree(f), m);
  return condense_by_blocks(f, u, m);
}

// --- restriction search ------------------------------------------------------

enum class SearchMode { Exhaustive, Sampled };

struct SearchResult {
  MeasureValue best;
  Restriction rho;
  uint64_t examined = 0;
};

namespace detail {

inline Restriction restriction_from_combination(unsigned n,
                                                const std::vector<unsigned>& stars,
                                                uint64_t fixing) {
  std::vector<Trit> assign(n);
  size_t next_star = 0;
  unsigned fixed_pos = 0;
  for (unsigned i = 0; i < n; ++i) {
    if (next_star < stars.size() && stars[next_star] == i) {
      assign[i] = Trit::Star;
      ++next_star;
    } else {
      assign[i] = ((fixing >> fixed_pos) & 1) ? Trit::One : Trit::Zero;
      ++fixed_pos;
    }
  }
  return Restriction(std::move(assign));
}

inline uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// stars for the idx-th combination in lexicographic order
inline std::vector<unsigned> combination_at(unsigned n, unsigned k, uint64_t idx) {
  std::vector<unsigned> out;
  unsigned from = 0;
  for (unsigned slot = 0; slot < k; ++slot) {
    for (unsigned v = from;; ++v) {
      uint64_t below = binomial(n - v - 1, k - slot - 1);
      if (idx < below) {
        out.push_back(v);
        from = v + 1;
        break;
      }
      idx -= below;
    }
  }
  return out;
}

}  // namespace detail

/// The index-th sampled restriction of the seeded stream; sampling is keyed
/// by (seed, index) alone so shards draw identical restrictions.
inline Restriction sampled_restriction(unsigned n, unsigned star_budget,
                                       uint64_t seed, uint64_t index) {
  std::mt19937_64 rng(seed + index * 0x9e3779b97f4a7c15ULL);
  std::vector<unsigned> pos(n);
  std::iota(pos.begin(), pos.end(), 0u);
  std::shuffle(pos.begin(), pos.end(), rng);
  pos.resize(star_budget);
  std::sort(pos.begin(), pos.end());
  return detail::restriction_from_combination(n, pos, rng());
}

/// Maximizes M(f|rho) over restrictions with exactly star_budget stars,
/// either exhaustively or over seeded samples. Results are deterministic and
/// thread-count independent (shards merge in index order, strict improvement
/// only).
inline SearchResult search_restrictions(const BoolFun& f, Measure m,
                                        unsigned star_budget, SearchMode mode,
                                        uint64_t samples = 0, uint64_t seed = 0,
                                        unsigned threads = 1,
                                        uint64_t exhaustive_budget = 20'000'000) {
  unsigned n = f.arity();
  if (star_budget > n)
    throw std::invalid_argument("search_restrictions: star budget exceeds arity");

  struct Local {
    bool found = false;
    MeasureValue best;
    Restriction rho;
  };
  auto better = [](const MeasureValue& a, const MeasureValue& b) {
    return a.as_double() > b.as_double();
  };

  uint64_t total;
  if (mode == SearchMode::Exhaustive) {
    uint64_t combos = detail::binomial(n, star_budget);
    uint64_t fixings = uint64_t{1} << (n - star_budget);
    if (combos > exhaustive_budget / fixings)
      throw budget_error("exhaustive restriction search over budget");
    total = combos * fixings;
  } else {
    if (samples == 0)
      throw std::invalid_argument("sampled search needs samples > 0");
    total = samples;
  }

  auto results = detail::sharded<Local>(
      total, threads, [&](unsigned, uint64_t begin, uint64_t end) {
        Local local;
        for (uint64_t it = begin; it < end; ++it) {
          Restriction rho;
          if (mode == SearchMode::Exhaustive) {
            uint64_t fixings = uint64_t{1} << (n - star_budget);
            auto stars = detail::combination_at(n, star_budget,
                                                it / fixings);
            rho = detail::restriction_from_combination(n, stars, it % fixings);
          } else {
            rho = sampled_restriction(n, star_budget, seed, it);
          }
          MeasureValue v = measure_value(restrict(f, rho), m);
          if (!local.found || better(v, local.best)) {
            local.found = true;
            local.best = v;
            local.rho = rho;
          }
        }
        return local;
      });
  SearchResult out{MeasureValue::from_int(0), Restriction::all_star(0), total};
  bool found = false;
  for (auto& r : results) {
    if (!r.found) continue;
    if (!found || better(r.best, out.best)) {
      found = true;
      out.best = r.best;
      out.rho = r.rho;
    }
  }
  if (!found) {
    out.best = measure_value(restrict(f, Restriction::all_star(0)), m);
  }
  return out;
}

// --- laws checker -------------------------------------------------------------

struct LawsReport {
  std::vector<std::string> violations;
  std::vector<std::string> soft_notes;

  bool ok() const { return violations.empty(); }
};

/// Evaluates the measure-relation chain exactly (eigensolver comparisons get
/// a small slack) and reports violations. UC-family relations are included
/// only when requested; the fbs <= 2 UCmin - 1 bound is vacuous for constant
/// functions and is skipped there.
inline LawsReport laws_check(const BoolFun& f, bool include_uc = true,
                             double lambda_slack = 1e-6) {
  if (include_uc && f.arity() > 4)
    throw std::invalid_argument("laws_check with UC: arity cap is 4");
  if (f.arity() > 5) throw std::invalid_argument("laws_check: arity cap is 5");

  LawsReport report;
  auto violated = [&](const std::string& what) {
    report.violations.push_back(what);
  };

  unsigned s = sensitivity(f).value;
  unsigned bs = block_sensitivity(f).value;
  Rational fbs_v = fbs(f).value;
  unsigned c = certificate_complexity(f).value;
  unsigned d = dt_depth(f).depth;
  unsigned deg_v = degree(f);
  unsigned adeg_v = approx_degree(f);
  double lambda = spectral_sensitivity(f);

  if (!(s <= bs)) violated("s <= bs");
  if (!(Rational(long(bs)) <= fbs_v)) violated("bs <= fbs");
  if (!(fbs_v <= Rational(long(c)))) violated("fbs <= C");
  if (!(c <= bs * s)) violated("C <= bs*s");
  if (!(d <= deg_v * bs)) violated("D <= deg*bs");
  if (!(bs <= d)) violated("bs <= D");
  if (!(deg_v <= d)) violated("deg <= D");
  if (!(adeg_v <= deg_v)) violated("adeg <= deg");
  if (!(lambda <= double(s) + lambda_slack)) violated("lambda <= s");
  if (!(double(s) <= lambda * lambda + lambda_slack)) violated("s <= lambda^2");
  if (!(double(deg_v) <= lambda * lambda + lambda_slack))
    violated("deg <= lambda^2");

  if (include_uc) {
    unsigned uc0 = uc_value(f, false).value;
    unsigned uc1 = uc_value(f, true).value;
    unsigned ucv = std::max(uc0, uc1), ucm = std::min(uc0, uc1);
    if (!(deg_v <= ucm)) violated("deg <= UCmin");
    if (!(ucm <= uc1)) violated("UCmin <= UC1");
    if (!(uc1 <= ucv)) violated("UC1 <= UC");
    if (!(ucv <= d)) violated("UC <= D");
    if (!(c <= ucv)) violated("C <= UC");
    if (!f.is_constant() && !(fbs_v <= Rational(2 * long(ucm) - 1)))
      violated("fbs <= 2*UCmin - 1");
  }

  // The bs = O(adeg^2) constant is not pinned anywhere usable; reported only.
  if (!(bs <= 3 * adeg_v * adeg_v))
    report.soft_notes.push_back("bs > 3*adeg^2 (soft heuristic constant)");
  return report;
}

}  // namespace bfq
