#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "bfq/cheatsheet.hpp"
#include "bfq/condense.hpp"
#include "bfq/zoo.hpp"

namespace bfq {

// Query-count regression bounds, frozen from the first implementation:
// plain algorithm <= c1 * t * log2(k) + c2 * k * log2(k) * log2(t),
// restricted algorithm <= c3 * k * log2(k)^2.
inline constexpr unsigned cs_query_c1 = 2;
inline constexpr unsigned cs_query_c2 = 2;
inline constexpr unsigned cs_restricted_c3 = 2;

inline size_t cs_query_bound(const CsParams& p) {
  return size_t{cs_query_c1} * p.t * p.and_label_bits +
         size_t{cs_query_c2} * p.k * p.and_label_bits * p.log_t;
}

inline size_t cs_restricted_query_bound(const CsParams& p) {
  return size_t{cs_restricted_c3} * p.k * p.and_label_bits * p.and_label_bits;
}

struct ReproduceCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ReproduceReport {
  std::string target;
  std::vector<ReproduceCheck> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline void expect_eq(ReproduceReport& report, const std::string& name,
                      const Rational& got, long want) {
  std::ostringstream os;
  os << "got " << got.to_string() << ", want " << want << "/1";
  report.checks.push_back({name, got == Rational(want), os.str()});
}

inline void expect_eq(ReproduceReport& report, const std::string& name,
                      unsigned got, unsigned want) {
  std::ostringstream os;
  os << "got " << got << ", want " << want;
  report.checks.push_back({name, got == want, os.str()});
}

}  // namespace detail

/// Modified Rubinstein at k = 4: bs = fbs = C = k^1.5 and the per-value
/// splits C_0 = bs_0 = k^1.5, C_1 = bs_1 = k.
inline ReproduceReport reproduce_thm_modrub(unsigned threads = 1) {
  ReproduceReport report{"thm-modrub", {}};
  BoolFun f = mod_rubinstein(4);
  detail::expect_eq(report, "bs", block_sensitivity(f, {}, threads).value, 8u);
  detail::expect_eq(report, "fbs", fbs(f, {}, threads).value, 8);
  detail::expect_eq(report, "C", certificate_complexity(f, {}, threads).value, 8u);
  detail::expect_eq(report, "C0", certificate_complexity(f, false, threads).value, 8u);
  detail::expect_eq(report, "C1", certificate_complexity(f, true, threads).value, 4u);
  detail::expect_eq(report, "bs0", block_sensitivity(f, false, threads).value, 8u);
  detail::expect_eq(report, "bs1", block_sensitivity(f, true, threads).value, 4u);
  return report;
}

/// Tribes at k = 4: C_0 = k, C_1 = sqrt(k), D = k^1.5.
inline ReproduceReport reproduce_prop_tribes(unsigned threads = 1) {
  ReproduceReport report{"prop-tribes", {}};
  BoolFun f = tribes(4);
  detail::expect_eq(report, "C0", certificate_complexity(f, false, threads).value, 4u);
  detail::expect_eq(report, "C1", certificate_complexity(f, true, threads).value, 2u);
  detail::expect_eq(report, "D", dt_depth(f).depth, 8u);
  return report;
}

/// Adversary harness: the plain algorithm must issue at least t queries, the
/// zero completion never disappears, and both completions survive at least
/// the first t - 1 answers.
inline ReproduceReport reproduce_lemma_cs_lb(unsigned k = 4, unsigned t = 8) {
  ReproduceReport report{"lemma-cs-lb", {}};
  CsParams p = CsParams::make(k, t);
  CsAdversary adversary(p);
  QueryOracle oracle = adversary.make_oracle();
  cs_algorithm(p, oracle);
  const QueryTranscript& transcript = oracle.transcript();

  std::ostringstream queries_detail;
  queries_detail << "issued " << transcript.count() << ", need >= " << t;
  report.checks.push_back(
      {"queries >= t", transcript.count() >= t, queries_detail.str()});

  bool zero_always = true, consistent_always = true;
  size_t commit_step = transcript.count() + 1;
  for (size_t q = 1; q <= transcript.count(); ++q) {
    RevealedState state =
        RevealedState::from_transcript(p.total_vars, transcript, q);
    auto c0 = cs_completion(p, state, false);
    auto c1 = cs_completion(p, state, true);
    if (!c0 || !state.consistent_with(*c0) || cs_evaluate(p, *c0))
      zero_always = false;
    if (c1 && (!state.consistent_with(*c1) || !cs_evaluate(p, *c1)))
      consistent_always = false;
    if (!c1 && commit_step > transcript.count()) commit_step = q;
  }
  report.checks.push_back({"0-completion exists after every answer",
                           zero_always && consistent_always, ""});
  std::ostringstream commit_detail;
  commit_detail << "value committed after " << commit_step
                << " answers, need >= " << t;
  report.checks.push_back(
      {"both completions survive t-1 answers", commit_step >= t,
       commit_detail.str()});
  return report;
}

/// Plain algorithm vs direct evaluation on seeded structured inputs, with
/// the frozen query-count regression bound.
inline ReproduceReport reproduce_lemma_cs_ub(unsigned k = 4, unsigned t = 8,
                                             unsigned inputs = 500,
                                             uint64_t seed = 2024) {
  ReproduceReport report{"lemma-cs-ub", {}};
  CsParams p = CsParams::make(k, t);
  std::mt19937_64 rng(seed);
  unsigned agree = 0;
  size_t worst = 0;
  for (unsigned i = 0; i < inputs; ++i) {
    BitVec x = random_structured_cs_input(p, rng, i % 2 == 1);
    QueryOracle oracle(x);
    auto run = cs_algorithm(p, oracle);
    if (run.output == cs_evaluate(p, x)) ++agree;
    worst = std::max(worst, run.queries);
  }
  std::ostringstream agreement;
  agreement << agree << "/" << inputs << " agree";
  report.checks.push_back({"output matches direct evaluation",
                           agree == inputs, agreement.str()});
  std::ostringstream bound;
  bound << "worst " << worst << " <= " << cs_query_bound(p);
  report.checks.push_back(
      {"query count within frozen bound", worst <= cs_query_bound(p),
       bound.str()});
  return report;
}

/// Restricted algorithm vs direct evaluation on seeded (restriction, input)
/// pairs at the full star budget, with its frozen query bound.
inline ReproduceReport reproduce_lemma_cs_restricted(unsigned k = 4,
                                                     unsigned t = 8,
                                                     unsigned pairs = 100,
                                                     uint64_t seed = 99) {
  ReproduceReport report{"lemma-cs-restricted", {}};
  CsParams p = CsParams::make(k, t);
  unsigned stars = 8 * p.tribes_vars * p.and_label_bits;
  std::mt19937_64 rng(seed);
  unsigned agree = 0;
  size_t worst = 0;
  for (unsigned i = 0; i < pairs; ++i) {
    auto inst = random_restricted_cs_instance(p, rng, stars, i % 2 == 1);
    QueryOracle oracle(inst.input);
    auto run = cs_restricted_algorithm(p, inst.rho, oracle);
    if (run.output == cs_evaluate(p, inst.input)) ++agree;
    worst = std::max(worst, run.queries);
  }
  std::ostringstream agreement;
  agreement << agree << "/" << pairs << " agree with " << stars << " stars";
  report.checks.push_back({"restricted output matches direct evaluation",
                           agree == pairs, agreement.str()});
  std::ostringstream bound;
  bound << "worst " << worst << " <= " << cs_restricted_query_bound(p);
  report.checks.push_back({"restricted query count within frozen bound",
                           worst <= cs_restricted_query_bound(p), bound.str()});
  return report;
}

/// Lossy condensation on seeded random functions: for bs, fbs and C the
/// restricted value reaches ceil(sqrt(M)) with the stated star budget.
inline ReproduceReport reproduce_thm_positive(unsigned functions = 200,
                                              unsigned arity = 8,
                                              uint64_t seed = 31415) {
  ReproduceReport report{"thm-positive", {}};
  unsigned value_failures = 0, star_failures = 0;
  for (unsigned i = 0; i < functions; ++i) {
    BoolFun f = random_function(arity, seed + i);
    unsigned s = sensitivity(f).value;
    for (Measure m : {Measure::Bs, Measure::Fbs, Measure::C}) {
      CondensationResult r = condense_positive(f, m);
      unsigned u = detail::ceil_sqrt(r.original.exact);
      if (r.restricted.exact < Rational(long(u))) ++value_failures;
      Rational star_cap = std::max(r.original.exact, Rational(long(u) * s));
      if (Rational(long(r.star_count)) > star_cap) ++star_failures;
    }
  }
  std::ostringstream v;
  v << value_failures << " failures over " << functions << " functions x 3 measures";
  report.checks.push_back(
      {"restricted value >= ceil(sqrt(M))", value_failures == 0, v.str()});
  std::ostringstream sdetail;
  sdetail << star_failures << " failures";
  report.checks.push_back(
      {"star count <= max(M, ceil(sqrt(M)) * s)", star_failures == 0,
       sdetail.str()});
  return report;
}

inline ReproduceReport run_reproduce(const std::string& target,
                                     unsigned threads = 1) {
  if (target == "thm-modrub") return reproduce_thm_modrub(threads);
  if (target == "prop-tribes") return reproduce_prop_tribes(threads);
  if (target == "lemma-cs-lb") return reproduce_lemma_cs_lb();
  if (target == "lemma-cs-ub") return reproduce_lemma_cs_ub();
  if (target == "lemma-cs-restricted") return reproduce_lemma_cs_restricted();
  if (target == "thm-positive") return reproduce_thm_positive();
  throw std::invalid_argument(
      "unknown reproduce target \"" + target +
      "\" (expected thm-modrub, prop-tribes, lemma-cs-lb, lemma-cs-ub, "
      "lemma-cs-restricted or thm-positive)");
}

}  // namespace bfq
