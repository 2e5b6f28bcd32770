// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Criteria with stated runtime targets are timed against
// them single-threaded.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bfq/bfq.hpp"
#include "bfq/reproduce.hpp"
#include "test_oracles.hpp"

using namespace bfq;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int criterion, const std::string& title, bool pass,
            const std::string& detail, double seconds, double limit = 0) {
  bool in_time = limit == 0 || seconds < limit;
  bool ok = pass && in_time;
  if (!ok) ++failures;
  std::ostringstream line;
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << " ("
       << title << "): " << detail;
  line.setf(std::ios::fixed);
  line.precision(1);
  line << " [" << seconds << "s";
  if (limit > 0) line << " / limit " << limit << "s";
  line << "]";
  std::cout << line.str() << std::endl;
}

std::string summarize(const ReproduceReport& r) {
  std::ostringstream os;
  bool first = true;
  for (auto& c : r.checks) {
    if (!first) os << "; ";
    first = false;
    os << c.name << (c.pass ? " ok" : " FAILED (" + c.detail + ")");
  }
  return os.str();
}

void criterion1() {
  Timer timer;
  ReproduceReport r = reproduce_thm_modrub();
  report(1, "modified Rubinstein k=4 exact measures", r.pass(), summarize(r),
         timer.seconds(), 300.0);
}

void criterion2() {
  Timer timer;
  ReproduceReport r = reproduce_prop_tribes();
  report(2, "Tribes k=4 exact measures", r.pass(), summarize(r),
         timer.seconds(), 10.0);
}

void criterion3() {
  Timer timer;
  uint64_t violations = 0, runs = 0;
  for (unsigned n = 2; n <= 5; ++n) {
    bool include_uc = n <= 4;
    for (unsigned i = 0; i < 1000; ++i) {
      BoolFun f = random_function(n, 1000 * n + i);
      violations += laws_check(f, include_uc).violations.size();
      ++runs;
    }
  }
  std::ostringstream detail;
  detail << violations << " violations over " << runs
         << " functions (n=2..4 with UC, n=5 without)";
  report(3, "measure-relation laws fuzz", violations == 0, detail.str(),
         timer.seconds(), 600.0);
}

void criterion4() {
  Timer timer;
  ReproduceReport r = reproduce_thm_positive(200, 8, 31415);
  report(4, "constructive lossy condensation for bs/fbs/C", r.pass(),
         summarize(r), timer.seconds());
}

void criterion5() {
  Timer timer;
  unsigned s_failures = 0, deg_failures = 0;
  for (unsigned i = 0; i < 200; ++i) {
    BoolFun f = random_function(8, 271828 + i);
    unsigned s = sensitivity(f).value;
    for (unsigned k = 0; k <= s; ++k) {
      auto r = condense_by_sensitivity(f, k);
      if (r.restricted.exact != Rational(long(k)) || r.star_count != k)
        ++s_failures;
    }
    unsigned d = degree(f);
    for (unsigned k = 0; k <= d; ++k) {
      auto r = condense_by_degree(f, k);
      if (r.restricted.exact != Rational(long(k)) || r.star_count != k)
        ++deg_failures;
    }
  }
  std::ostringstream detail;
  detail << "s(f|rho)=k failures: " << s_failures
         << ", deg(f|rho)=k failures: " << deg_failures << " over 200 functions";
  report(5, "stronger condensation hits every k exactly",
         s_failures == 0 && deg_failures == 0, detail.str(), timer.seconds());
}

void criterion6() {
  Timer timer;
  ReproduceReport ub = reproduce_lemma_cs_ub(4, 8, 500, 2024);
  ReproduceReport restricted = reproduce_lemma_cs_restricted(4, 8, 100, 99);
  report(6, "cheat-sheet algorithms match direct evaluation",
         ub.pass() && restricted.pass(),
         summarize(ub) + "; " + summarize(restricted), timer.seconds(), 120.0);
}

void criterion7() {
  Timer timer;
  ReproduceReport r = reproduce_lemma_cs_lb(4, 8);
  report(7, "cheat-sheet adversary lower bound", r.pass(), summarize(r),
         timer.seconds());
}

void criterion8() {
  Timer timer;
  bool ok = true;
  std::ostringstream detail;
  for (auto [k, t] : {std::pair{4u, 8u}, {4u, 16u}, {16u, 64u}}) {
    CsParams p = CsParams::make(k, t);
    std::mt19937_64 rng(1234);
    size_t worst = 0;
    for (int i = 0; i < 300; ++i) {
      BitVec x = random_structured_cs_input(p, rng, i % 2 == 1);
      QueryOracle oracle(x);
      worst = std::max(worst, cs_algorithm(p, oracle).queries);
    }
    size_t bound = cs_query_bound(p);
    if (worst > bound) ok = false;
    detail << "(k=" << k << ",t=" << t << "): " << worst << " <= " << bound
           << "; ";
  }
  detail << "c1=" << cs_query_c1 << ", c2=" << cs_query_c2;
  report(8, "cheat-sheet query scaling within frozen constants", ok,
         detail.str(), timer.seconds());
}

void criterion9() {
  Timer timer;
  double worst_err = 0;
  for (unsigned n = 2; n <= 10; ++n) {
    worst_err = std::max(
        worst_err, std::abs(spectral_sensitivity(or_fun(n)) - std::sqrt(n)));
    worst_err = std::max(
        worst_err, std::abs(spectral_sensitivity(xor_fun(n)) - double(n)));
  }
  std::ostringstream detail;
  detail << "max |lambda - closed form| = " << worst_err << " over n=2..10";
  report(9, "spectral sensitivity closed forms", worst_err < 1e-9,
         detail.str(), timer.seconds(), 60.0);
}

void criterion10() {
  Timer timer;
  uint64_t mismatches = 0;
  for (unsigned table = 0; table < 256; ++table) {
    BoolFun f = BoolFun::from_string(3, [&] {
      std::string s(8, '0');
      for (unsigned b = 0; b < 8; ++b)
        if ((table >> b) & 1) s[b] = '1';
      return s;
    }());
    for (uint64_t x = 0; x < 8; ++x)
      if (fbs_at(f, x) != oracles::fbs_by_vertex_enumeration(f, x))
        ++mismatches;
  }
  std::ostringstream detail;
  detail << mismatches << " mismatches over 256 functions x 8 inputs";
  report(10, "fbs equals the vertex-enumeration oracle", mismatches == 0,
         detail.str(), timer.seconds());
}

void criterion11() {
  Timer timer;
  BoolFun f = mod_rubinstein(4);
  const unsigned s_f = sensitivity(f).value;
  const unsigned bs_f = block_sensitivity(f).value;
  const unsigned c_f = certificate_complexity(f).value;
  const unsigned deg_f = degree(f);

  unsigned monotonicity_failures = 0;
  Rational best_c(0);
  for (uint64_t it = 0; it < 10000; ++it) {
    Restriction rho = sampled_restriction(16, 8, 7, it);
    BoolFun g = restrict(f, rho);
    unsigned c_g = certificate_complexity(g).value;
    if (sensitivity(g).value > s_f || block_sensitivity(g).value > bs_f ||
        c_g > c_f || degree(g) > deg_f)
      ++monotonicity_failures;
    if (Rational(long(c_g)) > best_c) best_c = Rational(long(c_g));
  }
  auto search =
      search_restrictions(f, Measure::C, 8, SearchMode::Sampled, 10000, 7);
  // archived regression value from the first recorded run of this search
  const Rational archived(7);
  bool ok = monotonicity_failures == 0 && search.best.exact == archived &&
            best_c == archived;
  std::ostringstream detail;
  detail << "best C(f|rho) = " << search.best.exact.to_string()
         << " (archived 7/1), monotonicity failures: " << monotonicity_failures
         << " over 10000 samples";
  report(11, "sampled restriction search on modified Rubinstein", ok,
         detail.str(), timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<void (*)()> criteria = {
      criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11};
  if (argc > 1) {
    // run a single criterion by number (1-based)
    int pick = std::atoi(argv[1]);
    if (pick < 1 || pick > int(criteria.size())) {
      std::cerr << "usage: acceptance [1.." << criteria.size() << "]\n";
      return 2;
    }
    criteria[pick - 1]();
  } else {
    for (auto& run : criteria) run();
  }
  if (failures == 0)
    std::cout << "all acceptance criteria passed" << std::endl;
  else
    std::cout << failures << " acceptance criteria failed" << std::endl;
  return failures;
}
