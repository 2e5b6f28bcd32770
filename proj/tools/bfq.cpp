// bfq: compute query-complexity measures of Boolean functions, build the
// named function families, run condensation searches and cheat-sheet query
// simulations, and check the measure-relation laws on random functions.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfq/bfq.hpp"
#include "bfq/reproduce.hpp"

using nlohmann::json;
using namespace bfq;

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("BFQ_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

BoolFun load_function(const std::string& spec) {
  if (std::filesystem::exists(spec)) return read_table(spec);
  return parse_function_spec(spec);
}

std::string input_bits(uint64_t x, unsigned n) {
  std::string s(n, '0');
  for (unsigned i = 0; i < n; ++i)
    if ((x >> i) & 1) s[i] = '1';
  return s;
}

struct MeasureOutput {
  std::string name;
  json value;
  std::string witness;
};

MeasureOutput compute_measure(const BoolFun& f, const std::string& name,
                              unsigned threads) {
  auto max_witness = [&](const MaxWitness& w) {
    return w.found ? "x=" + input_bits(w.witness, f.arity()) : std::string{};
  };
  auto guard = [&](Measure m) {
    if (f.arity() > measure_arity_cap(m))
      throw std::invalid_argument(std::string("measure ") + measure_name(m) +
                                  ": arity " + std::to_string(f.arity()) +
                                  " over cap " +
                                  std::to_string(measure_arity_cap(m)));
  };
  if (name == "s" || name == "s0" || name == "s1") {
    std::optional<bool> side;
    if (name == "s0") side = false;
    if (name == "s1") side = true;
    auto r = sensitivity(f, side, threads);
    return {name, r.value, max_witness(r)};
  }
  if (name == "bs" || name == "bs0" || name == "bs1") {
    std::optional<bool> side;
    if (name == "bs0") side = false;
    if (name == "bs1") side = true;
    auto r = block_sensitivity(f, side, threads);
    return {name, r.value, max_witness(r)};
  }
  if (name == "C" || name == "C0" || name == "C1") {
    std::optional<bool> side;
    if (name == "C0") side = false;
    if (name == "C1") side = true;
    auto r = certificate_complexity(f, side, threads);
    return {name, r.value, max_witness(r)};
  }
  if (name == "fbs" || name == "fbs0" || name == "fbs1") {
    std::optional<bool> side;
    if (name == "fbs0") side = false;
    if (name == "fbs1") side = true;
    auto r = fbs(f, side, threads);
    std::string witness =
        r.found ? "x=" + input_bits(r.witness, f.arity()) : std::string{};
    return {name, r.value.to_string(), witness};
  }
  if (name == "deg") return {name, degree(f), {}};
  if (name == "adeg") {
    guard(Measure::Adeg);
    return {name, approx_degree(f), {}};
  }
  if (name == "lambda") {
    guard(Measure::Lambda);
    return {name, spectral_sensitivity(f), {}};
  }
  if (name == "D") {
    guard(Measure::D);
    auto r = dt_depth(f);
    std::string witness =
        r.first_query ? "first_query=x" + std::to_string(*r.first_query + 1)
                      : std::string{};
    return {name, r.depth, witness};
  }
  if (name == "UC" || name == "UC0" || name == "UC1" || name == "UCmin") {
    guard(Measure::Uc);
    if (name == "UC") return {name, uc(f), {}};
    if (name == "UCmin") return {name, uc_min(f), {}};
    auto r = uc_value(f, name == "UC1");
    return {name, r.value, std::to_string(r.cover.parts.size()) + " parts"};
  }
  throw std::invalid_argument("unknown measure \"" + name + "\"");
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

json restriction_json(const Restriction& rho) { return rho.to_string(); }

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array()) {
    size_t i = 0;
    for (auto& v : j) flatten(v, prefix + "[" + std::to_string(i++) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

// CSV rows "key,value" with dotted paths; JSON when requested.
void emit(const json& report, bool as_json) {
  if (as_json) {
    std::cout << report.dump(2) << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  for (auto& [key, value] : rows) std::cout << key << ',' << value << '\n';
}

int cmd_measure(const std::string& spec, const std::string& measures_csv,
                unsigned threads, bool as_json) {
  auto t0 = std::chrono::steady_clock::now();
  BoolFun f = load_function(spec);
  json measures = json::object();
  for (const std::string& name : split_csv(measures_csv)) {
    MeasureOutput out = compute_measure(f, name, threads);
    measures[out.name] = {{"value", out.value}, {"witness", out.witness}};
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  json report = {{"function", spec},
                 {"measures", measures},
                 {"config", {{"threads", threads}, {"arity", f.arity()}}},
                 {"timing_ms", ms}};
  emit(report, as_json);
  return 0;
}

int cmd_condense(const std::string& spec, const std::string& measure_name_in,
                 bool constructive, bool search, unsigned stars,
                 uint64_t samples, uint64_t seed, unsigned threads,
                 bool as_json) {
  auto t0 = std::chrono::steady_clock::now();
  BoolFun f = load_function(spec);
  auto measure = parse_measure(measure_name_in);
  if (!measure)
    throw std::invalid_argument("unknown measure \"" + measure_name_in + "\"");
  json report;
  if (constructive == search)
    throw std::invalid_argument("pick exactly one of --constructive/--search");
  if (constructive) {
    CondensationResult r = condense_positive(f, *measure);
    report = {{"function", spec},
              {"measure", measure_name(r.measure)},
              {"original", r.original.to_string()},
              {"restricted", r.restricted.to_string()},
              {"stars", r.star_count},
              {"construction", r.construction},
              {"rho", restriction_json(r.rho)}};
  } else {
    SearchMode mode = samples ? SearchMode::Sampled : SearchMode::Exhaustive;
    SearchResult r = search_restrictions(f, *measure, stars, mode, samples,
                                         seed, threads);
    report = {{"function", spec},
              {"measure", measure_name_in},
              {"best", r.best.to_string()},
              {"rho", restriction_json(r.rho)},
              {"examined", r.examined}};
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  report["config"] = {{"threads", threads},
                      {"stars", stars},
                      {"samples", samples},
                      {"seed", seed}};
  report["timing_ms"] = ms;
  emit(report, as_json);
  return 0;
}

int cmd_cheatsheet(unsigned k, unsigned t, const std::string& algorithm,
                   uint64_t seed, bool corrupt, unsigned stars_budget,
                   bool as_json) {
  auto t0 = std::chrono::steady_clock::now();
  CsParams p = CsParams::make(k, t);
  json report = {{"k", k}, {"t", t}, {"total_vars", p.total_vars},
                 {"algorithm", algorithm}};
  std::ostringstream transcript_text;
  bool ok = true;

  if (algorithm == "plain") {
    std::mt19937_64 rng(seed);
    BitVec x = random_structured_cs_input(p, rng, corrupt);
    bool expected = cs_evaluate(p, x);
    QueryOracle oracle(x);
    auto run = cs_algorithm(p, oracle);
    oracle.transcript().dump(transcript_text);
    ok = run.output == expected;
    report["output"] = run.output;
    report["direct_evaluation"] = expected;
    report["agree"] = ok;
    report["queries"] = run.queries;
    report["query_bound"] = cs_query_bound(p);
  } else if (algorithm == "restricted") {
    std::mt19937_64 rng(seed);
    unsigned stars = stars_budget ? stars_budget
                                  : 8 * p.tribes_vars * p.and_label_bits;
    auto inst = random_restricted_cs_instance(p, rng, stars, corrupt);
    bool expected = cs_evaluate(p, inst.input);
    QueryOracle oracle(inst.input);
    auto run = cs_restricted_algorithm(p, inst.rho, oracle);
    oracle.transcript().dump(transcript_text);
    ok = run.output == expected;
    report["output"] = run.output;
    report["direct_evaluation"] = expected;
    report["agree"] = ok;
    report["queries"] = run.queries;
    report["stars"] = stars;
    report["query_bound"] = cs_restricted_query_bound(p);
  } else if (algorithm == "adversary") {
    ReproduceReport r = reproduce_lemma_cs_lb(k, t);
    json checks = json::array();
    for (auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      ok = ok && c.pass;
    }
    report["checks"] = checks;
  } else {
    throw std::invalid_argument(
        "algorithm must be plain, restricted or adversary");
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  report["config"] = {{"seed", seed}, {"corrupt", corrupt}};
  report["timing_ms"] = ms;
  if (as_json) {
    report["transcript"] = transcript_text.str();
    std::cout << report.dump(2) << '\n';
  } else {
    emit(report, false);
    std::cout << transcript_text.str();
  }
  return ok ? 0 : 1;
}

int cmd_laws(unsigned n, unsigned count, uint64_t seed, bool as_json) {
  auto t0 = std::chrono::steady_clock::now();
  bool include_uc = n <= 4;
  uint64_t violations = 0;
  json examples = json::array();
  for (unsigned i = 0; i < count; ++i) {
    BoolFun f = random_function(n, seed + i);
    LawsReport r = laws_check(f, include_uc);
    if (!r.ok()) {
      violations += r.violations.size();
      json bad = {{"table", f.to_string()}, {"violated", r.violations}};
      examples.push_back(bad);
    }
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  json report = {{"n", n},
                 {"count", count},
                 {"seed", seed},
                 {"uc_included", include_uc},
                 {"violations", violations},
                 {"violating_functions", examples},
                 {"timing_ms", ms}};
  emit(report, as_json);
  return violations == 0 ? 0 : 1;
}

int cmd_reproduce(const std::string& target, unsigned threads, bool as_json) {
  ReproduceReport report = run_reproduce(target, threads);
  if (as_json) {
    json checks = json::array();
    for (auto& c : report.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    json out = {{"target", report.target},
                {"pass", report.pass()},
                {"checks", checks}};
    std::cout << out.dump(2) << '\n';
  } else {
    for (auto& c : report.checks)
      std::cout << (c.pass ? "PASS" : "FAIL") << ' ' << report.target << ": "
                << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")")
                << '\n';
    std::cout << (report.pass() ? "PASS" : "FAIL") << ' ' << report.target
              << '\n';
  }
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean function query-complexity toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  unsigned threads = default_threads();
  app.add_flag("--json", as_json, "emit JSON reports");
  app.add_option("--threads", threads, "worker threads for the global scans");

  auto* measure = app.add_subcommand("measure", "compute measures");
  std::string m_spec, m_list;
  measure->add_option("function", m_spec, "function spec or truth-table file")
      ->required();
  measure->add_option("--measures", m_list, "comma-separated measure names")
      ->required();

  auto* condense = app.add_subcommand("condense", "condensation restrictions");
  std::string c_spec, c_measure;
  bool c_constructive = false, c_search = false;
  unsigned c_stars = 0;
  uint64_t c_samples = 0, c_seed = 0;
  condense->add_option("function", c_spec)->required();
  condense->add_option("--measure", c_measure)->required();
  condense->add_flag("--constructive", c_constructive,
                     "build the positive-result restriction");
  condense->add_flag("--search", c_search, "maximize over restrictions");
  condense->add_option("--stars", c_stars, "star budget for --search");
  condense->add_option("--sample", c_samples,
                       "sample count (omit for exhaustive search)");
  condense->add_option("--seed", c_seed, "sampling seed");

  auto* cheatsheet = app.add_subcommand("cheatsheet", "cheat-sheet simulations");
  unsigned cs_k = 4, cs_t = 8, cs_stars = 0;
  std::string cs_algorithm = "plain";
  uint64_t cs_seed = 0;
  bool cs_corrupt = false;
  cheatsheet->add_option("--k", cs_k, "tribes parameter (perfect square)");
  cheatsheet->add_option("--t", cs_t, "cell count (power of two)");
  cheatsheet->add_option("--algorithm", cs_algorithm,
                         "plain | restricted | adversary");
  cheatsheet->add_option("--seed", cs_seed);
  cheatsheet->add_flag("--corrupt", cs_corrupt,
                       "corrupt the addressed cell of the generated input");
  cheatsheet->add_option("--stars-budget", cs_stars,
                         "star count for --algorithm restricted");

  auto* laws = app.add_subcommand("laws", "fuzz the measure-relation laws");
  unsigned l_n = 4, l_count = 100;
  uint64_t l_seed = 1;
  laws->add_option("--n", l_n, "arity (UC relations included when n <= 4)");
  laws->add_option("--count", l_count, "number of random functions");
  laws->add_option("--seed", l_seed);

  auto* reproduce = app.add_subcommand("reproduce", "golden desk-scale checks");
  std::string r_target;
  reproduce
      ->add_option("target", r_target,
                   "thm-modrub | prop-tribes | lemma-cs-lb | lemma-cs-ub | "
                   "lemma-cs-restricted | thm-positive")
      ->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*measure) return cmd_measure(m_spec, m_list, threads, as_json);
    if (*condense)
      return cmd_condense(c_spec, c_measure, c_constructive, c_search, c_stars,
                          c_samples, c_seed, threads, as_json);
    if (*cheatsheet)
      return cmd_cheatsheet(cs_k, cs_t, cs_algorithm, cs_seed, cs_corrupt,
                            cs_stars, as_json);
    if (*laws) return cmd_laws(l_n, l_count, l_seed, as_json);
    if (*reproduce) return cmd_reproduce(r_target, threads, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
