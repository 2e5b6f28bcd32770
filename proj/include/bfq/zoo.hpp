#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfq/combinatorial.hpp"
#include "bfq/core.hpp"

namespace bfq {

inline BoolFun const_fun(unsigned n, bool v, unsigned cap = default_table_cap) {
  return BoolFun(n, v, cap);
}

inline BoolFun or_fun(unsigned n, unsigned cap = default_table_cap) {
  BoolFun f(n, true, cap);
  f.set(0, false);
  return f;
}

inline BoolFun and_fun(unsigned n, unsigned cap = default_table_cap) {
  BoolFun f(n, false, cap);
  f.set(f.table_size() - 1, true);
  return f;
}

inline BoolFun xor_fun(unsigned n, unsigned cap = default_table_cap) {
  BoolFun f(n, false, cap);
  for (uint64_t x = 0; x < f.table_size(); ++x)
    f.set(x, std::popcount(x) & 1);
  return f;
}

/// Disjoint composition (f o g): copy i of g reads variables
/// [i*m, (i+1)*m) and feeds input bit i of f.
inline BoolFun compose(const BoolFun& outer, const BoolFun& inner,
                       unsigned cap = default_table_cap) {
  unsigned n = outer.arity(), m = inner.arity();
  BoolFun h(n * m, false, cap);
  uint64_t inner_mask = inner.table_size() - 1;
  for (uint64_t x = 0; x < h.table_size(); ++x) {
    uint64_t outer_input = 0;
    for (unsigned i = 0; i < n; ++i)
      outer_input |= uint64_t{inner.value((x >> (i * m)) & inner_mask)} << i;
    h.set(x, outer.value(outer_input));
  }
  return h;
}

namespace detail {

inline unsigned exact_sqrt(unsigned k, const char* what) {
  unsigned r = static_cast<unsigned>(std::lround(std::sqrt(double(k))));
  if (r * r != k)
    throw std::invalid_argument(std::string(what) + ": k must be a perfect square");
  return r;
}

/// g on k variables accepting exactly one run of run_len consecutive ones
/// (non-wrapping), all other bits zero.
inline BoolFun run_gadget(unsigned k, unsigned run_len,
                          unsigned cap = default_table_cap) {
  BoolFun g(k, false, cap);
  uint64_t run = (uint64_t{1} << run_len) - 1;
  for (unsigned start = 0; start + run_len <= k; ++start)
    g.set(run << start, true);
  return g;
}

}  // namespace detail

/// OR_k of k copies of the gadget accepting a run of sqrt(k) consecutive
/// ones; k^2 variables.
inline BoolFun mod_rubinstein(unsigned k, unsigned cap = default_table_cap) {
  unsigned r = detail::exact_sqrt(k, "mod_rubinstein");
  return compose(or_fun(k, cap), detail::run_gadget(k, r, cap), cap);
}

/// Rubinstein's function: as mod_rubinstein with run length 2.
inline BoolFun rubinstein(unsigned k, unsigned cap = default_table_cap) {
  detail::exact_sqrt(k, "rubinstein");
  return compose(or_fun(k, cap), detail::run_gadget(k, 2, cap), cap);
}

/// OR_k of k disjoint AND_sqrt(k) blocks; k^1.5 variables.
inline BoolFun tribes(unsigned k, unsigned cap = default_table_cap) {
  unsigned r = detail::exact_sqrt(k, "tribes");
  return compose(or_fun(k, cap), and_fun(r, cap), cap);
}

/// Structural certificate for an input of mod_rubinstein(k), built from the
/// per-copy case analysis rather than search:
///   T1  two 1-bits at distance >= sqrt(k)            (2 bits)
///   T2  a 1,0,1 pattern                              (3 bits)
///   T3  a too-short run, interior or at a boundary   (<= 3 bits)
///   T4  all-zero copy: one 0 per sqrt(k) positions   (sqrt(k) bits)
/// For 1-inputs the satisfied copy is fixed completely (k bits).
inline Certificate mod_rubinstein_certify(unsigned k, uint64_t x,
                                          unsigned cap = default_table_cap) {
  unsigned r = detail::exact_sqrt(k, "mod_rubinstein_certify");
  if (k * k > cap)
    throw std::invalid_argument("mod_rubinstein_certify: arity over cap");
  if (k * k < 64 && (x >> (k * k)) != 0)
    throw std::invalid_argument("mod_rubinstein_certify: input out of range");

  BoolFun g = detail::run_gadget(k, r, cap);
  uint64_t copy_mask = g.table_size() - 1;
  std::vector<Trit> a(k * k, Trit::Star);
  auto fix = [&](unsigned copy, unsigned pos, bool bit) {
    a[copy * k + pos] = bit ? Trit::One : Trit::Zero;
  };

  // 1-input: reveal the lowest satisfied copy in full.
  for (unsigned copy = 0; copy < k; ++copy) {
    uint64_t y = (x >> (copy * k)) & copy_mask;
    if (!g.value(y)) continue;
    for (unsigned p = 0; p < k; ++p) fix(copy, p, (y >> p) & 1);
    return {Restriction(std::move(a)), true};
  }

  // 0-input: certify every copy.
  for (unsigned copy = 0; copy < k; ++copy) {
    uint64_t y = (x >> (copy * k)) & copy_mask;
    std::vector<unsigned> ones;
    for (unsigned p = 0; p < k; ++p)
      if ((y >> p) & 1) ones.push_back(p);

    if (y == 0) {  // T4
      for (unsigned p = r - 1; p < k; p += r) fix(copy, p, false);
      continue;
    }
    bool done = false;
    for (size_t i = 0; i + 1 < ones.size() && !done; ++i)  // T1
      for (size_t j = i + 1; j < ones.size() && !done; ++j)
        if (ones[j] - ones[i] >= r) {
          fix(copy, ones[i], true);
          fix(copy, ones[j], true);
          done = true;
        }
    if (done) continue;
    for (size_t i = 0; i + 1 < ones.size() && !done; ++i) {  // T2
      for (unsigned p = ones[i] + 1; p < ones[i + 1] && !done; ++p) {
        fix(copy, ones[i], true);
        fix(copy, p, false);
        fix(copy, ones[i + 1], true);
        done = true;
      }
    }
    if (done) continue;
    // Remaining: a single run of length < sqrt(k) (a length-sqrt(k) run
    // would make this a 1-input).
    unsigned lo = ones.front(), hi = ones.back();
    if (lo > 0 && hi + 1 < k) {  // T3(i): 0 1^len 0
      fix(copy, lo - 1, false);
      fix(copy, lo, true);
      fix(copy, hi + 1, false);
    } else if (lo == 0) {  // T3(ii): 1^len 0^(k-len)
      fix(copy, hi, true);
      fix(copy, hi + 1, false);
    } else {  // T3(ii): 0^(k-len) 1^len
      fix(copy, lo - 1, false);
      fix(copy, lo, true);
    }
  }
  return {Restriction(std::move(a)), false};
}

/// Textual function specs: "or:n=3", "and:n=2", "xor:n=4", "const0:n=3",
/// "const1:n=2", "rub:k=4", "modrub:k=4", "tribes:k=4",
/// "compose:or2,and2" (compact gate names: or2, and3, xor4, modrub4, ...).
inline BoolFun parse_function_spec(const std::string& spec,
                                   unsigned cap = default_table_cap) {
  auto bad = [&](const std::string& why) {
    return std::invalid_argument("function spec \"" + spec + "\": " + why);
  };
  auto parse_uint = [&](const std::string& s) -> unsigned {
    size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      throw bad("expected a number, got \"" + s + "\"");
    }
    if (used != s.size()) throw bad("expected a number, got \"" + s + "\"");
    return static_cast<unsigned>(v);
  };

  std::string head = spec, rest;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    rest = spec.substr(colon + 1);
  } else {
    // Compact form: letters followed by the size, e.g. "or2".
    size_t split = head.find_first_of("0123456789");
    if (split != std::string::npos && split > 0) {
      rest = (head.substr(0, split) == "tribes" || head.substr(0, split) == "rub" ||
              head.substr(0, split) == "modrub")
                 ? "k=" + head.substr(split)
                 : "n=" + head.substr(split);
      head = head.substr(0, split);
    }
  }
  auto param = [&](const char* name) {
    std::string prefix = std::string(name) + "=";
    if (rest.rfind(prefix, 0) != 0)
      throw bad("expected parameter " + prefix + "<value>");
    return parse_uint(rest.substr(prefix.size()));
  };

  if (head == "or") return or_fun(param("n"), cap);
  if (head == "and") return and_fun(param("n"), cap);
  if (head == "xor") return xor_fun(param("n"), cap);
  if (head == "const0") return const_fun(param("n"), false, cap);
  if (head == "const1") return const_fun(param("n"), true, cap);
  if (head == "rub") return rubinstein(param("k"), cap);
  if (head == "modrub") return mod_rubinstein(param("k"), cap);
  if (head == "tribes") return tribes(param("k"), cap);
  if (head == "compose") {
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw bad("compose needs two parts");
    return compose(parse_function_spec(rest.substr(0, comma), cap),
                   parse_function_spec(rest.substr(comma + 1), cap), cap);
  }
  throw bad("unknown function name \"" + head + "\"");
}

}  // namespace bfq
