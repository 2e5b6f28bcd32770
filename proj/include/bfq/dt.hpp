#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bfq/combinatorial.hpp"
#include "bfq/core.hpp"

namespace bfq {

class budget_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DtResult {
  unsigned depth = 0;
  std::optional<unsigned> first_query;  // empty for constant functions
};

namespace detail {

inline BoolFun restrict_single(const BoolFun& f, unsigned var, bool bit) {
  BoolFun g(f.arity() - 1);
  uint64_t lo = (uint64_t{1} << var) - 1;
  for (uint64_t r = 0; r < g.table_size(); ++r) {
    uint64_t x = (r & lo) | ((r & ~lo) << 1) | (uint64_t{bit} << var);
    g.set(r, f.value(x));
  }
  return g;
}

// Canonical memo key: sorted free-variable set plus the packed table.
inline std::string dt_key(uint32_t free_mask, const BoolFun& f) {
  std::string key(reinterpret_cast<const char*>(&free_mask), sizeof(free_mask));
  key += f.to_string();
  return key;
}

struct DtSolver {
  std::unordered_map<std::string, unsigned> memo;
  size_t memo_budget;

  unsigned solve(uint32_t free_mask, const BoolFun& f) {
    if (f.is_constant()) return 0;
    std::string key = dt_key(free_mask, f);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    unsigned best = f.arity() + 1;
    for (unsigned p = 0; p < f.arity() && best > 1; ++p) {
      uint32_t var_bit = nth_set_bit(free_mask, p);
      unsigned d0 = solve(free_mask ^ var_bit, restrict_single(f, p, false));
      if (d0 + 1 >= best) continue;
      unsigned d1 = solve(free_mask ^ var_bit, restrict_single(f, p, true));
      best = std::min(best, 1 + std::max(d0, d1));
    }
    if (memo.size() >= memo_budget)
      throw budget_error("decision-tree memo budget exceeded");
    memo.emplace(std::move(key), best);
    return best;
  }

  static uint32_t nth_set_bit(uint32_t mask, unsigned p) {
    for (unsigned i = 0; i < p; ++i) mask &= mask - 1;
    return mask & ~(mask - 1);
  }
};

}  // namespace detail

/// Exact deterministic decision-tree depth with the lowest-index optimal
/// first query. Minimax recurrence, memoized on (free variables, table).
inline DtResult dt_depth(const BoolFun& f, size_t memo_budget = 1u << 22) {
  if (f.is_constant()) return {0, std::nullopt};
  detail::DtSolver solver{{}, memo_budget};
  uint32_t all = f.arity() == 32 ? ~uint32_t{0} : (uint32_t{1} << f.arity()) - 1;
  unsigned best = f.arity() + 1;
  unsigned best_var = 0;
  for (unsigned p = 0; p < f.arity(); ++p) {
    uint32_t var_bit = uint32_t{1} << p;
    unsigned d = 1 + std::max(solver.solve(all ^ var_bit,
                                           detail::restrict_single(f, p, false)),
                              solver.solve(all ^ var_bit,
                                           detail::restrict_single(f, p, true)));
    if (d < best) {
      best = d;
      best_var = p;
    }
  }
  return {best, best_var};
}

struct UnambiguousCover {
  bool value = false;
  std::vector<Certificate> parts;
};

struct UcResult {
  unsigned value = 0;
  UnambiguousCover cover;
};

namespace detail {

struct Subcube {
  uint64_t fixed_mask = 0;  // variables fixed by the assignment
  uint64_t fixed_bits = 0;  // their values (subset of fixed_mask)
  unsigned size() const { return unsigned(std::popcount(fixed_mask)); }

  bool contains(uint64_t x) const { return (x & fixed_mask) == fixed_bits; }

  // Two partial assignments are consistent iff they agree wherever both fix.
  bool consistent(const Subcube& o) const {
    return ((fixed_mask & o.fixed_mask) & (fixed_bits ^ o.fixed_bits)) == 0;
  }
};

// All b-certificates of f, ordered by size then lexicographic assignment
// string (so searches pick deterministic witnesses).
inline std::vector<Subcube> all_certificates(const BoolFun& f, bool b) {
  std::vector<Subcube> certs;
  uint64_t full = f.table_size() - 1;
  for (uint64_t mask = 0; mask <= full; ++mask) {
    for (uint64_t bits = mask;; bits = (bits - 1) & mask) {
      bool constant_b = true;
      uint64_t free_mask = full & ~mask;
      for (uint64_t sub = free_mask;; sub = (sub - 1) & free_mask) {
        if (f.value(bits | sub) != b) {
          constant_b = false;
          break;
        }
        if (sub == 0) break;
      }
      if (constant_b) certs.push_back({mask, bits});
      if (bits == 0) break;
    }
  }
  auto key = [&](const Subcube& c) {
    std::string s(f.arity(), '*');
    for (unsigned i = 0; i < f.arity(); ++i)
      if ((c.fixed_mask >> i) & 1) s[i] = ((c.fixed_bits >> i) & 1) ? '1' : '0';
    return s;
  };
  std::stable_sort(certs.begin(), certs.end(),
                   [&](const Subcube& a, const Subcube& c) {
                     if (a.size() != c.size()) return a.size() < c.size();
                     return key(a) < key(c);
                   });
  return certs;
}

struct UcSearch {
  const std::vector<Subcube>& certs;
  const std::vector<uint64_t>& inputs;        // f^{-1}(b), ascending
  const std::vector<uint64_t>& covered_sets;  // per certificate, inputs mask
  unsigned bound;
  uint64_t budget;
  std::vector<unsigned> chosen;

  bool dfs(uint64_t covered) {
    if (budget-- == 0) throw budget_error("UC search budget exceeded");
    if (covered == (inputs.size() == 64 ? ~uint64_t{0}
                                        : (uint64_t{1} << inputs.size()) - 1))
      return true;
    unsigned first = std::countr_one(covered);
    uint64_t x = inputs[first];
    for (unsigned ci = 0; ci < certs.size(); ++ci) {
      const Subcube& c = certs[ci];
      if (c.size() > bound) break;  // sorted by size
      if (!c.contains(x)) continue;
      bool clash = false;
      for (unsigned prev : chosen)
        if (c.consistent(certs[prev])) { clash = true; break; }
      if (clash) continue;
      chosen.push_back(ci);
      if (dfs(covered | covered_sets[ci])) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace detail

/// Minimum over unambiguous collections of b-certificates of the largest
/// certificate size, by iterative deepening from C_b(f). The returned cover
/// partitions f^{-1}(b).
inline UcResult uc_value(const BoolFun& f, bool b, uint64_t budget = 50'000'000) {
  std::vector<uint64_t> inputs;
  for (uint64_t x = 0; x < f.table_size(); ++x)
    if (f.value(x) == b) inputs.push_back(x);
  if (inputs.empty()) return {0, {b, {}}};
  if (inputs.size() > 64)
    throw budget_error("UC search supports at most 64 value-b inputs");

  auto certs = detail::all_certificates(f, b);
  std::vector<uint64_t> covered_sets(certs.size(), 0);
  for (unsigned ci = 0; ci < certs.size(); ++ci)
    for (unsigned xi = 0; xi < inputs.size(); ++xi)
      if (certs[ci].contains(inputs[xi]))
        covered_sets[ci] |= uint64_t{1} << xi;

  unsigned start = certificate_complexity(f, b).value;
  for (unsigned u = start; u <= f.arity(); ++u) {
    detail::UcSearch search{certs, inputs, covered_sets, u, budget, {}};
    if (search.dfs(0)) {
      UnambiguousCover cover{b, {}};
      unsigned value = 0;
      for (unsigned ci : search.chosen) {
        const auto& c = certs[ci];
        std::vector<Trit> a(f.arity(), Trit::Star);
        for (unsigned i = 0; i < f.arity(); ++i)
          if ((c.fixed_mask >> i) & 1)
            a[i] = ((c.fixed_bits >> i) & 1) ? Trit::One : Trit::Zero;
        cover.parts.push_back({Restriction(std::move(a)), b});
        value = std::max(value, c.size());
      }
      return {value, std::move(cover)};
    }
  }
  throw std::logic_error("UC deepening failed past trivial bound");
}

inline unsigned uc(const BoolFun& f, uint64_t budget = 50'000'000) {
  return std::max(uc_value(f, false, budget).value,
                  uc_value(f, true, budget).value);
}

inline unsigned uc_min(const BoolFun& f, uint64_t budget = 50'000'000) {
  return std::min(uc_value(f, false, budget).value,
                  uc_value(f, true, budget).value);
}

}  // namespace bfq
