#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bfq/core.hpp"
#include "bfq/detail/parallel.hpp"

namespace bfq {

/// Disjoint sensitive blocks at a base input, each block a variable mask.
struct BlockFamily {
  uint64_t base = 0;
  std::vector<uint64_t> blocks;
};

/// A certifying partial assignment together with the certified value.
struct Certificate {
  Restriction assignment;
  bool value = false;

  unsigned size() const { return assignment.size() - assignment.star_count(); }
};

/// Value of a maximized measure together with the first input attaining it.
struct MaxWitness {
  unsigned value = 0;
  uint64_t witness = 0;
  bool found = false;
};

inline unsigned sensitivity_at(const BoolFun& f, uint64_t x) {
  unsigned count = 0;
  bool v = f.value(x);
  for (unsigned i = 0; i < f.arity(); ++i)
    count += v != f.value(x ^ (uint64_t{1} << i));
  return count;
}

namespace detail {

// All nonempty variable masks with popcount <= size_cap, ordered by
// (popcount, numeric value). This is the canonical block enumeration order.
inline std::vector<uint64_t> masks_by_size(unsigned n, unsigned size_cap) {
  std::vector<uint64_t> masks;
  uint64_t end = uint64_t{1} << n;
  masks.reserve(end > 1 ? end - 1 : 0);
  for (uint64_t m = 1; m < end; ++m)
    if (std::popcount(m) <= static_cast<int>(size_cap)) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](uint64_t a, uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return masks;
}

// Minimal sensitive blocks at x, given masks pre-sorted by size. A candidate
// is minimal iff it is sensitive and contains no smaller minimal block.
inline void minimal_blocks_into(const BoolFun& f, uint64_t x,
                                std::span<const uint64_t> masks,
                                std::vector<uint64_t>& out) {
  out.clear();
  bool v = f.value(x);
  for (uint64_t b : masks) {
    if (f.value(x ^ b) == v) continue;
    bool minimal = true;
    for (uint64_t m : out)
      if ((m & b) == m) { minimal = false; break; }
    if (minimal) out.push_back(b);
  }
}

// Exact maximum disjoint packing, include-first depth-first search over the
// enumeration order; returns the first maximum found (lexicographically
// least packing).
struct PackingSearch {
  std::span<const uint64_t> blocks;
  std::vector<unsigned> chosen, best_set;
  unsigned best = 0;

  void dfs(size_t i, uint64_t used) {
    if (chosen.size() + (blocks.size() - i) <= best) return;
    if (i == blocks.size()) {
      best = static_cast<unsigned>(chosen.size());
      best_set = chosen;
      return;
    }
    if (!(blocks[i] & used)) {
      chosen.push_back(static_cast<unsigned>(i));
      dfs(i + 1, used | blocks[i]);
      chosen.pop_back();
    }
    dfs(i + 1, used);
  }
};

inline std::vector<unsigned> max_packing(std::span<const uint64_t> blocks) {
  PackingSearch s{blocks, {}, {}, 0};
  s.dfs(0, 0);
  return s.best_set;
}

// Greedy disjoint packing of the still-unhit blocks: a lower bound on any
// hitting set covering them.
inline unsigned packing_bound(std::span<const uint64_t> blocks,
                              const std::vector<bool>& hit) {
  unsigned bound = 0;
  uint64_t used = 0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (hit[i]) continue;
    if (!(blocks[i] & used)) {
      used |= blocks[i];
      ++bound;
    }
  }
  return bound;
}

// Exact minimum hitting set over the blocks, branching on the variables of
// the first unhit block, lowest index first.
struct HittingSearch {
  std::span<const uint64_t> blocks;
  std::vector<bool> hit;
  unsigned chosen_count = 0;
  uint64_t chosen_vars = 0;
  unsigned best = ~0u;
  uint64_t best_vars = 0;

  void dfs() {
    size_t first_unhit = blocks.size();
    for (size_t i = 0; i < blocks.size(); ++i)
      if (!hit[i]) { first_unhit = i; break; }
    if (first_unhit == blocks.size()) {
      if (chosen_count < best) {
        best = chosen_count;
        best_vars = chosen_vars;
      }
      return;
    }
    if (chosen_count + packing_bound(blocks, hit) >= best) return;
    uint64_t b = blocks[first_unhit];
    while (b) {
      unsigned var = std::countr_zero(b);
      b &= b - 1;
      uint64_t vmask = uint64_t{1} << var;
      std::vector<size_t> newly_hit;
      for (size_t i = 0; i < blocks.size(); ++i)
        if (!hit[i] && (blocks[i] & vmask)) {
          hit[i] = true;
          newly_hit.push_back(i);
        }
      chosen_vars |= vmask;
      ++chosen_count;
      dfs();
      --chosen_count;
      chosen_vars &= ~vmask;
      for (size_t i : newly_hit) hit[i] = false;
    }
  }
};

inline uint64_t min_hitting_set(std::span<const uint64_t> blocks) {
  if (blocks.empty()) return 0;
  HittingSearch s{blocks, std::vector<bool>(blocks.size(), false), 0, 0, ~0u, 0};
  s.dfs();
  return s.best_vars;
}

}  // namespace detail

/// All inclusion-minimal sensitive blocks at x, by increasing size.
inline std::vector<uint64_t> minimal_sensitive_blocks(const BoolFun& f,
                                                      uint64_t x) {
  auto masks = detail::masks_by_size(f.arity(), f.arity());
  std::vector<uint64_t> out;
  detail::minimal_blocks_into(f, x, masks, out);
  return out;
}

inline std::pair<unsigned, BlockFamily> block_sensitivity_at(const BoolFun& f,
                                                             uint64_t x) {
  auto blocks = minimal_sensitive_blocks(f, x);
  auto picked = detail::max_packing(blocks);
  BlockFamily fam{x, {}};
  for (unsigned i : picked) fam.blocks.push_back(blocks[i]);
  return {static_cast<unsigned>(picked.size()), fam};
}

inline std::pair<unsigned, Certificate> certificate_at(const BoolFun& f,
                                                       uint64_t x) {
  auto blocks = minimal_sensitive_blocks(f, x);
  uint64_t vars = detail::min_hitting_set(blocks);
  std::vector<Trit> a(f.arity(), Trit::Star);
  for (unsigned i = 0; i < f.arity(); ++i)
    if ((vars >> i) & 1) a[i] = ((x >> i) & 1) ? Trit::One : Trit::Zero;
  return {static_cast<unsigned>(std::popcount(vars)),
          Certificate{Restriction(std::move(a)), f.value(x)}};
}

namespace detail {

// Global max-over-inputs driver shared by s, bs and C. Computing s(f) first
// lets the block scans stop at size s(f): every minimal sensitive block fits
// within it.
template <typename PerPoint>
MaxWitness max_over_inputs(const BoolFun& f, std::optional<bool> side,
                           unsigned threads, PerPoint per_point) {
  auto shard_results = detail::sharded<MaxWitness>(
      f.table_size(), threads, [&](unsigned, uint64_t begin, uint64_t end) {
        MaxWitness local;
        for (uint64_t x = begin; x < end; ++x) {
          if (side && f.value(x) != *side) continue;
          unsigned v = per_point(x);
          if (!local.found || v > local.value) local = {v, x, true};
        }
        return local;
      });
  MaxWitness out;
  for (const auto& r : shard_results) {
    if (!r.found) continue;
    if (!out.found || r.value > out.value) out = r;
  }
  return out;
}

}  // namespace detail

inline MaxWitness sensitivity(const BoolFun& f, std::optional<bool> side = {},
                              unsigned threads = 1) {
  return detail::max_over_inputs(f, side, threads,
                                 [&](uint64_t x) { return sensitivity_at(f, x); });
}

inline MaxWitness block_sensitivity(const BoolFun& f,
                                    std::optional<bool> side = {},
                                    unsigned threads = 1) {
  unsigned cap = std::max(1u, sensitivity(f, {}, threads).value);
  auto masks = detail::masks_by_size(f.arity(), cap);
  return detail::max_over_inputs(f, side, threads, [&](uint64_t x) {
    thread_local std::vector<uint64_t> blocks;
    detail::minimal_blocks_into(f, x, masks, blocks);
    return static_cast<unsigned>(detail::max_packing(blocks).size());
  });
}

inline MaxWitness certificate_complexity(const BoolFun& f,
                                         std::optional<bool> side = {},
                                         unsigned threads = 1) {
  unsigned cap = std::max(1u, sensitivity(f, {}, threads).value);
  auto masks = detail::masks_by_size(f.arity(), cap);
  return detail::max_over_inputs(f, side, threads, [&](uint64_t x) {
    thread_local std::vector<uint64_t> blocks;
    detail::minimal_blocks_into(f, x, masks, blocks);
    return static_cast<unsigned>(
        std::popcount(detail::min_hitting_set(blocks)));
  });
}

}  // namespace bfq
