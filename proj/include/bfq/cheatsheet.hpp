#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "bfq/core.hpp"

namespace bfq {

/// Cheat-sheet Tribes instance sizes and bit layout.
///
/// Input layout (address part first):
///   [0, log_t * tribes_vars)            address copies x_1 .. x_{log_t}
///   [cells_base, total_vars)            cells Y_0 .. Y_{t-1}
/// Within a cell: log_t descriptions in copy order; each description is k
/// fields of field_bits bits, least-significant bit first. A 0-description's
/// field j holds the global label of a zeroed variable of AND_j; a
/// 1-description uses the first and_label_bits bits as the label of a
/// satisfied AND and ignores the rest.
/// Copy 1's value is the most-significant bit of the addressed cell index.
struct CsParams {
  unsigned k = 0;
  unsigned t = 0;
  unsigned sqrt_k = 0;
  unsigned tribes_vars = 0;     // k^1.5
  unsigned log_t = 0;
  unsigned field_bits = 0;      // ceil(log2(k^1.5))
  unsigned and_label_bits = 0;  // ceil(log2(k))
  unsigned desc_bits = 0;       // k * field_bits
  unsigned cell_bits = 0;       // log_t * desc_bits
  size_t total_vars = 0;

  static CsParams make(unsigned k, unsigned t) {
    CsParams p;
    p.k = k;
    p.t = t;
    p.sqrt_k = static_cast<unsigned>(std::lround(std::sqrt(double(k))));
    if (k < 4 || p.sqrt_k * p.sqrt_k != k)
      throw std::invalid_argument("cheatsheet: k must be a perfect square >= 4");
    if (t < 2 || (t & (t - 1)) != 0)
      throw std::invalid_argument("cheatsheet: t must be a power of two >= 2");
    p.tribes_vars = k * p.sqrt_k;
    p.log_t = static_cast<unsigned>(std::countr_zero(t));
    p.field_bits = std::bit_width(p.tribes_vars - 1);
    p.and_label_bits = std::bit_width(k - 1);
    p.desc_bits = p.k * p.field_bits;
    p.cell_bits = p.log_t * p.desc_bits;
    p.total_vars = size_t{p.log_t} * p.tribes_vars + size_t{p.t} * p.cell_bits;
    return p;
  }

  size_t cells_base() const { return size_t{log_t} * tribes_vars; }
  size_t address_bit(unsigned copy, unsigned var) const {
    return size_t{copy} * tribes_vars + var;
  }
  size_t cell_begin(unsigned cell) const {
    return cells_base() + size_t{cell} * cell_bits;
  }
  size_t desc_begin(unsigned cell, unsigned copy) const {
    return cell_begin(cell) + size_t{copy} * desc_bits;
  }
  size_t field_bit(unsigned cell, unsigned copy, unsigned field,
                   unsigned bit) const {
    return desc_begin(cell, copy) + size_t{field} * field_bits + bit;
  }
  unsigned and_of_var(unsigned var) const { return var / sqrt_k; }
  bool cell_index_bit(unsigned cell, unsigned copy) const {
    return (cell >> (log_t - 1 - copy)) & 1;
  }
};

namespace detail {

template <typename Read>
bool cs_and_satisfied(const CsParams& p, unsigned copy, unsigned and_idx,
                      Read&& read) {
  for (unsigned l = 0; l < p.sqrt_k; ++l)
    if (!read(p.address_bit(copy, and_idx * p.sqrt_k + l))) return false;
  return true;
}

template <typename Read>
bool cs_tribes_value(const CsParams& p, unsigned copy, Read&& read) {
  for (unsigned j = 0; j < p.k; ++j)
    if (cs_and_satisfied(p, copy, j, read)) return true;
  return false;
}

template <typename Read>
uint64_t cs_read_bits(size_t begin, unsigned count, Read&& read) {
  uint64_t v = 0;
  for (unsigned b = 0; b < count; ++b)
    v |= uint64_t{read(begin + b)} << b;
  return v;
}

// Checks that description `copy` of cell `cell` is a valid
// `claimed`-certificate consistent with the copy's address bits.
template <typename Read>
bool cs_description_valid(const CsParams& p, unsigned cell, unsigned copy,
                          bool claimed, Read&& read) {
  if (claimed) {
    uint64_t j = cs_read_bits(p.desc_begin(cell, copy), p.and_label_bits, read);
    if (j >= p.k) return false;
    return cs_and_satisfied(p, copy, unsigned(j), read);
  }
  for (unsigned j = 0; j < p.k; ++j) {
    uint64_t v =
        cs_read_bits(p.field_bit(cell, copy, j, 0), p.field_bits, read);
    if (v >= p.tribes_vars || p.and_of_var(unsigned(v)) != j) return false;
    if (read(p.address_bit(copy, unsigned(v)))) return false;
  }
  return true;
}

}  // namespace detail

/// Direct evaluation of the cheat-sheet Tribes function on a full input.
inline bool cs_evaluate(const CsParams& p, const BitVec& x) {
  if (x.size() != p.total_vars)
    throw std::invalid_argument("cs_evaluate: input width mismatch");
  auto read = [&](size_t i) { return x.get(i); };
  unsigned ell = 0;
  for (unsigned i = 0; i < p.log_t; ++i)
    ell |= unsigned{detail::cs_tribes_value(p, i, read)} << (p.log_t - 1 - i);
  for (unsigned i = 0; i < p.log_t; ++i)
    if (!detail::cs_description_valid(p, ell, i, p.cell_index_bit(ell, i), read))
      return false;
  return true;
}

/// One round of the cell-elimination argument: probes the pair on the lowest
/// coordinate where their indices differ and discards a provably invalid
/// cell. Reads one AND label, one variable label and at most one input bit.
template <typename Read>
unsigned discard_one(const CsParams& p, unsigned ell, unsigned q, Read&& read) {
  if (ell == q) throw std::invalid_argument("discard_one: cells must differ");
  unsigned i = 0;
  while (p.cell_index_bit(ell, i) == p.cell_index_bit(q, i)) ++i;
  unsigned one_cell = p.cell_index_bit(ell, i) ? ell : q;
  unsigned zero_cell = one_cell == ell ? q : ell;

  uint64_t j = detail::cs_read_bits(p.desc_begin(one_cell, i),
                                    p.and_label_bits, read);
  if (j >= p.k) return one_cell;
  uint64_t v = detail::cs_read_bits(p.field_bit(zero_cell, i, unsigned(j), 0),
                                    p.field_bits, read);
  if (v >= p.tribes_vars || p.and_of_var(unsigned(v)) != unsigned(j))
    return zero_cell;
  // A confirmed zero kills the 1-claim; a 1 kills the 0-claim.
  return read(p.address_bit(i, unsigned(v))) ? zero_cell : one_cell;
}

struct CsRunResult {
  bool output = false;
  size_t queries = 0;
};

/// Two-stage query algorithm: eliminate cells pairwise down to one survivor,
/// then verify the survivor's descriptions completely.
inline CsRunResult cs_algorithm(const CsParams& p, QueryOracle& oracle) {
  if (oracle.arity() != p.total_vars)
    throw std::invalid_argument("cs_algorithm: oracle width mismatch");
  auto read = [&](size_t i) { return oracle.query(i); };
  std::vector<unsigned> alive(p.t);
  std::iota(alive.begin(), alive.end(), 0u);
  while (alive.size() > 1) {
    unsigned dead = discard_one(p, alive[0], alive[1], read);
    alive.erase(std::find(alive.begin(), alive.end(), dead));
  }
  unsigned z = alive[0];
  bool ok = true;
  for (unsigned i = 0; i < p.log_t && ok; ++i)
    ok = detail::cs_description_valid(p, z, i, p.cell_index_bit(z, i), read);
  return {ok, oracle.transcript().count()};
}

// --- adversary -------------------------------------------------------------

/// Oracle strategy for the lower-bound harness. Address queries are answered
/// 1 except on the last unqueried variable of an AND block, which gets 0, so
/// no copy's Tribes value commits before all its variables are read. Cell
/// queries are answered 0.
class CsAdversary {
public:
  explicit CsAdversary(const CsParams& p) : p_(p) {
    if (p.t > p.tribes_vars)
      throw std::invalid_argument(
          "adversary regime needs t <= D(tribes) = k^1.5");
    queried_in_and_.assign(size_t{p.log_t} * p.k, 0);
  }

  bool answer(size_t idx) {
    if (idx >= p_.cells_base()) return false;
    unsigned copy = unsigned(idx / p_.tribes_vars);
    unsigned var = unsigned(idx % p_.tribes_vars);
    unsigned slot = copy * p_.k + p_.and_of_var(var);
    return ++queried_in_and_[slot] < p_.sqrt_k;
  }

  QueryOracle make_oracle() {
    return QueryOracle(p_.total_vars, [this](size_t idx, const QueryTranscript&) {
      return answer(idx);
    });
  }

private:
  CsParams p_;
  std::vector<unsigned> queried_in_and_;
};

/// Bits revealed by a transcript prefix.
struct RevealedState {
  BitVec known, bits;

  static RevealedState from_transcript(size_t n, const QueryTranscript& t,
                                       size_t prefix) {
    RevealedState s{BitVec(n), BitVec(n)};
    for (size_t q = 0; q < prefix && q < t.reads.size(); ++q) {
      s.known.set(t.reads[q].first, true);
      s.bits.set(t.reads[q].first, t.reads[q].second);
    }
    return s;
  }

  bool consistent_with(const BitVec& full) const {
    for (size_t i = 0; i < known.size(); ++i)
      if (known.get(i) && full.get(i) != bits.get(i)) return false;
    return true;
  }
};

/// Completes the revealed bits to a full input with the requested function
/// value, if one exists within the constructive search. The returned witness
/// is verified against cs_evaluate before being handed back.
inline std::optional<BitVec> cs_completion(const CsParams& p,
                                           const RevealedState& state,
                                           bool target) {
  auto known0 = [&](size_t i) { return state.known.get(i) && !state.bits.get(i); };
  auto known1 = [&](size_t i) { return state.known.get(i) && state.bits.get(i); };

  if (!target) {
    // Zero-fill: every AND block picks up a 0, and the addressed cell's
    // field for AND_1 then reads label 0, which lies outside AND_1.
    BitVec z(p.total_vars);
    for (size_t i = 0; i < p.total_vars; ++i)
      if (state.known.get(i)) z.set(i, state.bits.get(i));
    if (!cs_evaluate(p, z)) return z;
    return std::nullopt;
  }

  for (unsigned m = 0; m < p.t; ++m) {
    struct CopyPlan {
      bool value;
      unsigned and_idx = 0;                // for value = 1
      std::vector<unsigned> zero_vars;     // for value = 0, one per AND
    };
    std::vector<CopyPlan> plans(p.log_t);
    bool ok = true;
    for (unsigned i = 0; i < p.log_t && ok; ++i) {
      bool b = p.cell_index_bit(m, i);
      plans[i].value = b;
      auto label_compatible = [&](size_t begin, unsigned bits_count,
                                  uint64_t value) {
        for (unsigned bb = 0; bb < bits_count; ++bb) {
          size_t pos = begin + bb;
          bool want = (value >> bb) & 1;
          if (state.known.get(pos) && state.bits.get(pos) != want) return false;
        }
        return true;
      };
      if (b) {
        ok = false;
        for (unsigned j = 0; j < p.k; ++j) {
          bool alive = true;
          for (unsigned l = 0; l < p.sqrt_k && alive; ++l)
            if (known0(p.address_bit(i, j * p.sqrt_k + l))) alive = false;
          if (alive && label_compatible(p.desc_begin(m, i), p.and_label_bits, j)) {
            plans[i].and_idx = j;
            ok = true;
            break;
          }
        }
      } else {
        for (unsigned j = 0; j < p.k && ok; ++j) {
          ok = false;
          for (unsigned v = j * p.sqrt_k; v < (j + 1) * p.sqrt_k; ++v) {
            if (known1(p.address_bit(i, v))) continue;
            if (label_compatible(p.field_bit(m, i, j, 0), p.field_bits, v)) {
              plans[i].zero_vars.push_back(v);
              ok = true;
              break;
            }
          }
        }
      }
    }
    if (!ok) continue;

    BitVec z(p.total_vars);
    for (size_t i = 0; i < p.total_vars; ++i)
      if (state.known.get(i)) z.set(i, state.bits.get(i));
    for (unsigned i = 0; i < p.log_t; ++i) {
      const CopyPlan& plan = plans[i];
      if (plan.value) {
        for (unsigned l = 0; l < p.sqrt_k; ++l)
          z.set(p.address_bit(i, plan.and_idx * p.sqrt_k + l), true);
        for (unsigned bb = 0; bb < p.and_label_bits; ++bb)
          z.set(p.desc_begin(m, i) + bb, (plan.and_idx >> bb) & 1);
      } else {
        for (unsigned j = 0; j < p.k; ++j) {
          unsigned v = plan.zero_vars[j];
          z.set(p.address_bit(i, v), false);
          for (unsigned bb = 0; bb < p.field_bits; ++bb)
            z.set(p.field_bit(m, i, j, bb), (v >> bb) & 1);
        }
      }
    }
    if (state.consistent_with(z) && cs_evaluate(p, z)) return z;
  }
  return std::nullopt;
}

// --- structured instance generation -----------------------------------------

/// Random input whose addressed cell holds genuinely valid certificate
/// descriptions; with corrupt = true one bit of that cell is then flipped
/// (which may or may not break validity; the direct evaluator decides).
inline BitVec random_structured_cs_input(const CsParams& p, std::mt19937_64& rng,
                                         bool corrupt) {
  BitVec x(p.total_vars);
  for (size_t i = 0; i < p.total_vars; ++i) x.set(i, rng() & 1);
  auto read = [&](size_t i) { return x.get(i); };

  unsigned ell = 0;
  for (unsigned i = 0; i < p.log_t; ++i)
    ell |= unsigned{detail::cs_tribes_value(p, i, read)} << (p.log_t - 1 - i);
  for (unsigned i = 0; i < p.log_t; ++i) {
    if (p.cell_index_bit(ell, i)) {
      std::vector<unsigned> sat;
      for (unsigned j = 0; j < p.k; ++j)
        if (detail::cs_and_satisfied(p, i, j, read)) sat.push_back(j);
      unsigned j = sat[rng() % sat.size()];
      for (unsigned bb = 0; bb < p.and_label_bits; ++bb)
        x.set(p.desc_begin(ell, i) + bb, (j >> bb) & 1);
    } else {
      for (unsigned j = 0; j < p.k; ++j) {
        std::vector<unsigned> zeros;
        for (unsigned v = j * p.sqrt_k; v < (j + 1) * p.sqrt_k; ++v)
          if (!x.get(p.address_bit(i, v))) zeros.push_back(v);
        unsigned v = zeros[rng() % zeros.size()];  // nonempty: AND_j unsatisfied
        for (unsigned bb = 0; bb < p.field_bits; ++bb)
          x.set(p.field_bit(ell, i, j, bb), (v >> bb) & 1);
      }
    }
  }
  if (corrupt) {
    size_t bit = p.cell_begin(ell) + rng() % p.cell_bits;
    x.set(bit, !x.get(bit));
  }
  return x;
}

// --- restricted algorithm ----------------------------------------------------

/// Working state of one iteration of the restricted algorithm.
struct CsRestrictedState {
  std::vector<unsigned> alive;          // V: cells not yet proven invalid
  std::vector<unsigned> zero_claiming;  // V0: alive cells with this copy's bit 0
  std::vector<unsigned> alive_ands;     // A1: ANDs of this copy possibly all-1
};

/// Label of a description field when the restriction fixes all of its bits.
inline std::optional<unsigned> fixed_field_label(const CsParams& p,
                                                 const Restriction& rho,
                                                 unsigned cell, unsigned copy,
                                                 unsigned field) {
  unsigned v = 0;
  for (unsigned b = 0; b < p.field_bits; ++b) {
    Trit t = rho.at(unsigned(p.field_bit(cell, copy, field, b)));
    if (t == Trit::Star) return std::nullopt;
    v |= unsigned{t == Trit::One} << b;
  }
  return v;
}

struct RevealedAndPick {
  unsigned and_idx = 0;
  std::vector<unsigned> invalid_cells;   // fixed fields that decode malformed
  std::optional<unsigned> popular_var;   // appears in >= |V0| / (2 sqrt k) cells
  std::vector<unsigned> claiming_cells;  // cells naming the popular variable
};

/// Finds an AND of the current copy whose 0-certificate field is completely
/// fixed by the restriction in at least half of the zero-claiming cells, and
/// within those the most popular claimed variable.
inline std::optional<RevealedAndPick> pick_revealed_and(
    const CsParams& p, const Restriction& rho,
    const std::vector<unsigned>& zero_claiming, unsigned copy,
    const std::vector<unsigned>& alive_ands) {
  for (unsigned j : alive_ands) {
    std::vector<std::pair<unsigned, unsigned>> fixed;  // (cell, label)
    for (unsigned z : zero_claiming)
      if (auto label = fixed_field_label(p, rho, z, copy, j))
        fixed.emplace_back(z, *label);
    if (2 * fixed.size() < zero_claiming.size()) continue;
    RevealedAndPick pick;
    pick.and_idx = j;
    std::vector<std::pair<unsigned, unsigned>> valid;
    for (auto& [z, label] : fixed) {
      if (label >= p.tribes_vars || p.and_of_var(label) != j)
        pick.invalid_cells.push_back(z);
      else
        valid.emplace_back(z, label);
    }
    if (!pick.invalid_cells.empty()) return pick;
    for (unsigned v = j * p.sqrt_k; v < (j + 1) * p.sqrt_k; ++v) {
      std::vector<unsigned> claiming;
      for (auto& [z, label] : valid)
        if (label == v) claiming.push_back(z);
      if (2 * p.sqrt_k * claiming.size() >= zero_claiming.size() &&
          !claiming.empty()) {
        pick.popular_var = v;
        pick.claiming_cells = std::move(claiming);
        return pick;
      }
    }
    // Pigeonhole over the sqrt(k) in-range labels guarantees a popular one,
    // so this line is unreachable; bail out to stage 2 if it ever fires.
    return std::nullopt;
  }
  return std::nullopt;
}

/// Query algorithm for the restricted function: restriction-fixed positions
/// are known for free, only starred positions reach the oracle. Runs one
/// iteration per address copy, then verifies the surviving cell.
inline CsRunResult cs_restricted_algorithm(const CsParams& p,
                                           const Restriction& rho,
                                           QueryOracle& oracle,
                                           unsigned budget_constant = 8) {
  if (rho.size() != p.total_vars)
    throw std::invalid_argument("cs_restricted_algorithm: restriction width");
  if (oracle.arity() != p.total_vars)
    throw std::invalid_argument("cs_restricted_algorithm: oracle width");
  const uint64_t star_budget =
      uint64_t{budget_constant} * p.tribes_vars * p.and_label_bits;
  if (rho.star_count() > star_budget)
    throw std::invalid_argument("cs_restricted_algorithm: star budget " +
                                std::to_string(star_budget) + " exceeded");

  auto read = [&](size_t i) {
    Trit t = rho.at(unsigned(i));
    return t == Trit::Star ? oracle.query(i) : t == Trit::One;
  };
  auto known_zero = [&](size_t i) {
    Trit t = rho.at(unsigned(i));
    if (t != Trit::Star) return t == Trit::Zero;
    return oracle.queried(i) && !oracle.revealed_bit(i);
  };

  const unsigned stage_threshold =
      budget_constant * p.sqrt_k * p.and_label_bits;
  CsRestrictedState state;
  state.alive.resize(p.t);
  std::iota(state.alive.begin(), state.alive.end(), 0u);

  auto erase_cell = [](std::vector<unsigned>& v, unsigned z) {
    if (auto it = std::find(v.begin(), v.end(), z); it != v.end()) v.erase(it);
  };

  for (unsigned i = 0; i < p.log_t && !state.alive.empty(); ++i) {
    state.zero_claiming.clear();
    for (unsigned z : state.alive)
      if (!p.cell_index_bit(z, i)) state.zero_claiming.push_back(z);
    state.alive_ands.clear();
    for (unsigned j = 0; j < p.k; ++j) {
      bool dead = false;
      for (unsigned l = 0; l < p.sqrt_k && !dead; ++l)
        dead = known_zero(p.address_bit(i, j * p.sqrt_k + l));
      if (!dead) state.alive_ands.push_back(j);
    }

    // Stage 1: shrink A1 or V0 via popular variables of revealed ANDs.
    while (state.alive_ands.size() > stage_threshold &&
           state.zero_claiming.size() > 2 * p.k) {
      auto pick = pick_revealed_and(p, rho, state.zero_claiming, i,
                                    state.alive_ands);
      if (!pick) break;  // cannot occur within the star budget
      if (!pick->invalid_cells.empty()) {
        for (unsigned z : pick->invalid_cells) {
          erase_cell(state.alive, z);
          erase_cell(state.zero_claiming, z);
        }
        continue;
      }
      if (read(p.address_bit(i, *pick->popular_var))) {
        for (unsigned z : pick->claiming_cells) {
          erase_cell(state.alive, z);
          erase_cell(state.zero_claiming, z);
        }
      } else {
        erase_cell(state.alive_ands, pick->and_idx);
      }
    }

    // Stage 2: either exhaust the candidate ANDs or collapse V0.
    if (state.alive_ands.size() <= stage_threshold) {
      bool value = false;
      for (unsigned j : state.alive_ands) {
        bool all_ones = true;
        for (unsigned l = 0; l < p.sqrt_k && all_ones; ++l)
          all_ones = read(p.address_bit(i, j * p.sqrt_k + l));
        if (all_ones) {
          value = true;
          break;
        }
      }
      std::vector<unsigned> kept;
      for (unsigned z : state.alive)
        if (p.cell_index_bit(z, i) == value) kept.push_back(z);
      state.alive = std::move(kept);
    } else {
      while (state.zero_claiming.size() > 1) {
        unsigned dead = discard_one(p, state.zero_claiming[0],
                                    state.zero_claiming[1], read);
        erase_cell(state.zero_claiming, dead);
        erase_cell(state.alive, dead);
      }
      bool zero_confirmed = false;
      if (!state.zero_claiming.empty()) {
        unsigned z0 = state.zero_claiming[0];
        if (detail::cs_description_valid(p, z0, i, false, read)) {
          zero_confirmed = true;
          state.alive = {z0};
        } else {
          erase_cell(state.alive, z0);
        }
      }
      if (!zero_confirmed) {
        std::vector<unsigned> kept;
        for (unsigned z : state.alive)
          if (p.cell_index_bit(z, i)) kept.push_back(z);
        state.alive = std::move(kept);
      }
    }
  }

  if (state.alive.empty()) return {false, oracle.transcript().count()};
  unsigned z = state.alive.front();
  bool ok = true;
  for (unsigned i = 0; i < p.log_t && ok; ++i)
    ok = detail::cs_description_valid(p, z, i, p.cell_index_bit(z, i), read);
  return {ok, oracle.transcript().count()};
}

/// A structured instance together with a restriction it is consistent with.
struct RestrictedCsInstance {
  Restriction rho;
  BitVec input;
};

inline RestrictedCsInstance random_restricted_cs_instance(const CsParams& p,
                                                          std::mt19937_64& rng,
                                                          unsigned stars,
                                                          bool corrupt) {
  BitVec x = random_structured_cs_input(p, rng, corrupt);
  std::vector<size_t> pos(p.total_vars);
  std::iota(pos.begin(), pos.end(), size_t{0});
  std::shuffle(pos.begin(), pos.end(), rng);
  std::vector<Trit> assign(p.total_vars);
  for (size_t i = 0; i < p.total_vars; ++i)
    assign[i] = x.get(i) ? Trit::One : Trit::Zero;
  for (unsigned s = 0; s < stars; ++s) assign[pos[s]] = Trit::Star;
  return {Restriction(std::move(assign)), std::move(x)};
}

}  // namespace bfq
