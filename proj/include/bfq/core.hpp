#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfq {

/// Hard default on truth-table arity: 2^24 bits = 2 MiB of table per function.
inline constexpr unsigned default_table_cap = 24;

class table_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An n-variable Boolean function stored as a bit-packed truth table.
/// Bit i of the table is f(x) where x is the binary expansion of i and
/// variable x_1 is the least-significant bit of i.
class BoolFun {
public:
  BoolFun() : arity_(0), words_(1, 0) {}

  explicit BoolFun(unsigned arity, bool fill = false,
                   unsigned cap = default_table_cap)
      : arity_(arity) {
    if (arity > cap)
      throw table_error("arity " + std::to_string(arity) +
                        " exceeds table cap " + std::to_string(cap));
    words_.assign(word_count(arity), fill ? ~uint64_t{0} : 0);
    trim();
  }

  static BoolFun from_string(unsigned arity, const std::string& bits,
                             unsigned cap = default_table_cap) {
    BoolFun f(arity, false, cap);
    if (bits.size() != f.table_size())
      throw table_error("table length " + std::to_string(bits.size()) +
                        " != 2^" + std::to_string(arity));
    for (uint64_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1')
        throw table_error("table characters must be 0 or 1");
      f.set(i, bits[i] == '1');
    }
    return f;
  }

  unsigned arity() const { return arity_; }
  uint64_t table_size() const { return uint64_t{1} << arity_; }

  bool value(uint64_t idx) const {
    return (words_[idx >> 6] >> (idx & 63)) & 1;
  }

  void set(uint64_t idx, bool v) {
    if (v)
      words_[idx >> 6] |= uint64_t{1} << (idx & 63);
    else
      words_[idx >> 6] &= ~(uint64_t{1} << (idx & 63));
  }

  /// Checked pointwise evaluation; x must supply exactly arity() bits.
  bool evaluate(std::span<const bool> x) const {
    if (x.size() != arity_)
      throw std::invalid_argument("evaluate: input has " +
                                  std::to_string(x.size()) + " bits, expected " +
                                  std::to_string(arity_));
    uint64_t idx = 0;
    for (unsigned i = 0; i < arity_; ++i)
      idx |= uint64_t{x[i]} << i;
    return value(idx);
  }

  bool is_constant() const {
    bool v0 = value(0);
    for (uint64_t i = 1; i < table_size(); ++i)
      if (value(i) != v0) return false;
    return true;
  }

  std::string to_string() const {
    std::string s(table_size(), '0');
    for (uint64_t i = 0; i < table_size(); ++i)
      if (value(i)) s[i] = '1';
    return s;
  }

  bool operator==(const BoolFun& o) const = default;

private:
  static size_t word_count(unsigned arity) {
    return arity >= 6 ? (size_t{1} << (arity - 6)) : 1;
  }
  // Keep bits past table_size() zero so operator== can compare words.
  void trim() {
    if (arity_ < 6) words_.back() &= (uint64_t{1} << table_size()) - 1;
  }

  unsigned arity_;
  std::vector<uint64_t> words_;
};

enum class Trit : uint8_t { Zero, One, Star };

/// A partial assignment in {0,1,*}^n.
class Restriction {
public:
  Restriction() = default;

  explicit Restriction(std::vector<Trit> assignments)
      : assignments_(std::move(assignments)) {
    for (Trit t : assignments_)
      if (t == Trit::Star) ++star_count_;
  }

  static Restriction all_star(unsigned n) {
    return Restriction(std::vector<Trit>(n, Trit::Star));
  }

  /// Fixes every variable to the bits of idx (no stars).
  static Restriction from_point(unsigned n, uint64_t idx) {
    std::vector<Trit> a(n);
    for (unsigned i = 0; i < n; ++i)
      a[i] = ((idx >> i) & 1) ? Trit::One : Trit::Zero;
    return Restriction(std::move(a));
  }

  /// Parses strings like "1*0*" (positions in variable order x_1, x_2, ...).
  static Restriction parse(const std::string& s) {
    std::vector<Trit> a;
    a.reserve(s.size());
    for (char c : s) {
      switch (c) {
        case '0': a.push_back(Trit::Zero); break;
        case '1': a.push_back(Trit::One); break;
        case '*': a.push_back(Trit::Star); break;
        default: throw std::invalid_argument("restriction characters must be 0, 1 or *");
      }
    }
    return Restriction(std::move(a));
  }

  unsigned size() const { return static_cast<unsigned>(assignments_.size()); }
  unsigned star_count() const { return star_count_; }
  Trit at(unsigned i) const { return assignments_[i]; }
  const std::vector<Trit>& assignments() const { return assignments_; }

  bool consistent_with(uint64_t x) const {
    for (unsigned i = 0; i < size(); ++i) {
      bool xb = (x >> i) & 1;
      if (assignments_[i] == Trit::Zero && xb) return false;
      if (assignments_[i] == Trit::One && !xb) return false;
    }
    return true;
  }

  /// Lifts a reduced index on the star positions (ascending variable order)
  /// to a full input, taking fixed positions from the restriction.
  uint64_t assemble(uint64_t reduced) const {
    uint64_t x = 0;
    unsigned star = 0;
    for (unsigned i = 0; i < size(); ++i) {
      switch (assignments_[i]) {
        case Trit::Zero: break;
        case Trit::One: x |= uint64_t{1} << i; break;
        case Trit::Star:
          x |= ((reduced >> star) & 1) << i;
          ++star;
          break;
      }
    }
    return x;
  }

  std::vector<unsigned> star_positions() const {
    std::vector<unsigned> pos;
    pos.reserve(star_count_);
    for (unsigned i = 0; i < size(); ++i)
      if (assignments_[i] == Trit::Star) pos.push_back(i);
    return pos;
  }

  /// Composition: inner is a restriction on this restriction's star
  /// positions; the result fixes those stars accordingly.
  Restriction compose(const Restriction& inner) const {
    if (inner.size() != star_count_)
      throw std::invalid_argument("compose: inner restriction has wrong length");
    std::vector<Trit> a = assignments_;
    unsigned star = 0;
    for (unsigned i = 0; i < size(); ++i)
      if (assignments_[i] == Trit::Star) a[i] = inner.at(star++);
    return Restriction(std::move(a));
  }

  std::string to_string() const {
    std::string s;
    s.reserve(size());
    for (Trit t : assignments_)
      s.push_back(t == Trit::Zero ? '0' : t == Trit::One ? '1' : '*');
    return s;
  }

  bool operator==(const Restriction& o) const = default;

private:
  std::vector<Trit> assignments_;
  unsigned star_count_ = 0;
};

/// f restricted by rho, as a function of the star positions. Free variables
/// keep their relative order from f.
inline BoolFun restrict(const BoolFun& f, const Restriction& rho) {
  if (rho.size() != f.arity())
    throw std::invalid_argument("restrict: restriction length != arity");
  BoolFun g(rho.star_count());
  for (uint64_t r = 0; r < g.table_size(); ++r)
    g.set(r, f.value(rho.assemble(r)));
  return g;
}

// --- truth-table file format: "<arity>\n<2^arity chars of 0/1>\n" ---

inline void write_table(const BoolFun& f, std::ostream& os) {
  os << f.arity() << '\n' << f.to_string() << '\n';
}

inline void write_table(const BoolFun& f, const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw table_error("cannot open " + path + " for writing");
  write_table(f, ofs);
}

inline BoolFun read_table(std::istream& is, unsigned cap = default_table_cap) {
  std::string header, bits;
  if (!std::getline(is, header)) throw table_error("missing arity header");
  unsigned arity = 0;
  try {
    size_t used = 0;
    int v = std::stoi(header, &used);
    if (used != header.size() || v < 0) throw std::invalid_argument("");
    arity = static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw table_error("malformed arity header: \"" + header + "\"");
  }
  if (!std::getline(is, bits)) throw table_error("missing table line");
  return BoolFun::from_string(arity, bits, cap);
}

inline BoolFun read_table(const std::string& path,
                          unsigned cap = default_table_cap) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs) throw table_error("cannot open " + path);
  return read_table(ifs, cap);
}

/// Seeded pseudorandom function; identical (n, seed) gives identical tables.
inline BoolFun random_function(unsigned n, uint64_t seed,
                               unsigned cap = default_table_cap) {
  BoolFun f(n, false, cap);
  std::mt19937_64 rng(seed);
  for (uint64_t i = 0; i < f.table_size(); ++i)
    f.set(i, rng() & 1);
  return f;
}

// --- query oracles (arities beyond the table cap live here) ---

/// Dynamic bit vector for inputs too wide for a table index.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }
  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    if (v)
      words_[i >> 6] |= uint64_t{1} << (i & 63);
    else
      words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }

  bool operator==(const BitVec& o) const = default;

private:
  size_t n_ = 0;
  std::vector<uint64_t> words_;
};

/// Ordered record of oracle reads; indices never repeat.
struct QueryTranscript {
  std::vector<std::pair<size_t, bool>> reads;

  size_t count() const { return reads.size(); }

  bool contains(size_t idx) const {
    for (auto& [i, b] : reads)
      if (i == idx) return true;
    return false;
  }

  void dump(std::ostream& os) const {
    for (auto& [i, b] : reads) os << i << ' ' << (b ? 1 : 0) << '\n';
    os << "count " << reads.size() << '\n';
  }
};

/// A Boolean function on `arity` variables exposed only through per-bit
/// queries. Each distinct variable is charged exactly once; repeated reads
/// are served from the cache.
class QueryOracle {
public:
  using Answerer = std::function<bool(size_t, const QueryTranscript&)>;

  explicit QueryOracle(BitVec input)
      : arity_(input.size()), input_(std::move(input)),
        known_(arity_), cache_(arity_) {}

  QueryOracle(size_t arity, Answerer answer)
      : arity_(arity), answer_(std::move(answer)),
        known_(arity_), cache_(arity_) {}

  size_t arity() const { return arity_; }

  bool query(size_t idx) {
    if (idx >= arity_) throw std::out_of_range("oracle query out of range");
    if (known_.get(idx)) return cache_.get(idx);
    bool bit = answer_ ? answer_(idx, transcript_) : input_.get(idx);
    known_.set(idx, true);
    cache_.set(idx, bit);
    transcript_.reads.emplace_back(idx, bit);
    return bit;
  }

  bool queried(size_t idx) const { return known_.get(idx); }
  bool revealed_bit(size_t idx) const { return cache_.get(idx); }
  const QueryTranscript& transcript() const { return transcript_; }

private:
  size_t arity_;
  BitVec input_;
  Answerer answer_;
  BitVec known_, cache_;
  QueryTranscript transcript_;
};

}  // namespace bfq
