#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bfq/core.hpp"

namespace bfq {

class convergence_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The unique multilinear polynomial representing a Boolean function,
/// coefficients indexed by monomial mask. Coefficients are integers because
/// the Moebius transform of a 0/1 table is integral.
class MultilinearPoly {
public:
  MultilinearPoly(unsigned arity, std::vector<int64_t> coeffs)
      : arity_(arity), coeffs_(std::move(coeffs)) {}

  unsigned arity() const { return arity_; }
  int64_t coeff(uint64_t monomial) const { return coeffs_[monomial]; }

  /// Degree of the polynomial; 0 for constants.
  unsigned degree() const {
    unsigned d = 0;
    for (uint64_t m = 0; m < coeffs_.size(); ++m)
      if (coeffs_[m] != 0) d = std::max(d, unsigned(std::popcount(m)));
    return d;
  }

  std::vector<uint64_t> monomials_of_degree(unsigned d) const {
    std::vector<uint64_t> out;
    for (uint64_t m = 0; m < coeffs_.size(); ++m)
      if (coeffs_[m] != 0 && unsigned(std::popcount(m)) == d) out.push_back(m);
    return out;
  }

  int64_t evaluate(uint64_t x) const {
    int64_t v = 0;
    for (uint64_t m = 0; m < coeffs_.size(); ++m)
      if ((m & x) == m) v += coeffs_[m];
    return v;
  }

private:
  unsigned arity_;
  std::vector<int64_t> coeffs_;
};

/// Moebius transform: coefficient of monomial S is
/// sum over T subseteq S of (-1)^{|S|-|T|} f(1_T).
inline MultilinearPoly mobius(const BoolFun& f) {
  std::vector<int64_t> c(f.table_size());
  for (uint64_t x = 0; x < f.table_size(); ++x) c[x] = f.value(x);
  for (unsigned i = 0; i < f.arity(); ++i) {
    uint64_t bit = uint64_t{1} << i;
    for (uint64_t m = 0; m < f.table_size(); ++m)
      if (m & bit) c[m] -= c[m ^ bit];
  }
  return MultilinearPoly(f.arity(), std::move(c));
}

inline unsigned degree(const BoolFun& f) { return mobius(f).degree(); }

/// Largest eigenvalue of the sensitivity-graph adjacency matrix, by power
/// iteration on A + nI (the graph is bipartite, so the raw spectrum is
/// symmetric and the shift makes the top eigenvalue strictly dominant).
/// Matrix-vector products are matrix-free over the 2^n vertices.
inline double spectral_sensitivity(const BoolFun& f, double tol = 1e-9,
                                   uint64_t max_iters = 1'000'000,
                                   uint64_t noise_seed = 0x9e3779b97f4a7c15ULL) {
  const uint64_t size = f.table_size();
  const unsigned n = f.arity();
  if (n == 0) return 0.0;

  // Sensitive neighbour masks per vertex, so each product is a sparse pass.
  std::vector<uint32_t> sens(size, 0);
  for (uint64_t x = 0; x < size; ++x) {
    bool v = f.value(x);
    uint32_t mask = 0;
    for (unsigned i = 0; i < n; ++i)
      if (f.value(x ^ (uint64_t{1} << i)) != v) mask |= uint32_t{1} << i;
    sens[x] = mask;
  }

  std::vector<double> v(size, 1.0), w(size);
  std::mt19937_64 rng(noise_seed);
  std::uniform_real_distribution<double> noise(0.0, 0.125);
  for (auto& vi : v) vi += noise(rng);

  auto normalize = [&](std::vector<double>& u) {
    double norm = 0;
    for (double ui : u) norm += ui * ui;
    norm = std::sqrt(norm);
    for (auto& ui : u) ui /= norm;
  };
  normalize(v);

  const double shift = n;
  for (uint64_t iter = 0; iter < max_iters; ++iter) {
    double rayleigh = 0;
    for (uint64_t x = 0; x < size; ++x) {
      double acc = shift * v[x];
      uint32_t mask = sens[x];
      while (mask) {
        unsigned i = std::countr_zero(mask);
        mask &= mask - 1;
        acc += v[x ^ (uint64_t{1} << i)];
      }
      w[x] = acc;
      rayleigh += acc * v[x];
    }
    double resid = 0;
    for (uint64_t x = 0; x < size; ++x) {
      double r = w[x] - rayleigh * v[x];
      resid += r * r;
    }
    // For a symmetric matrix the Rayleigh estimate is within the residual
    // norm of a true eigenvalue. The norm itself is nonnegative, so tiny
    // negative drift is rounding noise.
    if (std::sqrt(resid) <= tol * 0.5) return std::max(0.0, rayleigh - shift);
    v.swap(w);
    normalize(v);
  }
  throw convergence_error("power iteration did not converge to tolerance");
}

}  // namespace bfq
