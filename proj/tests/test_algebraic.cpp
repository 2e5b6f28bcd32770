#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bfq/algebraic.hpp"
#include "bfq/combinatorial.hpp"
#include "bfq/zoo.hpp"

using namespace bfq;

TEST_CASE("mobius transform small cases") {
  MultilinearPoly p = mobius(xor_fun(2));  // x1 + x2 - 2 x1 x2
  CHECK(p.coeff(0b00) == 0);
  CHECK(p.coeff(0b01) == 1);
  CHECK(p.coeff(0b10) == 1);
  CHECK(p.coeff(0b11) == -2);
  CHECK(p.degree() == 2);

  MultilinearPoly q = mobius(and_fun(3));  // x1 x2 x3
  for (uint64_t m = 0; m < 8; ++m) CHECK(q.coeff(m) == (m == 7 ? 1 : 0));
  CHECK(q.degree() == 3);

  CHECK(degree(const_fun(4, false)) == 0);
  CHECK(degree(const_fun(4, true)) == 0);
  CHECK(degree(const_fun(0, true)) == 0);
}

TEST_CASE("modified Rubinstein degree by full transform") {
  CHECK(degree(mod_rubinstein(4)) == 16);
}

TEST_CASE("mobius round trip") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    BoolFun f = random_function(2 + trial % 5, rng());
    MultilinearPoly p = mobius(f);
    for (uint64_t x = 0; x < f.table_size(); ++x)
      CHECK(p.evaluate(x) == (f.value(x) ? 1 : 0));
  }
}

TEST_CASE("degree never increases under restriction") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    unsigned n = 2 + trial % 4;
    BoolFun f = random_function(n, rng());
    std::vector<Trit> a(n);
    for (auto& t : a) t = static_cast<Trit>(rng() % 3);
    Restriction rho{a};
    CHECK(degree(restrict(f, rho)) <= degree(f));
  }
}

TEST_CASE("spectral sensitivity closed forms") {
  // OR_n: the sensitivity graph is a star with n leaves.
  for (unsigned n = 2; n <= 7; ++n)
    CHECK(std::abs(spectral_sensitivity(or_fun(n)) - std::sqrt(double(n))) < 1e-9);
  // XOR_n: the sensitivity graph is the full hypercube.
  for (unsigned n = 2; n <= 7; ++n)
    CHECK(std::abs(spectral_sensitivity(xor_fun(n)) - double(n)) < 1e-9);
  CHECK(spectral_sensitivity(const_fun(4, true)) == 0.0);
  CHECK(spectral_sensitivity(const_fun(0, false)) == 0.0);
}

TEST_CASE("spectral sensitivity comparisons") {
  std::mt19937_64 rng(29);
  const double tol = 1e-9, slack = 1e-7;
  for (int trial = 0; trial < 30; ++trial) {
    unsigned n = 2 + trial % 4;  // up to 5
    BoolFun f = random_function(n, rng());
    double lam = spectral_sensitivity(f, tol);
    double s = sensitivity(f).value;
    unsigned d = degree(f);
    CHECK(lam <= s + slack);
    CHECK(s <= lam * lam + slack);
    CHECK(double(d) <= lam * lam + slack);
  }
}

TEST_CASE("non convergence reported distinctly") {
  CHECK_THROWS_AS(spectral_sensitivity(xor_fun(6), 1e-12, 3), convergence_error);
}
