#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bfq/combinatorial.hpp"
#include "bfq/dt.hpp"
#include "bfq/zoo.hpp"
#include "test_oracles.hpp"

using namespace bfq;

TEST_CASE("composition") {
  BoolFun t = compose(or_fun(2), and_fun(2));
  CHECK(t.arity() == 4);
  CHECK(t.value(0b0011));  // x = 1100 in variable order: first AND satisfied

  BoolFun id1 = and_fun(1);
  BoolFun f = random_function(3, 61);
  CHECK(compose(f, id1) == f);
  CHECK(compose(xor_fun(2), xor_fun(2)) == xor_fun(4));

  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    BoolFun g = random_function(1 + trial % 3, rng());
    BoolFun h = random_function(1 + trial % 2, rng());
    CHECK(compose(g, h).arity() == g.arity() * h.arity());
  }
}

TEST_CASE("run gadget patterns at k = 4") {
  BoolFun f = mod_rubinstein(4);
  REQUIRE(f.arity() == 16);
  auto copy0 = [&](uint64_t pattern) { return f.value(pattern); };
  // patterns written as variable strings y1 y2 y3 y4
  CHECK(copy0(0b0011));      // 1100: run at the start
  CHECK(copy0(0b0110));      // 0110
  CHECK(copy0(0b1100));      // 0011
  CHECK_FALSE(copy0(0b0101));  // 1010: not consecutive
  CHECK_FALSE(copy0(0b1111));  // 1111: too many ones
  CHECK_FALSE(f.value(0));

  BoolFun rub = rubinstein(4);
  CHECK(rub.value(0b0110));       // 0110 accepted (run of two)
  CHECK_FALSE(rub.value(0b1110));  // 0111 rejected
  // consecutive pair inside copy 2 (variables x5, x6)
  CHECK(rub.value(uint64_t{0b0011} << 4));

  CHECK_THROWS_AS(mod_rubinstein(5), std::invalid_argument);
}

TEST_CASE("tribes values") {
  BoolFun t = tribes(4);
  REQUIRE(t.arity() == 8);
  CHECK(t.value(0b00000011));       // 11000000: first AND pair satisfied
  CHECK_FALSE(t.value(0b01010101));  // 10101010: no AND satisfied

  CHECK(certificate_complexity(t, false).value == 4);
  CHECK(certificate_complexity(t, true).value == 2);
  CHECK(dt_depth(t).depth == 8);
  CHECK(sensitivity(t, false).value == 4);
  CHECK(sensitivity(t, true).value == 2);
  CHECK(oracles::max_sensitivity_side(t, false) == 4);
  CHECK(oracles::max_sensitivity_side(t, true) == 2);
}

TEST_CASE("modified Rubinstein structural certificates") {
  const unsigned k = 4;
  BoolFun f = mod_rubinstein(k);

  SECTION("all zeros gets one zero per run per copy") {
    Certificate cert = mod_rubinstein_certify(k, 0);
    CHECK_FALSE(cert.value);
    CHECK(cert.size() == 8);  // k * sqrt(k)
    CHECK(cert.assignment.consistent_with(0));
  }
  SECTION("copy with two spread ones certified with two bits") {
    uint64_t x = 0b1001;  // copy 0 holds 1001, the rest are all-zero copies
    Certificate cert = mod_rubinstein_certify(k, x);
    CHECK_FALSE(cert.value);
    unsigned copy0_fixed = 0;
    for (unsigned i = 0; i < 4; ++i)
      if (cert.assignment.at(i) != Trit::Star) ++copy0_fixed;
    CHECK(copy0_fixed == 2);
    CHECK(cert.size() == 2 + 3 * 2);  // T1 on copy 0, T4 on the others
  }
  SECTION("satisfied copy revealed in full") {
    uint64_t x = uint64_t{0b0110} << 4;  // copy 1 = 0110
    REQUIRE(f.value(x));
    Certificate cert = mod_rubinstein_certify(k, x);
    CHECK(cert.value);
    CHECK(cert.size() == 4);
    for (unsigned i = 4; i < 8; ++i) CHECK(cert.assignment.at(i) != Trit::Star);
  }
  SECTION("certificates are valid and at least as large as exact C") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 120; ++trial) {
      uint64_t x = rng() & (f.table_size() - 1);
      Certificate cert = mod_rubinstein_certify(k, x);
      CHECK(cert.value == f.value(x));
      REQUIRE(cert.assignment.consistent_with(x));
      BoolFun sub = restrict(f, cert.assignment);
      bool constant = true;
      for (uint64_t y = 0; y < sub.table_size(); ++y)
        if (sub.value(y) != cert.value) constant = false;
      CHECK(constant);
      CHECK(cert.size() >= certificate_at(f, x).first);
    }
  }
  SECTION("at the all-zero input the structural size equals exact C") {
    CHECK(certificate_at(f, 0).first == 8);
    CHECK(mod_rubinstein_certify(k, 0).size() == 8);
  }
}

TEST_CASE("function spec parsing") {
  CHECK(parse_function_spec("modrub:k=4") == mod_rubinstein(4));
  CHECK(parse_function_spec("tribes:k=4") == tribes(4));
  CHECK(parse_function_spec("compose:or2,and2") == compose(or_fun(2), and_fun(2)));
  CHECK(parse_function_spec("xor:n=4") == xor_fun(4));
  CHECK(parse_function_spec("const0:n=3") == const_fun(3, false));
  CHECK(parse_function_spec("const1:n=2") == const_fun(2, true));
  CHECK(parse_function_spec("or3") == or_fun(3));
  CHECK(parse_function_spec("rub:k=4") == rubinstein(4));

  CHECK_THROWS_AS(parse_function_spec("modrub:k=5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("frob:n=2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("or:k=2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("or:n=zz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("compose:or2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function_spec("xor:n=30"), table_error);
}
