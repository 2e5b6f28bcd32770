#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "bfq/combinatorial.hpp"
#include "bfq/zoo.hpp"
#include "test_oracles.hpp"

using namespace bfq;

TEST_CASE("sensitivity") {
  auto r = sensitivity(or_fun(3));
  CHECK(r.value == 3);
  CHECK(r.witness == 0);
  CHECK(sensitivity(const_fun(3, true)).value == 0);
  CHECK(sensitivity_at(and_fun(2), 0b01) == 1);

  BoolFun t4 = tribes(4);
  unsigned expect = 0;
  for (uint64_t x = 0; x < t4.table_size(); ++x)
    expect = std::max(expect, oracles::sensitivity_by_scan(t4, x));
  CHECK(sensitivity(t4).value == expect);
  CHECK(sensitivity(t4, false).value == oracles::max_sensitivity_side(t4, false));
  CHECK(sensitivity(t4, true).value == oracles::max_sensitivity_side(t4, true));
}

TEST_CASE("minimal sensitive blocks") {
  CHECK(minimal_sensitive_blocks(or_fun(3), 0) ==
        std::vector<uint64_t>{0b001, 0b010, 0b100});
  // AND_2 at x = (x1=0, x2=1): only flipping x1 changes the value.
  CHECK(minimal_sensitive_blocks(and_fun(2), 0b10) ==
        std::vector<uint64_t>{0b01});
  CHECK(minimal_sensitive_blocks(const_fun(3, false), 5).empty());
}

TEST_CASE("minimal blocks of modified Rubinstein at all-zeros") {
  BoolFun f = mod_rubinstein(4);
  auto blocks = minimal_sensitive_blocks(f, 0);
  // One block per run of 2 consecutive positions per copy: 3 runs x 4 copies.
  REQUIRE(blocks.size() == 12);
  std::vector<uint64_t> expected;
  for (unsigned copy = 0; copy < 4; ++copy)
    for (unsigned start = 0; start + 2 <= 4; ++start)
      expected.push_back(uint64_t{0b11} << (copy * 4 + start));
  std::sort(expected.begin(), expected.end());
  std::vector<uint64_t> got = blocks;
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
}

TEST_CASE("minimal blocks no larger than global sensitivity") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    BoolFun f = random_function(2 + trial % 4, rng());
    unsigned s = sensitivity(f).value;
    for (uint64_t x = 0; x < f.table_size(); ++x)
      for (uint64_t b : minimal_sensitive_blocks(f, x))
        CHECK(unsigned(std::popcount(b)) <= s);
  }
}

TEST_CASE("block sensitivity") {
  auto [v, fam] = block_sensitivity_at(or_fun(3), 0);
  CHECK(v == 3);
  CHECK(fam.blocks.size() == 3);
  CHECK(block_sensitivity(or_fun(3)).value == 3);
  CHECK(block_sensitivity(const_fun(2, false)).value == 0);
}

TEST_CASE("certificates") {
  CHECK(certificate_at(and_fun(3), 0b111).first == 3);
  CHECK(certificate_at(and_fun(3), 0b110).first == 1);
  auto [v, cert] = certificate_at(and_fun(3), 0b110);
  CHECK(v == 1);
  CHECK(cert.value == false);
  CHECK(cert.size() == 1);
  CHECK(cert.assignment.to_string() == "0**");

  for (uint64_t x = 0; x < 8; ++x)
    CHECK(certificate_at(const_fun(3, true), x).first == 0);
}

TEST_CASE("certificate subcube is constant") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 34; ++trial) {
    unsigned n = trial < 30 ? 2 + trial % 5 : 12;  // a few full-size scans
    BoolFun f = random_function(n, rng());
    uint64_t x = rng() & (f.table_size() - 1);
    auto [size, cert] = certificate_at(f, x);
    REQUIRE(cert.assignment.consistent_with(x));
    BoolFun sub = restrict(f, cert.assignment);
    for (uint64_t y = 0; y < sub.table_size(); ++y)
      CHECK(sub.value(y) == cert.value);
    CHECK(cert.size() == size);
  }
}

TEST_CASE("packing covering sandwich and measure chain") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    unsigned n = 2 + trial % 4;  // up to n = 5
    BoolFun f = random_function(n, rng());
    for (uint64_t x = 0; x < f.table_size(); ++x) {
      unsigned s = sensitivity_at(f, x);
      unsigned bs = block_sensitivity_at(f, x).first;
      unsigned c = certificate_at(f, x).first;
      CHECK(s <= bs);
      CHECK(bs <= c);
    }
    unsigned s = sensitivity(f).value;
    unsigned bs = block_sensitivity(f).value;
    unsigned c = certificate_complexity(f).value;
    CHECK(s <= bs);
    CHECK(bs <= c);
    CHECK(c <= bs * s);
  }
}

TEST_CASE("sharded scans match single threaded") {
  BoolFun f = random_function(8, 99);
  CHECK(sensitivity(f, {}, 4).value == sensitivity(f).value);
  CHECK(sensitivity(f, {}, 4).witness == sensitivity(f).witness);
  CHECK(block_sensitivity(f, {}, 3).value == block_sensitivity(f).value);
  CHECK(certificate_complexity(f, {}, 5).value == certificate_complexity(f).value);
}
