#include <doctest.h>

#include <cmath>
#include <set>

#include "stein/random.hpp"

using namespace stein;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same key gives the same sequence") {
  CounterRng a(RngStream{7, 3});
  CounterRng b(RngStream{7, 3});
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
  CounterRng c(RngStream{7, 3});
  CounterRng d(RngStream{7, 3});
  for (int i = 0; i < 200; ++i) REQUIRE(c.gamma(2.5) == d.gamma(2.5));
}

TEST_CASE("distinct streams differ") {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 1000; ++s) first.insert(CounterRng(RngStream{1, s}).next_u64());
  CHECK(first.size() == 1000);
}

TEST_CASE("derive_seed depends on every tag") {
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
}

TEST_CASE("uniform lies in the open unit interval with the right moments") {
  CounterRng r(RngStream{11, 0});
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sum2 / n - 1.0 / 3) < 0.005);
}

TEST_CASE("gamma draws match mean and variance for shapes below and above one") {
  for (double shape : {0.3, 1.0, 2.5, 101.0}) {
    CounterRng r(RngStream{5, std::uint64_t(shape * 10)});
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      const double g = r.gamma(shape);
      REQUIRE(g > 0.0);
      sum += g;
      sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - shape) < 4 * std::sqrt(shape / n));
    CHECK(std::abs(var - shape) / shape < 0.03);
  }
}
