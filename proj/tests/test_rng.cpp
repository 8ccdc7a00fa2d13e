#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mgbench/rng.hpp"

using mgbench::Rng;
using mgbench::derive_seed;

TEST_SUITE("rng") {

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.raw() == b.raw());
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
    CHECK(a.below(97) == b.below(97));
    CHECK(a.coin() == b.coin());
  }
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int agree = 0;
  for (int i = 0; i < 64; ++i) agree += a.raw() == b.raw() ? 1 : 0;
  CHECK(agree == 0);
}

TEST_CASE("uniform stays in the half-open unit interval") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform mean and variance match the flat distribution") {
  Rng rng(11);
  const int trials = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double u = rng.uniform();
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  // SE(mean) = 1/sqrt(12 trials) ~ 6.5e-4; allow 4 SE.
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * trials));
  CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal moments") {
  Rng rng(13);
  const int trials = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double g = rng.normal();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(trials)));
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("below covers its range and rejects zero") {
  Rng rng(17);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = rng.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("coin is roughly fair") {
  Rng rng(19);
  int heads = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) heads += rng.coin() ? 1 : 0;
  CHECK(std::abs(heads - trials / 2) < 4 * std::sqrt(trials / 4.0));
}

TEST_CASE("derive_seed is stable and label-sensitive") {
  CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3, 0));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2, 0, 0));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 4, 3));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(2, 2, 3, 4));
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
}

TEST_CASE("derived streams look independent") {
  // Streams from adjacent labels must not be shifted copies of each other.
  Rng a(derive_seed(5, 0));
  Rng b(derive_seed(5, 1));
  std::vector<std::uint64_t> va, vb;
  for (int i = 0; i < 32; ++i) {
    va.push_back(a.raw());
    vb.push_back(b.raw());
  }
  int matches = 0;
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) matches += va[i] == vb[j] ? 1 : 0;
  }
  CHECK(matches == 0);
}

}  // TEST_SUITE
