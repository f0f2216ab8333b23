#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "ssebench/rng.hpp"

#include <set>

using namespace ssebench;

TEST_CASE("derive_seed separates streams and parents") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t parent = 0; parent < 20; ++parent) {
    for (std::uint64_t stream = 0; stream < 50; ++stream) seen.insert(derive_seed(parent, stream));
  }
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("make_rng is reproducible") {
  Rng a = make_rng(42, 7);
  Rng b = make_rng(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("uniform01 stays in [0, 1) with mean near 1/2") {
  Rng rng = make_rng(3, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.004));
}
