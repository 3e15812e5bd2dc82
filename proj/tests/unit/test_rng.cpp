#include <doctest.h>

#include <set>

#include "hyperspace/rng.hpp"

using hyperspace::Rng;

TEST_CASE("rng: same seed, same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng: engine output is the standard mt19937_64 sequence") {
  // 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  Rng r(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = r.next_u64();
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("rng: uniform stays in range") {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = r.uniform(-3.0, 2.0);
    CHECK(v >= -3.0);
    CHECK(v < 2.0);
  }
}

TEST_CASE("rng: uniform mean and below() coverage") {
  Rng r(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.uniform();
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));

  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto k = r.below(7);
    CHECK(k < 7);
    seen.insert(k);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("rng: fork is independent of consumption and distinct per stream") {
  Rng a(3), b(3);
  for (int i = 0; i < 50; ++i) (void)b.next_u64();
  Rng fa = a.fork(1), fb = b.fork(1);
  CHECK(fa.next_u64() == fb.next_u64());
  CHECK(a.fork(1).next_u64() != a.fork(2).next_u64());
  CHECK(Rng(3).fork(1).seed() != Rng(4).fork(1).seed());
}
