#include <doctest.h>

#include "helpers.hpp"
#include "hyperspace/fft.hpp"
#include "hyperspace/hrr.hpp"

using namespace hyperspace;

namespace {

// Direct O(D^2) circular convolution.
std::vector<double> circular_convolution(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) out[k] += a[j] * b[(k + n - j) % n];
  }
  return out;
}

double cosine(const Hypervector& a, const Hypervector& b) { return HrrBackend().similarity(a, b); }

}  // namespace

TEST_CASE("hrr: bind equals direct circular convolution") {
  Rng rng(21);
  for (const std::size_t d : {2, 3, 7, 16, 33, 64}) {
    CAPTURE(d);
    for (int t = 0; t < 20; ++t) {
      const auto a = testutil::random_real(rng, d);
      const auto b = testutil::random_real(rng, d);
      const auto want = circular_convolution(a.reals(), b.reals());
      const auto got = hrr_bind(a, b);
      CHECK(testutil::max_abs_diff(got.reals(), want) < 1e-12 * testutil::max_abs(want) + 1e-14);
    }
  }
}

TEST_CASE("hrr: bind is commutative, associative, and has the delta as identity") {
  Rng rng(22);
  const auto a = testutil::random_real(rng, 32);
  const auto b = testutil::random_real(rng, 32);
  const auto c = testutil::random_real(rng, 32);
  CHECK(testutil::max_abs_diff(hrr_bind(a, b).reals(), hrr_bind(b, a).reals()) < 1e-12);
  CHECK(testutil::max_abs_diff(hrr_bind(hrr_bind(a, b), c).reals(), hrr_bind(a, hrr_bind(b, c)).reals()) <
        1e-12);
  std::vector<double> delta(32, 0.0);
  delta[0] = 1.0;
  CHECK(testutil::max_abs_diff(hrr_bind(a, Hypervector::real(delta)).reals(), a.reals()) < 1e-12);
}

TEST_CASE("hrr: invert is the index reversal and the conjugate spectrum") {
  Rng rng(23);
  for (const std::size_t d : {5, 8, 64}) {
    const auto a = testutil::random_real(rng, d);
    const auto inv = hrr_invert(a);
    const auto r = a.reals();
    for (std::size_t j = 0; j < d; ++j) CHECK(inv.reals()[j] == r[(d - j) % d]);

    std::vector<Complex> z(r.begin(), r.end());
    fft_plan(d)->forward(z);
    for (auto& c : z) c = std::conj(c);
    fft_plan(d)->inverse(z);
    for (std::size_t j = 0; j < d; ++j) CHECK(inv.reals()[j] == doctest::Approx(z[j].real()).epsilon(1e-12));
  }
}

TEST_CASE("hrr: sampled base is real, unitary, and seed-determined") {
  Rng rng(24);
  for (const std::size_t d : {2, 15, 64, 1024}) {
    CAPTURE(d);
    const auto base = hrr_sample_base(rng, d);
    CHECK(base.tag == BackendTag::kHrr);
    CHECK(base.dim() == d);
    const auto spec = hrr_spectrum(base.values);
    for (const auto& z : spec) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(spec[0] - Complex(1, 0)) < 1e-9);
    if (d % 2 == 0) CHECK(std::abs(spec[d / 2] - Complex(1, 0)) < 1e-9);
  }
  Rng a(5), b(5);
  CHECK(hrr_sample_base(a, 64) == hrr_sample_base(b, 64));
  CHECK_THROWS_AS(hrr_sample_base(a, 1), Error);
}

TEST_CASE("hrr: E(0) is the delta and E(1) is the base") {
  Rng rng(25);
  const auto base = hrr_sample_base(rng, 64);
  const auto e0 = hrr_encode(base, 0.0);
  CHECK(e0.reals()[0] == doctest::Approx(1.0));
  for (std::size_t j = 1; j < 64; ++j) CHECK(std::abs(e0.reals()[j]) < 1e-12);
  CHECK(testutil::max_abs_diff(hrr_encode(base, 1.0).reals(), base.values) < 1e-12);
}

TEST_CASE("hrr: encoded vectors have unit norm") {
  Rng rng(26);
  const auto base = hrr_sample_base(rng, 256);
  for (const double x : {-3.2, 0.0, 0.4, 7.75}) CHECK(norm2(hrr_encode(base, x)) == doctest::Approx(1.0));
}

TEST_CASE("hrr: fractional power homomorphism") {
  Rng rng(27);
  const auto base = hrr_sample_base(rng, 1024);
  for (int t = 0; t < 25; ++t) {
    const double x = rng.uniform(-10, 10);
    const double y = rng.uniform(-10, 10);
    const auto lhs = hrr_bind(hrr_encode(base, x), hrr_encode(base, y));
    CHECK(cosine(lhs, hrr_encode(base, x + y)) >= 1.0 - 1e-9);
  }
}

TEST_CASE("hrr: unitary base makes invert an exact unbind") {
  Rng rng(28);
  const auto base = hrr_sample_base(rng, 128);
  const auto p = hrr_encode(base, 2.5);
  const auto v = testutil::random_real(rng, 128);
  const auto back = hrr_bind(hrr_bind(p, v), hrr_invert(p));
  CHECK(testutil::max_abs_diff(back.reals(), v.reals()) < 1e-12);
  // E(x)^-1 = E(-x)
  CHECK(testutil::max_abs_diff(hrr_invert(p).reals(), hrr_encode(base, -2.5).reals()) < 1e-12);
}

TEST_CASE("hrr: batch encode equals elementwise encode") {
  Rng rng(29);
  const auto base = hrr_sample_base(rng, 96);
  const std::vector<double> xs{0.0, 1.5, -2.0, 3.25};
  const auto batch = hrr_encode_batch(base, xs);
  REQUIRE(batch.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(batch[i] == hrr_encode(base, xs[i]));
}

TEST_CASE("hrr: non-power-of-two dimension") {
  Rng rng(30);
  const auto base = hrr_sample_base(rng, 8096);
  const auto lhs = hrr_bind(hrr_encode(base, 0.3), hrr_encode(base, 1.1));
  CHECK(cosine(lhs, hrr_encode(base, 1.4)) >= 1.0 - 1e-9);
}

TEST_CASE("hrr: errors") {
  Rng rng(31);
  const auto base = hrr_sample_base(rng, 16);
  CHECK_THROWS_AS(hrr_encode(base, std::numeric_limits<double>::quiet_NaN()), Error);
  CHECK_THROWS_AS(hrr_bind(testutil::random_real(rng, 16), testutil::random_real(rng, 8)), Error);
  CHECK_THROWS_AS(hrr_bind(testutil::random_phasors(rng, 16), testutil::random_phasors(rng, 16)), Error);
  CHECK_THROWS_AS(hrr_encode(BaseVector{BackendTag::kFhrr, {0.1, 0.2}}, 1.0), Error);
}
