#include <doctest.h>

#include <limits>
#include <sstream>

#include "helpers.hpp"

using namespace hyperspace;

TEST_CASE("hypervector: factories set tag and dim") {
  const auto r = Hypervector::real({1.0, 2.0, 3.0});
  CHECK(r.tag() == BackendTag::kHrr);
  CHECK(r.dim() == 3);
  const auto c = Hypervector::complex({Complex(1, 0), Complex(0, 1)});
  CHECK(c.tag() == BackendTag::kFhrr);
  CHECK(c.dim() == 2);
  CHECK(c.raw().size() == 4);
  CHECK(Hypervector::zeros(BackendTag::kFhrr, 5).dim() == 5);
}

TEST_CASE("hypervector: checked factories reject bad input") {
  CHECK_THROWS_AS(Hypervector::real({}), Error);
  CHECK_THROWS_AS(Hypervector::real({1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
  CHECK_THROWS_AS(Hypervector::complex({Complex(std::numeric_limits<double>::infinity(), 0)}), Error);
}

TEST_CASE("hypervector: wrong-backend accessors throw BackendMismatch") {
  const auto r = Hypervector::real({1.0});
  try {
    (void)r.phasors();
    FAIL("expected BackendMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBackendMismatch);
  }
  CHECK_THROWS_AS((void)Hypervector::complex({Complex(1, 0)}).reals(), Error);
}

TEST_CASE("hypervector: require_compatible") {
  const auto a = Hypervector::real({1.0, 2.0});
  const auto b = Hypervector::real({1.0, 2.0, 3.0});
  const auto c = Hypervector::complex({Complex(1, 0), Complex(1, 0)});
  CHECK_NOTHROW(require_compatible(a, a));
  try {
    require_compatible(a, b);
    FAIL("expected DimMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimMismatch);
  }
  try {
    require_compatible(a, c);
    FAIL("expected BackendMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBackendMismatch);
  }
}

TEST_CASE("hypervector: payload sizes are 4D and 8D bytes") {
  CHECK(payload_bytes(BackendTag::kHrr, 8192) == 4 * 8192);
  CHECK(payload_bytes(BackendTag::kFhrr, 8192) == 8 * 8192);
  Rng rng(1);
  const auto h = serialize(testutil::random_real(rng, 100));
  const auto f = serialize(testutil::random_phasors(rng, 100));
  CHECK(h.size() == kHypervectorHeaderBytes + 400);
  CHECK(f.size() == kHypervectorHeaderBytes + 800);
  CHECK(f.size() - kHypervectorHeaderBytes == 2 * (h.size() - kHypervectorHeaderBytes));
}

TEST_CASE("hypervector: wire header layout") {
  const auto bytes = serialize(Hypervector::real({1.0, -2.0}));
  REQUIRE(bytes.size() == 17);
  CHECK(bytes[0] == 'H');
  CHECK(bytes[3] == '1');
  CHECK(bytes[4] == 0);  // HRR tag
  CHECK(bytes[5] == 2);  // dim, little-endian
  CHECK(bytes[6] == 0);
  // 1.0f = 0x3f800000 little-endian
  CHECK(bytes[9] == 0x00);
  CHECK(bytes[12] == 0x3f);
}

TEST_CASE("hypervector: serialize round trip within float32 precision") {
  Rng rng(2);
  for (const bool complex : {false, true}) {
    const auto v = complex ? testutil::random_phasors(rng, 64) : testutil::random_real(rng, 64);
    const auto back = deserialize(serialize(v));
    CHECK(back.tag() == v.tag());
    CHECK(back.dim() == v.dim());
    CHECK(testutil::max_abs_diff(back.raw(), v.raw()) < 1e-7);
    // float32 values survive a second round trip exactly
    CHECK(deserialize(serialize(back)) == back);
  }
}

TEST_CASE("hypervector: stream round trip and malformed input") {
  Rng rng(3);
  const auto v = testutil::random_real(rng, 10);
  std::stringstream ss;
  write_hypervector(ss, v);
  write_hypervector(ss, v);
  CHECK(read_hypervector(ss).dim() == 10);
  CHECK(read_hypervector(ss).dim() == 10);

  auto bytes = serialize(v);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(deserialize(truncated), Error);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize(bad_magic), Error);
  auto bad_tag = bytes;
  bad_tag[4] = 9;
  try {
    deserialize(bad_tag);
    FAIL("expected Format");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormat);
  }
}

TEST_CASE("hypervector: backend names") {
  CHECK(to_string(BackendTag::kHrr) == "hrr");
  CHECK(parse_backend("fhrr") == BackendTag::kFhrr);
  CHECK_THROWS_AS(parse_backend("map"), Error);
}
