#include <set>

#include "doctest.h"
#include "qrc/rng.hpp"

using namespace qrc::rng;

TEST_CASE("engine is deterministic per seed") {
  Xoshiro256 a(123), b(123), c(124);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    all_equal = all_equal && (va == b.next());
    any_diff = any_diff || (va != c.next());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform stays in [0, 1) and fills the range") {
  Xoshiro256 gen(5);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = gen.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("stream derivation separates tags and seeds") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    for (std::uint64_t tag = 0; tag < 16; ++tag) {
      seen.insert(derive_stream(seed, tag));
    }
  }
  CHECK(seen.size() == 3 * 16);

  CHECK(derive_stream(7, Stream::Series) != derive_stream(7, Stream::Reservoir));
  CHECK(derive_stream(7, Stream::Series) != derive_stream(7, Stream::Sampling));
  CHECK(derive_stream(7, Stream::Series) == derive_stream(7, std::uint64_t{1}));
}

TEST_CASE("golden values pin the generator across platforms") {
  // Frozen outputs; any change here breaks reproducibility of every
  // recorded experiment.
  Xoshiro256 g(42);
  CHECK(g.next() == 0x15780b2e0c2ec716ULL);
  CHECK(g.next() == 0x6104d9866d113a7eULL);
  CHECK(g.next() == 0xae17533239e499a1ULL);
  CHECK(g.next() == 0xecb8ad4703b360a1ULL);

  Xoshiro256 u(7);
  CHECK(u.uniform() == doctest::Approx(0.7005764821796896).epsilon(1e-16));
  CHECK(u.uniform() == doctest::Approx(0.27875122947378428).epsilon(1e-16));

  CHECK(derive_stream(5, std::uint64_t{3}) == 0x196e4ec2da05b945ULL);
}

TEST_CASE("uniform range mapping") {
  Xoshiro256 gen(11);
  for (int i = 0; i < 1000; ++i) {
    const double v = gen.uniform(-3.0, 5.0);
    CHECK(v >= -3.0);
    CHECK(v < 5.0);
  }
}
