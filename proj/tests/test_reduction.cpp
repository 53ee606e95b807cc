#include <doctest.h>

#include <cmath>
#include <vector>

#include "rrkit/errors.hpp"
#include "rrkit/exact_oracles.hpp"
#include "rrkit/fixtures.hpp"
#include "rrkit/perm_rsr.hpp"
#include "rrkit/reduction.hpp"

using namespace rrkit;

namespace {

using IntReduction = RandomReduction<int, int, int, int>;

/// k queries x + r_j (r_j 8-bit chunks), phi = first answer minus r_0.
IntReduction shifted_square(std::size_t k) {
  IntReduction rr;
  rr.name = "shift";
  rr.input_domain = "int";
  rr.query_domain = "int";
  rr.k = k;
  rr.randomness_len = 8 * k;
  rr.sigma = [](std::size_t j, const int& x, const RandomBits& r) {
    return x + static_cast<int>(r.read(8 * j, 8));
  };
  rr.phi = [](const int&, const RandomBits& r, const std::vector<int>& a) {
    return a[0] - static_cast<int>(r.read(0, 8));
  };
  return rr;
}

}  // namespace

TEST_CASE("identity reduction returns the oracle's answer in one round") {
  auto rr = identity_reduction<int, int>("int");
  Oracle<int, int> triple([](const int& q, std::uint64_t) { return 3 * q; });
  Rng rng(1);
  CHECK(run_reduction(rr, 7, triple, rng) == 21);
  CHECK(triple.stats().rounds == 1);
}

TEST_CASE("run_reduction submits exactly one batch per invocation") {
  const IntReduction rr = shifted_square(5);
  Oracle<int, int> id([](const int& q, std::uint64_t) { return q; });
  Rng rng(2);
  for (int i = 0; i < 10; ++i) CHECK(run_reduction(rr, i, id, rng) == i);
  CHECK(id.stats().rounds == 10);
  CHECK(id.stats().total_queries == 50);
  CHECK(id.stats().max_batch == 5);
}

TEST_CASE("materialize checks the random string length and records provenance") {
  const IntReduction rr = shifted_square(2);
  CHECK_THROWS_AS(materialize(rr, 1, RandomBits(15)), ArityError);
  const RandomBits r = RandomBits::from_integer(0x0201, 16);
  const QueryBatch<int> b = materialize(rr, 10, r);
  CHECK(b.queries == std::vector<int>{11, 12});
  CHECK(b.randomness_digest == r.digest());
}

TEST_CASE("plurality breaks ties toward the smallest value") {
  CHECK(plurality(std::vector<int>{3, 1, 3, 1}) == 1);
  CHECK(plurality(std::vector<int>{5, 2, 5}) == 5);
  CHECK_THROWS_AS(plurality(std::vector<int>{}), ArityError);
}

TEST_CASE("boost") {
  const IntReduction rr = shifted_square(3);
  SUBCASE("24 t k queries, one round, same output on a correct inner reduction") {
    for (std::size_t t = 1; t <= 3; ++t) {
      const IntReduction b = boost(rr, t);
      CHECK(b.k == 24 * t * 3);
      CHECK(b.randomness_len == 24 * t * rr.randomness_len);
      Oracle<int, int> id([](const int& q, std::uint64_t) { return q; });
      Rng rng(t);
      CHECK(run_reduction(b, 42, id, rng) == 42);
      CHECK(id.stats().rounds == 1);
      CHECK(id.stats().total_queries == 24 * t * 3);
    }
  }
  SUBCASE("run j reads its own slice of r") {
    const IntReduction b = boost(rr, 1);
    Rng rng(4);
    const RandomBits r = RandomBits::draw(b.randomness_len, rng);
    for (std::size_t idx = 0; idx < b.k; ++idx) {
      const std::size_t run = idx / 3;
      CHECK(b.sigma(idx, 5, r) == rr.sigma(idx % 3, 5, r.slice(run * 24, 24)));
    }
  }
  SUBCASE("t = 0 is rejected") { CHECK_THROWS_AS(boost(rr, 0), ArityError); }
}

TEST_CASE("boost bound: exp(-2 (p - 1/2)^2 24 t) <= 2^-t for p >= 2/3") {
  for (int t = 1; t <= 6; ++t) {
    const double hoeffding = std::exp(-2.0 * (1.0 / 6) * (1.0 / 6) * 24.0 * t);
    CHECK(hoeffding <= std::pow(2.0, -t));
    // Exact binomial tail: failure needs at most half of 24t runs correct.
    const int runs = 24 * t;
    double tail = 0;
    for (int s = 0; s <= runs / 2; ++s)
      tail += std::exp(std::lgamma(runs + 1) - std::lgamma(s + 1) - std::lgamma(runs - s + 1) +
                       s * std::log(2.0 / 3) + (runs - s) * std::log(1.0 / 3));
    CHECK(tail <= hoeffding);
  }
}

TEST_CASE("compose") {
  SUBCASE("identity with identity is the identity") {
    auto id = identity_reduction<int, int>("int");
    auto both = compose(id, id);
    CHECK(both.k == 1);
    CHECK(both.randomness_len == 0);
    Oracle<int, int> plus1([](const int& q, std::uint64_t) { return q + 1; });
    Rng rng(1);
    CHECK(run_reduction(both, 9, plus1, rng) == 10);
  }
  SUBCASE("mismatched domains are refused") {
    auto a = identity_reduction<int, int>("a");
    auto b = identity_reduction<int, int>("b");
    CHECK_THROWS_AS(compose(a, b), CompositionError);
  }
  SUBCASE("arity, randomness layout and flat indexing") {
    const ParityReduction outer = parity_outer(6, 3, 0.0);
    const ParitySatReduction inner = parity_inner(6, 0.0);
    const ParitySatReduction c = compose(outer, inner);
    CHECK(c.k == outer.k * inner.k);
    CHECK(c.randomness_len == outer.randomness_len + outer.k * inner.randomness_len);
    Rng rng(5);
    const RandomBits r = RandomBits::draw(c.randomness_len, rng);
    const RandomBits r0 = r.slice(0, outer.randomness_len);
    for (std::size_t j = 0; j < outer.k; ++j) {
      const RandomBits rj = r.slice(outer.randomness_len + j * inner.randomness_len, inner.randomness_len);
      for (std::size_t i = 0; i < inner.k; ++i)
        CHECK(c.sigma(j * inner.k + i, 0b101101, r) == inner.sigma(i, outer.sigma(j, 0b101101, r0), rj));
    }
  }
  SUBCASE("perm-rsr composed with an identity stand-in behaves like perm-rsr") {
    const Modulus m(101);
    const PermReduction rsr = perm_rsr(3, m);
    auto id = identity_reduction<FieldMatrix, FieldElement>("perm");
    auto c = compose(rsr, id);
    CHECK(c.k == rsr.k);
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const FieldMatrix a = random_matrix(3, m, rng);
      const RandomBits r = RandomBits::draw(c.randomness_len, rng);
      PermanentOracle o1 = permanent_oracle(), o2 = permanent_oracle();
      CHECK(run_reduction_on(c, a, r, o1) == run_reduction_on(rsr, a, r, o2));
      CHECK(o1.stats().rounds == 1);
    }
  }
  SUBCASE("composed parity is exact without injected failures") {
    const auto c = compose(parity_outer(10, 5, 0.0), parity_inner(10, 0.0));
    SatOracle sat = sat_oracle();
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      const std::uint64_t x = rng() & 0x3ff;
      CHECK(run_reduction(c, x, sat, rng) == parity(x));
    }
    CHECK(sat.stats().rounds == 200);
  }
}

TEST_CASE("composition failure stays below alpha k + beta") {
  const double alpha = 0.05, beta = 0.05;
  const std::size_t k = 3;
  const auto c = compose(parity_outer(8, k, beta), parity_inner(8, alpha));
  SatOracle sat = sat_oracle();
  Rng rng(10);
  int failures = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t x = rng() & 0xff;
    if (run_reduction(c, x, sat, rng) != parity(x)) ++failures;
  }
  CHECK(static_cast<double>(failures) / trials <= alpha * k + beta + 0.05);
}

TEST_CASE("empirical TV distance") {
  std::vector<std::uint64_t> a{1, 1, 2, 2}, b{1, 1, 2, 2}, c{3, 3, 4, 4};
  CHECK(empirical_tv_distance(a, b).distance == doctest::Approx(0.0));
  CHECK(empirical_tv_distance(a, c).distance == doctest::Approx(1.0));
  std::vector<std::uint64_t> d{1, 2, 2, 2};
  CHECK(empirical_tv_distance(a, d).distance == doctest::Approx(0.25));
  CHECK_FALSE(empirical_tv_distance(a, d).projected);
}

TEST_CASE("marginal distribution probe") {
  const Modulus m(7);
  const PermReduction rsr = perm_rsr(2, m);
  const FieldMatrix x1({{1, 2}, {3, 4}}, m), x2({{0, 6}, {5, 5}}, m);
  SUBCASE("same input: distance within the noise floor") {
    Rng rng(1);
    const DistanceEstimate d = marginal_distribution_probe(rsr, 0, x1, x1, 20000, rng);
    CHECK(d.distance <= 2 * d.noise_floor);
  }
  SUBCASE("broken sigma (query = x) separates distinct inputs") {
    PermReduction broken = rsr;
    broken.sigma = [](std::size_t, const FieldMatrix& x, const RandomBits&) { return x; };
    Rng rng(2);
    CHECK(marginal_distribution_probe(broken, 0, x1, x2, 2000, rng).distance ==
          doctest::Approx(1.0));
  }
  SUBCASE("index out of range") {
    Rng rng(3);
    CHECK_THROWS_AS(marginal_distribution_probe(rsr, 3, x1, x2, 10, rng), ArityError);
  }
}
