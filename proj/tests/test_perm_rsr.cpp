#include <doctest.h>

#include <cmath>
#include <vector>

#include "rrkit/digest.hpp"
#include "rrkit/errors.hpp"
#include "rrkit/exact_oracles.hpp"
#include "rrkit/perm_rsr.hpp"

using namespace rrkit;

TEST_CASE("shape of the reduction") {
  const PermReduction rr = perm_rsr(4, Modulus(101));
  CHECK(rr.k == 5);
  CHECK(rr.randomness_len == 16 * kBitsPerEntry);
  CHECK(rr.input_domain == "perm");
  CHECK(rr.query_domain == "perm");
  CHECK_THROWS_AS(perm_rsr(4, Modulus(5)), FieldTooSmall);
  CHECK_NOTHROW(perm_rsr(3, Modulus(5)));
  CHECK_THROWS_AS(perm_rsr(0, Modulus(5)), ArityError);
}

TEST_CASE("query i is A + (i + 1) R") {
  const Modulus m(101);
  const PermReduction rr = perm_rsr(3, m);
  Rng rng(1);
  const FieldMatrix a = random_matrix(3, m, rng);
  const RandomBits r = RandomBits::draw(rr.randomness_len, rng);
  const FieldMatrix dir = direction_from_bits(r, 3, m);
  for (std::size_t i = 0; i < rr.k; ++i)
    CHECK(rr.sigma(i, a, r) == a + dir.scaled(FieldElement(static_cast<std::int64_t>(i + 1), m)));
  CHECK_THROWS_AS(rr.sigma(0, FieldMatrix(2, m), r), ArityError);
}

TEST_CASE("1 x 1 instances are recovered exactly by the linear case") {
  const Modulus m(7);
  const PermReduction rr = perm_rsr(1, m);
  Rng rng(2);
  for (int a = 0; a < 7; ++a) {
    PermanentOracle oracle = permanent_oracle();
    CHECK(run_reduction(rr, FieldMatrix({{a}}, m), oracle, rng).value() == static_cast<std::uint32_t>(a));
  }
}

TEST_CASE("exact oracle: 4 x 4 over GF(101) always recovers the permanent") {
  const Modulus m(101);
  const PermReduction rr = perm_rsr(4, m);
  PermanentOracle oracle = permanent_oracle();
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const FieldMatrix a = random_matrix(4, m, rng);
    CHECK(run_reduction(rr, a, oracle, rng) == permanent_exact(a));
  }
  CHECK(oracle.stats().rounds == 300);
  CHECK(oracle.stats().max_batch == 5);
}

TEST_CASE("perm(A + tR) has degree at most n: an extra point lies on the interpolant") {
  const Modulus m(101);
  Rng rng(4);
  for (std::size_t n = 1; n <= 5; ++n) {
    const FieldMatrix a = random_matrix(n, m, rng);
    const FieldMatrix dir = random_matrix(n, m, rng);
    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (std::size_t i = 1; i <= n + 1; ++i) {
      const FieldElement t(static_cast<std::int64_t>(i), m);
      pts.emplace_back(t, permanent_exact(a + dir.scaled(t)));
    }
    const FieldPolynomial q = lagrange_interpolate(pts);
    CHECK(q.degree() <= static_cast<long>(n));
    const FieldElement extra(static_cast<std::int64_t>(n + 2), m);
    CHECK(evaluate(q, extra) == permanent_exact(a + dir.scaled(extra)));
    CHECK(evaluate(q, FieldElement::zero(m)) == permanent_exact(a));
  }
}

TEST_CASE("each query is uniform over 2 x 2 matrices mod 7") {
  const Modulus m(7);
  const PermReduction rr = perm_rsr(2, m);
  const FieldMatrix x({{1, 2}, {3, 4}}, m);
  Rng rng(5);
  const std::size_t samples = 100000;
  for (std::size_t i = 0; i < rr.k; ++i) {
    std::vector<std::uint64_t> queries, uniform;
    for (std::size_t s = 0; s < samples; ++s) {
      queries.push_back(canonical_hash(rr.sigma(i, x, RandomBits::draw(rr.randomness_len, rng))));
      uniform.push_back(canonical_hash(random_matrix(2, m, rng)));
    }
    const DistanceEstimate d = empirical_tv_distance(queries, uniform);
    CHECK(d.distance < 0.05);
  }
}

TEST_CASE("success curve") {
  const Modulus m(101);
  SUBCASE("epsilon 0 always succeeds") {
    CHECK(perm_rsr_success_curve(4, m, 0.0, 500, 1).rate() == 1.0);
  }
  SUBCASE("epsilon 0.05, n = 4: rate near 0.95^5") {
    const double rate = perm_rsr_success_curve(4, m, 0.05, 10000, 2).rate();
    CHECK(std::abs(rate - std::pow(0.95, 5)) <= 0.03);
  }
  SUBCASE("below 2/3 raw success, boosting with t = 5 restores >= 1 - 2^-5") {
    const double eps = 0.1;
    REQUIRE(std::pow(1 - eps, 5) < 2.0 / 3);
    CHECK(perm_rsr_success_curve(4, m, eps, 1000, 3, 5).rate() >= 1 - std::pow(2.0, -5));
  }
  SUBCASE("results do not depend on the worker count") {
    CHECK(perm_rsr_success_curve(3, m, 0.2, 300, 9, 0, 1).successes ==
          perm_rsr_success_curve(3, m, 0.2, 300, 9, 0, 4).successes);
  }
}
