#include <doctest.h>

#include <random>
#include <vector>

#include "rrkit/errors.hpp"
#include "rrkit/field.hpp"
#include "rrkit/matrix_json.hpp"
#include "rrkit/rng.hpp"

using namespace rrkit;

namespace {

FieldElement fe(std::int64_t v, Modulus m) { return FieldElement(v, m); }

FieldElement random_element(Modulus m, Rng& rng) {
  return fe(static_cast<std::int64_t>(rng() % m.value()), m);
}

}  // namespace

TEST_CASE("modulus accepts primes and rejects everything else") {
  CHECK(Modulus(7).value() == 7);
  CHECK(Modulus(101).value() == 101);
  CHECK(Modulus(4294967291ULL).value() == 4294967291U);  // largest prime below 2^32
  CHECK_THROWS_AS(Modulus(1), NotPrime);
  CHECK_THROWS_AS(Modulus(9), NotPrime);
  CHECK_THROWS_AS(Modulus(0), NotPrime);
  CHECK_THROWS_AS(Modulus(1ULL << 32), NotPrime);
}

TEST_CASE("default modulus is the smallest prime at least max(n + 2, 257)") {
  CHECK(default_modulus(1).value() == 257);
  CHECK(default_modulus(4).value() == 257);
  CHECK(default_modulus(255).value() == 257);
  CHECK(default_modulus(256).value() == 263);
  CHECK(next_prime(258) == 263);
}

TEST_CASE("elements are reduced into [0, p)") {
  const Modulus m(7);
  CHECK(fe(-1, m).value() == 6);
  CHECK(fe(15, m).value() == 1);
  CHECK(fe(-14, m).value() == 0);
}

TEST_CASE("field_inverse") {
  SUBCASE("inverse of 1 is 1 in every field") {
    for (std::uint64_t p : {2ULL, 3ULL, 7ULL, 101ULL, 257ULL})
      CHECK(field_inverse(fe(1, Modulus(p))).value() == 1);
  }
  SUBCASE("inverse of 2 mod 7 is 4") { CHECK(field_inverse(fe(2, Modulus(7))).value() == 4); }
  SUBCASE("zero has no inverse") { CHECK_THROWS_AS(field_inverse(fe(0, Modulus(7))), NoInverse); }
}

TEST_CASE("mixing moduli is an error") {
  CHECK_THROWS_AS(fe(1, Modulus(7)) + fe(1, Modulus(11)), ModulusMismatch);
  CHECK_THROWS_AS(fe(1, Modulus(7)) * fe(1, Modulus(11)), ModulusMismatch);
}

TEST_CASE("field axioms on sampled triples") {
  Rng rng(11);
  for (std::uint64_t p : {7ULL, 101ULL, 257ULL}) {
    const Modulus m(p);
    for (int trial = 0; trial < 500; ++trial) {
      const FieldElement a = random_element(m, rng), b = random_element(m, rng),
                         c = random_element(m, rng);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == FieldElement::zero(m));
      CHECK(a + (-a) == FieldElement::zero(m));
      if (!a.is_zero()) CHECK(a * field_inverse(a) == FieldElement::one(m));
    }
  }
}

TEST_CASE("pow agrees with repeated multiplication") {
  const Modulus m(101);
  const FieldElement a = fe(3, m);
  FieldElement acc = FieldElement::one(m);
  for (std::uint64_t e = 0; e < 20; ++e) {
    CHECK(a.pow(e) == acc);
    acc *= a;
  }
  CHECK(a.pow(100) == FieldElement::one(m));  // Fermat
}

TEST_CASE("lagrange_interpolate") {
  const Modulus m(7);
  using Point = std::pair<FieldElement, FieldElement>;

  SUBCASE("a single node gives the constant polynomial") {
    const std::vector<Point> pts{{fe(0, m), fe(5, m)}};
    const auto poly = lagrange_interpolate(pts);
    CHECK(poly.degree() == 0);
    CHECK(poly.coefficients()[0].value() == 5);
  }
  SUBCASE("(1,2), (2,3) mod 7 gives t + 1") {
    const std::vector<Point> pts{{fe(1, m), fe(2, m)}, {fe(2, m), fe(3, m)}};
    const auto poly = lagrange_interpolate(pts);
    CHECK(poly == FieldPolynomial({fe(1, m), fe(1, m)}, m));
  }
  SUBCASE("duplicate or missing nodes are rejected") {
    const std::vector<Point> dup{{fe(1, m), fe(2, m)}, {fe(8, m), fe(3, m)}};
    CHECK_THROWS_AS(lagrange_interpolate(dup), DegenerateNodes);
    CHECK_THROWS_AS(lagrange_interpolate(std::vector<Point>{}), DegenerateNodes);
  }
}

TEST_CASE("evaluate") {
  const Modulus m(7);
  CHECK(evaluate(FieldPolynomial(m), fe(3, m)).value() == 0);
  CHECK(evaluate(FieldPolynomial({fe(1, m), fe(1, m)}, m), fe(6, m)).value() == 0);
  for (int t = 0; t < 7; ++t) CHECK(evaluate(FieldPolynomial({fe(4, m)}, m), fe(t, m)).value() == 4);
}

TEST_CASE("polynomials trim trailing zeros") {
  const Modulus m(7);
  CHECK(FieldPolynomial({fe(0, m), fe(0, m)}, m).is_zero());
  CHECK(FieldPolynomial({fe(0, m), fe(0, m)}, m).degree() == -1);
  CHECK(FieldPolynomial({fe(2, m), fe(7, m)}, m).degree() == 0);
}

TEST_CASE("interpolating d + 1 evaluations recovers random polynomials of degree <= 8") {
  Rng rng(7);
  for (std::uint64_t p : {7ULL, 101ULL, 257ULL}) {
    const Modulus m(p);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t d = rng() % std::min<std::uint64_t>(9, p - 1);
      std::vector<FieldElement> coeffs;
      for (std::size_t i = 0; i <= d; ++i) coeffs.push_back(random_element(m, rng));
      const FieldPolynomial poly(coeffs, m);
      std::vector<std::pair<FieldElement, FieldElement>> pts;
      for (std::size_t i = 0; i <= d; ++i) {
        const FieldElement t = fe(static_cast<std::int64_t>(i), m);
        pts.emplace_back(t, evaluate(poly, t));
      }
      const auto back = lagrange_interpolate(pts);
      CHECK(back == poly);
      for (const auto& [t, y] : pts) CHECK(evaluate(back, t) == y);
    }
  }
}

TEST_CASE("matrices") {
  const Modulus m(101);
  const FieldMatrix a({{1, 2}, {3, 4}}, m);
  CHECK(a.dimension() == 2);
  CHECK(a.at(1, 0).value() == 3);
  CHECK((a + a).at(1, 1).value() == 8);
  CHECK(a.scaled(fe(-1, m)).at(0, 0).value() == 100);
  CHECK(FieldMatrix::identity(3, m).at(2, 2).value() == 1);
  CHECK_THROWS_AS(FieldMatrix({{1, 2}, {3}}, m), ArityError);
  CHECK_THROWS_AS(a + FieldMatrix(2, Modulus(7)), ModulusMismatch);
}

TEST_CASE("matrix JSON round trip and errors") {
  const FieldMatrix a = parse_matrix_json(R"({"modulus": 101, "entries": [[1, -2], [3, 400]]})");
  CHECK(a.at(0, 1).value() == 99);
  CHECK(a.at(1, 1).value() == 400 % 101);
  CHECK(parse_matrix_json(matrix_to_json(a)) == a);
  CHECK(parse_matrix_json(R"({"entries": [[5]]})").modulus().value() == 257);
  CHECK_THROWS_AS(parse_matrix_json("{"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"modulus": 100, "entries": [[1]]})"), NotPrime);
  CHECK_THROWS_AS(parse_matrix_json(R"({"modulus": 7, "entries": [[1, 2]]})"), ArityError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"modulus": 7, "entries": [[1.5]]})"), ParseError);
}
