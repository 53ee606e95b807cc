#include "rrkit/perm_rsr.hpp"

#include <string>
#include <utility>
#include <vector>

#include "rrkit/errors.hpp"

namespace rrkit {

FieldMatrix direction_from_bits(const RandomBits& r, std::size_t n, Modulus modulus) {
  FieldMatrix dir(n, modulus);
  const std::uint64_t p = modulus.value();
  for (std::size_t e = 0; e < n * n; ++e) {
    const std::uint64_t word = r.read(e * kBitsPerEntry, kBitsPerEntry);
    dir.set(e / n, e % n, FieldElement(static_cast<std::int64_t>(word % p), modulus));
  }
  return dir;
}

PermReduction perm_rsr(std::size_t n, Modulus modulus) {
  if (n == 0) throw ArityError("perm_rsr: dimension must be positive");
  if (modulus.value() < n + 2)
    throw FieldTooSmall("perm_rsr on " + std::to_string(n) + "x" + std::to_string(n) +
                        " needs p >= " + std::to_string(n + 2) + ", got " +
                        std::to_string(modulus.value()));
  PermReduction rr;
  rr.name = "perm-rsr";
  rr.input_domain = "perm";
  rr.query_domain = "perm";
  rr.k = n + 1;
  rr.randomness_len = n * n * kBitsPerEntry;
  rr.sigma = [n, modulus](std::size_t i, const FieldMatrix& a, const RandomBits& r) {
    if (a.dimension() != n || a.modulus() != modulus)
      throw ArityError("perm_rsr instance does not match the reduction's shape or field");
    const FieldElement t(static_cast<std::int64_t>(i + 1), modulus);
    return a + direction_from_bits(r, n, modulus).scaled(t);
  };
  rr.phi = [n, modulus](const FieldMatrix&, const RandomBits&,
                        const std::vector<FieldElement>& answers) {
    std::vector<std::pair<FieldElement, FieldElement>> points;
    points.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
      points.emplace_back(FieldElement(static_cast<std::int64_t>(i + 1), modulus), answers[i]);
    return evaluate(lagrange_interpolate(points), FieldElement::zero(modulus));
  };
  return rr;
}

FieldMatrix random_matrix(std::size_t n, Modulus modulus, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> entry(0, modulus.value() - 1);
  FieldMatrix m(n, modulus);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, FieldElement(entry(rng), modulus));
  return m;
}

SuccessCurvePoint perm_rsr_success_curve(std::size_t n, Modulus modulus, double epsilon,
                                         std::size_t trials, std::uint64_t seed,
                                         std::size_t boost_t, unsigned workers) {
  const PermReduction base = perm_rsr(n, modulus);
  const PermReduction rr = boost_t == 0 ? base : boost(base, boost_t);
  PermanentOracle oracle = faulty_oracle(permanent_oracle(workers), epsilon,
                                         derive_seed(seed, "fault"));
  Rng matrices = make_rng(seed, "matrix");
  Rng strings = make_rng(seed, "r");
  SuccessCurvePoint point;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const FieldMatrix a = random_matrix(n, modulus, matrices);
    const FieldElement got = run_reduction(rr, a, oracle, strings);
    ++point.trials;
    if (got == permanent_exact(a)) ++point.successes;
  }
  return point;
}

}  // namespace rrkit
