#pragma once

#include <cstddef>
#include <cstdint>

#include "rrkit/exact_oracles.hpp"
#include "rrkit/field.hpp"
#include "rrkit/reduction.hpp"

namespace rrkit {

using PermReduction = RandomReduction<FieldMatrix, FieldMatrix, FieldElement, FieldElement>;

/// Bits of r consumed per matrix entry of the random direction R. Each entry
/// is a 64-bit word reduced mod p, so its distance from uniform is below
/// p / 2^64.
inline constexpr std::size_t kBitsPerEntry = 64;

/// Random-line self-reduction of the n x n permanent over GF(p): with R read
/// from r, query i (0-based) is A + (i+1) R, and phi interpolates the
/// degree-n polynomial q(t) = perm(A + tR) through the n+1 answers and
/// returns q(0) = perm(A). Every query is uniform on its own, whatever A is.
///
/// Throws FieldTooSmall if p < n + 2 (n+1 distinct nonzero points needed).
PermReduction perm_rsr(std::size_t n, Modulus modulus);

/// The random direction R encoded in r.
FieldMatrix direction_from_bits(const RandomBits& r, std::size_t n, Modulus modulus);

struct SuccessCurvePoint {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// Fraction of trials in which perm_rsr (boosted by `boost_t` when nonzero)
/// recovers the permanent of a fresh random n x n matrix through a
/// faulty_oracle(epsilon). Seeds: matrices from "matrix", r from "r", faults
/// from "fault", all split from `seed`.
SuccessCurvePoint perm_rsr_success_curve(std::size_t n, Modulus modulus, double epsilon,
                                         std::size_t trials, std::uint64_t seed,
                                         std::size_t boost_t = 0, unsigned workers = 1);

FieldMatrix random_matrix(std::size_t n, Modulus modulus, Rng& rng);

}  // namespace rrkit
