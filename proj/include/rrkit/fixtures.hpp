#pragma once

#include <cstddef>
#include <cstdint>

#include "rrkit/formula.hpp"
#include "rrkit/reduction.hpp"

namespace rrkit {

// Synthetic reductions with a configurable, known failure rate, used to
// exercise composition end to end. Instances are n-bit strings in a
// uint64_t and the computed function is parity.

using ParityReduction = RandomReduction<std::uint64_t, std::uint64_t, bool, bool>;
using ParitySatReduction = RandomReduction<std::uint64_t, CnfFormula, bool, bool>;

/// Failure probabilities are quantized to multiples of 2^-16.
inline constexpr std::size_t kFailureCoinBits = 16;

bool parity(std::uint64_t x) noexcept;

/// Self-reduction of n-bit parity with k queries y_j = x XOR mask_j for
/// uniform masks (each y_j is uniform whatever x is). phi takes the majority
/// of b_j XOR parity(mask_j), then flips it with probability beta.
ParityReduction parity_outer(std::size_t n, std::size_t k, double beta);

/// Parity of an n-bit y through n satisfiability queries. With a uniform
/// pad s, query i is the one-variable CNF {v} if bit i of y XOR s is set and
/// the unsatisfiable {v}, {-v} otherwise; phi XORs the answers with
/// parity(s), then flips the result with probability alpha.
ParitySatReduction parity_inner(std::size_t n, double alpha);

}  // namespace rrkit
