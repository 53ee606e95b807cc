#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rrkit/field.hpp"
#include "rrkit/formula.hpp"
#include "rrkit/oracle.hpp"

namespace rrkit {

inline constexpr std::size_t kMaxPermanentDimension = 20;
inline constexpr std::size_t kMaxCountVariables = 26;

/// Ryser's formula with Gray-code subset updates, O(2^n n) field operations.
/// Throws ResourceLimit for n > kMaxPermanentDimension.
FieldElement permanent_exact(const FieldMatrix& a);

/// Number of satisfying assignments by enumeration. Throws ResourceLimit for
/// more than kMaxCountVariables variables.
std::uint64_t count_exact(const CnfFormula& f);

struct SatVerdict {
  bool satisfiable = false;
  std::optional<Assignment> witness;  // present iff satisfiable
};

/// DPLL with two-watched-literal unit propagation, chronological
/// backtracking and a fixed branching rule: the lowest-index unassigned
/// variable, tried false first. Deterministic in the formula.
SatVerdict sat_decide(const CnfFormula& f);

using PermanentOracle = Oracle<FieldMatrix, FieldElement>;
using CountOracle = Oracle<CnfFormula, std::uint64_t>;
using SatOracle = Oracle<CnfFormula, bool>;
using WitnessOracle = Oracle<CnfFormula, SatVerdict>;

PermanentOracle permanent_oracle(unsigned workers = 1);
CountOracle count_oracle(unsigned workers = 1);
SatOracle sat_oracle(unsigned workers = 1);
WitnessOracle witness_oracle(unsigned workers = 1);

/// Wrong-answer models for the faulty oracle.
struct Corruption {
  /// Adds a uniformly random nonzero field element.
  void operator()(FieldElement& v, Rng& rng) const;
  /// Flips the verdict.
  void operator()(bool& v, Rng& rng) const;
  /// Adds a uniformly random offset in [1, 2^16].
  void operator()(std::uint64_t& v, Rng& rng) const;
  /// Flips the verdict; a claimed "satisfiable" carries no witness.
  void operator()(SatVerdict& v, Rng& rng) const;
};

template <class Query, class Answer>
Oracle<Query, Answer> faulty_oracle(const Oracle<Query, Answer>& inner, double epsilon,
                                    std::uint64_t seed) {
  return faulty_oracle(inner, epsilon, seed, Corruption{});
}

}  // namespace rrkit
