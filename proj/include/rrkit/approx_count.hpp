#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rrkit/exact_oracles.hpp"
#include "rrkit/formula.hpp"
#include "rrkit/rational.hpp"
#include "rrkit/reduction.hpp"

namespace rrkit {

/// Random parity constraints for every repetition, drawn before any query is
/// asked. Level i of a repetition is the first i of its constraints, so the
/// levels of one repetition are nested.
struct HashLevelPlan {
  std::size_t var_count = 0;
  std::vector<std::vector<XorConstraint>> repetitions;  // each of length var_count

  std::size_t repetition_count() const noexcept { return repetitions.size(); }
  /// Levels 0..var_count.
  std::size_t level_count() const noexcept { return var_count + 1; }
  std::vector<XorConstraint> level(std::size_t rep, std::size_t i) const;
};

/// h(x) = Ax + b with uniform A, b: each variable joins each constraint with
/// probability 1/2 and each parity bit is a fair coin.
HashLevelPlan draw_hash_plan(std::size_t var_count, std::size_t repetitions, Rng& rng);

/// Satisfiability queries for every (repetition, level), repetition-major.
/// Level 0 of each repetition is f itself, the zero-count probe.
std::vector<CnfFormula> plan_queries(const CnfFormula& f, const HashLevelPlan& plan);

/// Per repetition, i* is the largest satisfiable level and the estimate is
/// pivot * 2^i* (0 if level 0 is unsatisfiable). Returns the lower median of
/// the per-repetition estimates.
Rational raw_hash_estimate(const HashLevelPlan& plan, const OracleAnswerSheet<bool>& answers,
                           const Rational& pivot = 1);

/// 8 * ceil(ln(1 / delta)) repetitions, at least 1.
std::size_t repetitions_for(double delta);

/// Smallest t with base_factor^(1/t) <= g, i.e. base_factor <= g^t.
std::size_t derive_amplification(const Rational& g, const Rational& base_factor = 2);

/// Per-count factor used by the ratio estimator: 1 + min(g - 1, 3) / 3, so
/// that its square never exceeds g.
Rational ratio_component_factor(const Rational& g);

struct ApproxCountOptions {
  Rational base_factor = 2;
  Rational pivot = 1;
  std::size_t budget_vars = kDefaultVariableBudget;
  /// Ratio mode: hash numerator and denominator with the same plan.
  bool shared_plan = false;
};

struct ApproxCountResult {
  Rational estimate;
  Rational target_factor;
  double confidence = 0.0;
  std::uint64_t oracle_rounds = 0;
  std::size_t repetitions = 0;
  std::size_t amplification = 1;
  std::uint64_t queries = 0;
};

/// Approximates count(f) to within factor g with probability >= 1 - delta
/// using one round of satisfiability queries. f is amplified to its t-th
/// tensor power (t from derive_amplification), counted to the base factor,
/// and the t-th root taken as a rational with denominator 2^16.
/// Throws ResourceLimit when t * var_count exceeds the variable budget.
ApproxCountResult approx_count_parallel(const CnfFormula& f, const Rational& g, double delta,
                                        SatOracle& oracle, Rng& rng,
                                        const ApproxCountOptions& options = {});

/// Approximates Pr[f | h] = count(f and h) / count(h) to within factor g.
/// Each count gets factor ratio_component_factor(g) and failure budget
/// delta / 2; both counts share one batch. Throws PostselectionImpossible
/// when h is unsatisfiable.
ApproxCountResult approx_count_ratio(const CnfFormula& f, const CnfFormula& h, const Rational& g,
                                     double delta, SatOracle& oracle, Rng& rng,
                                     const ApproxCountOptions& options = {});

}  // namespace rrkit
