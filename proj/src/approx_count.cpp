#include "rrkit/approx_count.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrkit/errors.hpp"

namespace rrkit {

std::vector<XorConstraint> HashLevelPlan::level(std::size_t rep, std::size_t i) const {
  const auto& all = repetitions.at(rep);
  if (i > all.size()) throw ArityError("hash level out of range");
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(i)};
}

HashLevelPlan draw_hash_plan(std::size_t var_count, std::size_t repetitions, Rng& rng) {
  HashLevelPlan plan;
  plan.var_count = var_count;
  plan.repetitions.resize(repetitions);
  for (auto& rep : plan.repetitions) {
    rep.resize(var_count);
    for (auto& xc : rep) {
      std::uint64_t bits = 0;
      for (std::size_t v = 0; v < var_count; ++v) {
        if (v % 64 == 0) bits = rng();
        if ((bits >> (v % 64)) & 1U) xc.variables.push_back(static_cast<int>(v) + 1);
      }
      xc.parity = rng() & 1U;
    }
  }
  return plan;
}

std::vector<CnfFormula> plan_queries(const CnfFormula& f, const HashLevelPlan& plan) {
  if (plan.var_count != f.var_count())
    throw ArityError("hash plan covers " + std::to_string(plan.var_count) +
                     " variables, formula has " + std::to_string(f.var_count()));
  std::vector<CnfFormula> queries;
  queries.reserve(plan.repetition_count() * plan.level_count());
  for (std::size_t rep = 0; rep < plan.repetition_count(); ++rep)
    for (std::size_t i = 0; i < plan.level_count(); ++i)
      queries.push_back(add_xor_constraints(f, plan.level(rep, i)));
  return queries;
}

Rational raw_hash_estimate(const HashLevelPlan& plan, const OracleAnswerSheet<bool>& answers,
                           const Rational& pivot) {
  const std::size_t levels = plan.level_count();
  if (answers.answers.size() != plan.repetition_count() * levels)
    throw ArityError("answer sheet does not cover every (repetition, level)");
  if (plan.repetition_count() == 0) throw ArityError("hash plan has no repetitions");
  std::vector<Rational> estimates;
  estimates.reserve(plan.repetition_count());
  for (std::size_t rep = 0; rep < plan.repetition_count(); ++rep) {
    const std::size_t base = rep * levels;
    long top = -1;
    for (std::size_t i = 0; i < levels; ++i)
      if (answers.answers[base + i]) top = static_cast<long>(i);
    if (!answers.answers[base]) top = -1;
    estimates.push_back(top < 0 ? Rational(0)
                                : pivot * Rational(BigInt(1) << static_cast<unsigned>(top)));
  }
  std::sort(estimates.begin(), estimates.end());
  return estimates[(estimates.size() - 1) / 2];
}

std::size_t repetitions_for(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArityError("delta must lie in (0, 1)");
  return std::max<std::size_t>(1, 8 * static_cast<std::size_t>(std::ceil(std::log(1.0 / delta))));
}

std::size_t derive_amplification(const Rational& g, const Rational& base_factor) {
  if (g <= 1) throw ArityError("approximation factor must exceed 1");
  if (base_factor <= 1) throw ArityError("base factor must exceed 1");
  std::size_t t = 1;
  Rational power = g;
  while (power < base_factor) {
    power *= g;
    ++t;
  }
  return t;
}

Rational ratio_component_factor(const Rational& g) {
  if (g <= 1) throw ArityError("approximation factor must exceed 1");
  const Rational slack = std::min(Rational(g - 1), Rational(3));
  return 1 + slack / 3;
}

namespace {

struct CountJob {
  CnfFormula amplified;
  HashLevelPlan plan;
  std::size_t first_query = 0;
};

Rational finish(const CountJob& job, const std::vector<bool>& all, std::size_t t,
                const ApproxCountOptions& options) {
  const std::size_t n = job.plan.repetition_count() * job.plan.level_count();
  OracleAnswerSheet<bool> sheet;
  sheet.answers.assign(all.begin() + static_cast<std::ptrdiff_t>(job.first_query),
                       all.begin() + static_cast<std::ptrdiff_t>(job.first_query + n));
  return nth_root_floor(raw_hash_estimate(job.plan, sheet, options.pivot), t);
}

}  // namespace

ApproxCountResult approx_count_parallel(const CnfFormula& f, const Rational& g, double delta,
                                        SatOracle& oracle, Rng& rng,
                                        const ApproxCountOptions& options) {
  ApproxCountResult result;
  result.target_factor = g;
  result.confidence = 1.0 - delta;
  result.repetitions = repetitions_for(delta);
  result.amplification = derive_amplification(g, options.base_factor);

  CountJob job{tensor_power(f, result.amplification, options.budget_vars), {}, 0};
  job.plan = draw_hash_plan(job.amplified.var_count(), result.repetitions, rng);
  const std::vector<CnfFormula> queries = plan_queries(job.amplified, job.plan);

  const std::uint64_t rounds_before = oracle.stats().rounds;
  const std::vector<bool> answers = oracle.submit(queries);
  result.oracle_rounds = oracle.stats().rounds - rounds_before;
  result.queries = queries.size();
  result.estimate = finish(job, answers, result.amplification, options);
  return result;
}

ApproxCountResult approx_count_ratio(const CnfFormula& f, const CnfFormula& h, const Rational& g,
                                     double delta, SatOracle& oracle, Rng& rng,
                                     const ApproxCountOptions& options) {
  const CnfFormula both = conjoin(f, h);  // throws ArityError on mismatch
  ApproxCountResult result;
  result.target_factor = g;
  result.confidence = 1.0 - delta;
  result.repetitions = repetitions_for(delta / 2);
  const Rational component = ratio_component_factor(g);
  result.amplification = derive_amplification(component, options.base_factor);
  const std::size_t t = result.amplification;

  CountJob num{tensor_power(both, t, options.budget_vars), {}, 0};
  CountJob den{tensor_power(h, t, options.budget_vars), {}, 0};
  num.plan = draw_hash_plan(num.amplified.var_count(), result.repetitions, rng);
  den.plan = options.shared_plan ? num.plan
                                 : draw_hash_plan(den.amplified.var_count(), result.repetitions, rng);

  std::vector<CnfFormula> queries = plan_queries(num.amplified, num.plan);
  den.first_query = queries.size();
  for (auto& q : plan_queries(den.amplified, den.plan)) queries.push_back(std::move(q));

  const std::uint64_t rounds_before = oracle.stats().rounds;
  const std::vector<bool> answers = oracle.submit(queries);
  result.oracle_rounds = oracle.stats().rounds - rounds_before;
  result.queries = queries.size();

  const Rational denominator_est = finish(den, answers, t, options);
  if (denominator_est == 0)
    throw PostselectionImpossible("post-selection formula is unsatisfiable");
  result.estimate = finish(num, answers, t, options) / denominator_est;
  return result;
}

}  // namespace rrkit
