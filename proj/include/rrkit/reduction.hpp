#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rrkit/digest.hpp"
#include "rrkit/errors.hpp"
#include "rrkit/oracle.hpp"
#include "rrkit/rng.hpp"

namespace rrkit {

/// A non-adaptive random reduction (sigma, phi, k). sigma(i, x, r) names the
/// i-th query (0-based) for instance x under random string r; phi maps x, r
/// and all k answers to the output. phi only ever sees a finished answer
/// vector, so a reduction cannot ask a second round of questions.
///
/// The domain labels describe what instances and queries mean (for example
/// "perm" for permanent instances, "sat" for CNF satisfiability); compose()
/// refuses to plug a reduction into queries of a different domain.
template <class In, class Query, class Answer, class Out>
struct RandomReduction {
  using Instance = In;
  using QueryType = Query;
  using AnswerType = Answer;
  using Output = Out;
  using Sigma = std::function<Query(std::size_t, const In&, const RandomBits&)>;
  using Phi = std::function<Out(const In&, const RandomBits&, const std::vector<Answer>&)>;

  std::string name;
  std::string input_domain;
  std::string query_domain;
  std::size_t k = 0;
  std::size_t randomness_len = 0;
  Sigma sigma;
  Phi phi;
};

template <class Query>
struct QueryBatch {
  std::vector<Query> queries;
  std::uint64_t instance_digest = 0;
  std::uint64_t randomness_digest = 0;
};

template <class Answer>
struct OracleAnswerSheet {
  std::vector<Answer> answers;
};

/// Builds the full batch for (x, r) before any oracle is consulted.
template <class In, class Q, class A, class Out>
QueryBatch<Q> materialize(const RandomReduction<In, Q, A, Out>& rr, const In& x,
                          const RandomBits& r) {
  if (r.size() != rr.randomness_len)
    throw ArityError(rr.name + ": random string has " + std::to_string(r.size()) +
                     " bits, reduction consumes " + std::to_string(rr.randomness_len));
  QueryBatch<Q> batch;
  batch.queries.reserve(rr.k);
  for (std::size_t i = 0; i < rr.k; ++i) batch.queries.push_back(rr.sigma(i, x, r));
  batch.instance_digest = canonical_hash(x);
  batch.randomness_digest = r.digest();
  return batch;
}

/// One invocation on a fixed random string: one batch, one oracle round.
template <class In, class Q, class A, class Out>
Out run_reduction_on(const RandomReduction<In, Q, A, Out>& rr, const In& x, const RandomBits& r,
                     Oracle<Q, A>& oracle) {
  const QueryBatch<Q> batch = materialize(rr, x, r);
  const OracleAnswerSheet<A> sheet{oracle.submit(batch.queries)};
  return rr.phi(x, r, sheet.answers);
}

/// Draws r (randomness_len bits) from `rng`, then runs as above.
template <class In, class Q, class A, class Out>
Out run_reduction(const RandomReduction<In, Q, A, Out>& rr, const In& x, Oracle<Q, A>& oracle,
                  Rng& rng) {
  const RandomBits r = RandomBits::draw(rr.randomness_len, rng);
  return run_reduction_on(rr, x, r, oracle);
}

/// k = 1, no randomness: asks the oracle about x itself.
template <class T, class A>
RandomReduction<T, T, A, A> identity_reduction(const std::string& domain) {
  RandomReduction<T, T, A, A> rr;
  rr.name = "identity";
  rr.input_domain = domain;
  rr.query_domain = domain;
  rr.k = 1;
  rr.randomness_len = 0;
  rr.sigma = [](std::size_t, const T& x, const RandomBits&) { return x; };
  rr.phi = [](const T&, const RandomBits&, const std::vector<A>& answers) { return answers[0]; };
  return rr;
}

/// Plurality of `values`; ties go to the smallest value.
template <class Out>
Out plurality(const std::vector<Out>& values) {
  if (values.empty()) throw ArityError("plurality of an empty list");
  std::map<Out, std::size_t> tally;
  for (const auto& v : values) ++tally[v];
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

inline constexpr std::size_t kBoostRunsPerUnit = 24;

/// 24 t independent copies of rr in one combined batch of 24 t k queries,
/// answered by plurality vote. Run j reads its own slice of the random
/// string. Only sound for single-valued outputs (counting functions).
template <class In, class Q, class A, class Out>
RandomReduction<In, Q, A, Out> boost(const RandomReduction<In, Q, A, Out>& rr, std::size_t t) {
  if (t == 0) throw ArityError("boost: t must be positive");
  const std::size_t runs = kBoostRunsPerUnit * t;
  const std::size_t k = rr.k;
  const std::size_t len = rr.randomness_len;

  RandomReduction<In, Q, A, Out> out;
  out.name = rr.name + "^boost" + std::to_string(t);
  out.input_domain = rr.input_domain;
  out.query_domain = rr.query_domain;
  out.k = runs * k;
  out.randomness_len = runs * len;
  out.sigma = [rr, k, len](std::size_t idx, const In& x, const RandomBits& r) {
    const std::size_t run = idx / k;
    return rr.sigma(idx % k, x, r.slice(run * len, len));
  };
  out.phi = [rr, runs, k, len](const In& x, const RandomBits& r, const std::vector<A>& answers) {
    std::vector<Out> outputs;
    outputs.reserve(runs);
    for (std::size_t run = 0; run < runs; ++run) {
      std::vector<A> part(answers.begin() + static_cast<std::ptrdiff_t>(run * k),
                          answers.begin() + static_cast<std::ptrdiff_t>((run + 1) * k));
      outputs.push_back(rr.phi(x, r.slice(run * len, len), part));
    }
    return plurality(outputs);
  };
  return out;
}

/// Plugs `inner` (a reduction answering outer's query language through its
/// own oracle) into every query of `outer`. The combined random string is
/// r # r_1 # ... # r_k; flat query j * inner.k + i is
///   inner.sigma(i, outer.sigma(j, x, r), r_j)
/// and phi' feeds the k inner outputs to outer.phi. Throws CompositionError
/// if outer's query domain is not inner's input domain.
template <class In, class QB, class AB, class Out, class Q, class A>
RandomReduction<In, Q, A, Out> compose(const RandomReduction<In, QB, AB, Out>& outer,
                                       const RandomReduction<QB, Q, A, AB>& inner) {
  if (outer.query_domain != inner.input_domain)
    throw CompositionError("cannot answer '" + outer.query_domain + "' queries of " + outer.name +
                           " with " + inner.name + ", which solves '" + inner.input_domain + "'");
  const std::size_t k = outer.k;
  const std::size_t m = inner.k;
  const std::size_t len0 = outer.randomness_len;
  const std::size_t len1 = inner.randomness_len;

  RandomReduction<In, Q, A, Out> out;
  out.name = outer.name + "*" + inner.name;
  out.input_domain = outer.input_domain;
  out.query_domain = inner.query_domain;
  out.k = k * m;
  out.randomness_len = len0 + k * len1;
  out.sigma = [outer, inner, m, len0, len1](std::size_t idx, const In& x, const RandomBits& r) {
    const std::size_t j = idx / m;
    const auto y = outer.sigma(j, x, r.slice(0, len0));
    return inner.sigma(idx % m, y, r.slice(len0 + j * len1, len1));
  };
  out.phi = [outer, inner, k, m, len0, len1](const In& x, const RandomBits& r,
                                             const std::vector<A>& answers) {
    const RandomBits r0 = r.slice(0, len0);
    std::vector<AB> inner_outputs;
    inner_outputs.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      const RandomBits rj = r.slice(len0 + j * len1, len1);
      const auto y = outer.sigma(j, x, r0);
      std::vector<A> part(answers.begin() + static_cast<std::ptrdiff_t>(j * m),
                          answers.begin() + static_cast<std::ptrdiff_t>((j + 1) * m));
      inner_outputs.push_back(inner.phi(y, rj, part));
    }
    return outer.phi(x, r0, inner_outputs);
  };
  return out;
}

struct DistanceEstimate {
  double distance = 0.0;
  /// Number of histogram cells the distance was computed over.
  std::size_t cells = 0;
  /// True when queries were bucketed because they took too many values.
  bool projected = false;
  /// Expected distance between two equally sized samples of one distribution
  /// spread evenly over `cells` cells: sqrt(cells / (pi * samples)).
  double noise_floor = 0.0;
};

inline constexpr std::size_t kDefaultProbeCells = 64;

/// Empirical total-variation distance between two equally sized samples of
/// hashed values. If more than `max_cells` distinct hashes occur, both
/// samples are projected onto `max_cells` buckets first.
DistanceEstimate empirical_tv_distance(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b,
                                       std::size_t max_cells = kDefaultProbeCells);

/// Estimates the distance between the distributions of sigma(i, x1, r) and
/// sigma(i, x2, r) over independent uniform r. Callers pass instances of
/// equal size.
template <class In, class Q, class A, class Out>
DistanceEstimate marginal_distribution_probe(const RandomReduction<In, Q, A, Out>& rr,
                                             std::size_t i, const In& x1, const In& x2,
                                             std::size_t samples, Rng& rng,
                                             std::size_t max_cells = kDefaultProbeCells) {
  if (i >= rr.k) throw ArityError("probe index out of range");
  std::vector<std::uint64_t> h1, h2;
  h1.reserve(samples);
  h2.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    h1.push_back(canonical_hash(rr.sigma(i, x1, RandomBits::draw(rr.randomness_len, rng))));
    h2.push_back(canonical_hash(rr.sigma(i, x2, RandomBits::draw(rr.randomness_len, rng))));
  }
  return empirical_tv_distance(h1, h2, max_cells);
}

}  // namespace rrkit
