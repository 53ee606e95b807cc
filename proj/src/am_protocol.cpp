#include "rrkit/am_protocol.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <thread>

#include "rrkit/errors.hpp"

namespace rrkit {

namespace {

constexpr std::size_t kAdviceChunk = std::size_t{1} << 14;

Advice tally(const AmReduction& rr, const std::vector<std::size_t>& hits, std::size_t samples,
             AdviceProvenance provenance) {
  Advice advice;
  advice.provenance = provenance;
  advice.samples = samples;
  advice.p.reserve(rr.k);
  for (std::size_t i = 0; i < rr.k; ++i)
    advice.p.emplace_back(BigInt(hits[i]), BigInt(samples));
  return advice;
}

void count_hits(const AmReduction& rr, std::uint64_t x, const std::vector<RandomBits>& strings,
                SatOracle& oracle, std::vector<std::size_t>& hits) {
  std::vector<CnfFormula> queries;
  queries.reserve(strings.size() * rr.k);
  for (const auto& r : strings)
    for (auto& q : materialize(rr, x, r).queries) queries.push_back(std::move(q));
  const std::vector<bool> answers = oracle.submit(queries);
  for (std::size_t idx = 0; idx < answers.size(); ++idx)
    if (answers[idx]) ++hits[idx % rr.k];
}

std::vector<bool> claimed_bits(const Transcript& t) {
  std::vector<bool> b;
  b.reserve(t.witnesses.size());
  for (const auto& w : t.witnesses) b.push_back(w.has_value());
  return b;
}

}  // namespace

Advice compute_advice_exact(const AmReduction& rr, std::uint64_t x_ref, SatOracle& oracle) {
  if (rr.randomness_len > kMaxExactAdviceBits)
    throw ResourceLimit(rr.name + ": exact advice needs 2^" + std::to_string(rr.randomness_len) +
                        " random strings, limit is 2^" + std::to_string(kMaxExactAdviceBits));
  const std::uint64_t total = std::uint64_t{1} << rr.randomness_len;
  std::vector<std::size_t> hits(rr.k, 0);
  std::vector<RandomBits> chunk;
  for (std::uint64_t r = 0; r < total; ++r) {
    chunk.push_back(RandomBits::from_integer(r, rr.randomness_len));
    if (chunk.size() == kAdviceChunk || r + 1 == total) {
      count_hits(rr, x_ref, chunk, oracle, hits);
      chunk.clear();
    }
  }
  return tally(rr, hits, static_cast<std::size_t>(total), AdviceProvenance::exact);
}

Advice compute_advice_sampled(const AmReduction& rr, std::uint64_t x_ref, std::size_t samples,
                              SatOracle& oracle, Rng& rng) {
  if (samples == 0) throw ArityError("sampled advice needs at least one sample");
  std::vector<std::size_t> hits(rr.k, 0);
  std::vector<RandomBits> chunk;
  for (std::size_t s = 0; s < samples; ++s) {
    chunk.push_back(RandomBits::draw(rr.randomness_len, rng));
    if (chunk.size() == kAdviceChunk || s + 1 == samples) {
      count_hits(rr, x_ref, chunk, oracle, hits);
      chunk.clear();
    }
  }
  return tally(rr, hits, samples, AdviceProvenance::sampled);
}

std::vector<Transcript> merlin_honest(const std::vector<QueryBatch<CnfFormula>>& batches,
                                      WitnessOracle& oracle) {
  std::vector<CnfFormula> flat;
  for (const auto& b : batches) flat.insert(flat.end(), b.queries.begin(), b.queries.end());
  std::vector<SatVerdict> verdicts = oracle.submit(flat);

  std::vector<Transcript> transcripts(batches.size());
  std::size_t idx = 0;
  for (std::size_t j = 0; j < batches.size(); ++j) {
    auto& w = transcripts[j].witnesses;
    w.reserve(batches[j].queries.size());
    for (std::size_t i = 0; i < batches[j].queries.size(); ++i, ++idx)
      w.push_back(std::move(verdicts[idx].witness));
  }
  return transcripts;
}

AdversarialReply merlin_adversarial(std::uint64_t x, const AmReduction& rr,
                                    const std::vector<RandomBits>& strings,
                                    const std::vector<QueryBatch<CnfFormula>>& batches,
                                    WitnessOracle& oracle, const MerlinStrategy& policy) {
  if (policy.target_index >= rr.k)
    throw PolicyError("target index " + std::to_string(policy.target_index) +
                      " out of range for k = " + std::to_string(rr.k));
  if (policy.lie_budget > strings.size())
    throw PolicyError("lie budget " + std::to_string(policy.lie_budget) + " exceeds m = " +
                      std::to_string(strings.size()));
  AdversarialReply reply{merlin_honest(batches, oracle), 0};
  const std::size_t i = policy.target_index;
  for (std::size_t j = 0; j < strings.size() && reply.lies < policy.lie_budget; ++j) {
    auto& t = reply.transcripts[j];
    if (!t.witnesses[i]) continue;
    std::vector<bool> b = claimed_bits(t);
    if (rr.phi(x, strings[j], b)) continue;
    b[i] = false;
    if (!rr.phi(x, strings[j], b)) continue;
    t.witnesses[i].reset();
    ++reply.lies;
  }
  return reply;
}

std::size_t arthur_string_count(std::size_t k) { return 9 * k * k * k; }

Rational check3_threshold(const Rational& p_i, std::size_t k) {
  const std::size_t m = arthur_string_count(k);
  return p_i * m - Rational(6 * k * k);  // 2 sqrt(k * 9k^3) = 6k^2
}

ProtocolOutcome arthur_verify(std::uint64_t x, const AmReduction& rr, const Advice& advice,
                              const std::vector<RandomBits>& strings,
                              const std::vector<QueryBatch<CnfFormula>>& batches,
                              const std::vector<Transcript>& transcripts) {
  if (advice.p.size() != rr.k)
    throw ArityError("advice has " + std::to_string(advice.p.size()) + " entries, reduction asks " +
                     std::to_string(rr.k) + " queries");
  if (batches.size() != strings.size() || transcripts.size() != strings.size())
    throw ArityError("transcript count does not match the random strings");

  ProtocolOutcome out;
  out.proven.assign(rr.k, 0);
  for (std::size_t j = 0; j < strings.size(); ++j) {
    const auto& w = transcripts[j].witnesses;
    if (w.size() != rr.k) throw ArityError("transcript length differs from k");
    for (std::size_t i = 0; i < rr.k; ++i) {
      if (!w[i]) continue;
      const CnfFormula& q = batches[j].queries[i];
      if (w[i]->size() != q.var_count() || !evaluate(q, *w[i]))
        ++out.invalid_witnesses;
      else
        ++out.proven[i];
    }
    if (!rr.phi(x, strings[j], claimed_bits(transcripts[j]))) ++out.phi_rejections;
  }

  out.check_passed[0] = out.invalid_witnesses == 0;
  out.check_passed[1] = out.phi_rejections == 0;
  out.check_passed[2] = true;
  for (std::size_t i = 0; i < rr.k; ++i) {
    out.thresholds.push_back(check3_threshold(advice.p[i], rr.k));
    if (!(Rational(out.proven[i]) > out.thresholds.back())) out.check_passed[2] = false;
  }
  for (int c = 0; c < 3; ++c)
    if (!out.check_passed[static_cast<std::size_t>(c)]) {
      out.failed_check = c + 1;
      break;
    }
  out.accepted = !out.failed_check.has_value();
  return out;
}

ProtocolOutcome arthur_session(std::uint64_t x, const AmReduction& rr, const Advice& advice,
                               const MerlinStrategy& merlin, WitnessOracle& oracle, Rng& rng) {
  if (advice.p.size() != rr.k) throw ArityError("advice length differs from k");
  const std::size_t m = arthur_string_count(rr.k);
  std::vector<RandomBits> strings;
  std::vector<QueryBatch<CnfFormula>> batches;
  strings.reserve(m);
  batches.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    strings.push_back(RandomBits::draw(rr.randomness_len, rng));
    batches.push_back(materialize(rr, x, strings.back()));
  }

  std::vector<Transcript> transcripts;
  std::size_t lies = 0;
  if (merlin.kind == MerlinKind::honest) {
    transcripts = merlin_honest(batches, oracle);
  } else {
    auto reply = merlin_adversarial(x, rr, strings, batches, oracle, merlin);
    transcripts = std::move(reply.transcripts);
    lies = reply.lies;
  }
  ProtocolOutcome out = arthur_verify(x, rr, advice, strings, batches, transcripts);
  out.lies = lies;
  return out;
}

SessionSummary run_sessions(std::uint64_t x, const AmReduction& rr, const Advice& advice,
                            const MerlinStrategy& merlin, std::size_t sessions,
                            std::uint64_t seed, unsigned workers) {
  std::vector<std::optional<ProtocolOutcome>> outcomes(sessions);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    WitnessOracle oracle = witness_oracle(1);
    try {
      for (std::size_t s = next++; s < sessions; s = next++) {
        Rng rng = make_rng(seed, "session", s);
        outcomes[s] = arthur_session(x, rr, advice, merlin, oracle, rng);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = sessions;
    }
  };
  const std::size_t nthreads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, sessions));
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SessionSummary summary;
  summary.sessions = sessions;
  for (const auto& o : outcomes) {
    if (o->accepted) ++summary.accepted;
    if (o->failed_check) ++summary.failures[static_cast<std::size_t>(*o->failed_check - 1)];
    summary.check1_violations += o->invalid_witnesses;
    summary.lies += o->lies;
  }
  return summary;
}

// ---------------------------------------------------------------------------

namespace {

std::uint32_t coin_value(const ThresholdFixture& fx, std::size_t i, std::uint64_t x,
                         const RandomBits& r) {
  const std::uint64_t mask = (std::uint64_t{1} << fx.coin_bits) - 1;
  const std::uint64_t u = r.read(i * fx.coin_bits, fx.coin_bits);
  const std::uint64_t shift = splitmix64(x * 0x9e3779b97f4a7c15ULL + i);
  return static_cast<std::uint32_t>((u + shift) & mask);
}

void validate(const ThresholdFixture& fx) {
  if (fx.k == 0) throw ArityError("fixture needs k >= 1");
  if (fx.n == 0 || fx.n > 63) throw ArityError("fixture instance length must lie in [1, 63]");
  if (fx.coin_bits == 0 || fx.coin_bits > 16) throw ArityError("fixture coin bits must lie in [1, 16]");
  if (fx.thresholds.size() != fx.k) throw ArityError("fixture needs one threshold per query");
  for (auto t : fx.thresholds)
    if (t > (std::uint32_t{1} << fx.coin_bits)) throw ArityError("fixture threshold exceeds 2^w");
}

}  // namespace

ThresholdFixture default_threshold_fixture(std::size_t k, std::size_t n, bool complement) {
  ThresholdFixture fx;
  fx.k = k;
  fx.n = n;
  fx.complement = complement;
  fx.coin_bits = std::clamp<std::size_t>(k == 0 ? 4 : kMaxExactAdviceBits / k, 1, 4);
  const std::uint32_t full = std::uint32_t{1} << fx.coin_bits;
  for (std::size_t i = 0; i < k; ++i)
    fx.thresholds.push_back(full - static_cast<std::uint32_t>((i * full) / (2 * k)));
  return fx;
}

CnfFormula threshold_query(std::uint32_t value, std::uint32_t threshold, std::size_t bits) {
  auto var = [](std::size_t b) { return static_cast<int>(b) + 1; };
  std::vector<Clause> clauses;
  for (std::size_t b = 0; b < bits; ++b)
    clauses.push_back({((value >> b) & 1U) ? var(b) : -var(b)});
  if (threshold < (std::uint32_t{1} << bits)) {
    // y < T: y must drop below T at the highest bit where they differ.
    // "agrees with T above b" is ruled out literal by literal.
    auto above = [&](std::size_t b) {
      Clause c;
      for (std::size_t l = b + 1; l < bits; ++l)
        c.push_back(((threshold >> l) & 1U) ? -var(l) : var(l));
      return c;
    };
    for (std::size_t b = 0; b < bits; ++b) {
      if ((threshold >> b) & 1U) continue;
      Clause c = above(b);
      c.push_back(-var(b));
      clauses.push_back(std::move(c));
    }
    Clause equal = above(0);
    equal.push_back(((threshold >> 0) & 1U) ? -var(0) : var(0));
    clauses.push_back(std::move(equal));
  }
  return CnfFormula(bits, std::move(clauses));
}

bool fixture_member(const ThresholdFixture& fx, std::uint64_t x) {
  const bool odd = std::popcount(x) % 2 == 1;
  return fx.complement ? !odd : odd;
}

std::uint64_t plant_instance(const ThresholdFixture& fx, bool member, Rng& rng) {
  validate(fx);
  std::uint64_t x = rng() & ((std::uint64_t{1} << fx.n) - 1);
  if (fixture_member(fx, x) != member) x ^= 1U;
  return x;
}

AmReduction threshold_reduction(const ThresholdFixture& fx) {
  validate(fx);
  AmReduction rr;
  rr.name = fx.complement ? "threshold-co" : "threshold";
  rr.input_domain = fx.complement ? "even-parity" : "odd-parity";
  rr.query_domain = "sat";
  rr.k = fx.k;
  rr.randomness_len = fx.k * fx.coin_bits;
  rr.sigma = [fx](std::size_t i, const std::uint64_t& x, const RandomBits& r) {
    return threshold_query(coin_value(fx, i, x, r), fx.thresholds[i], fx.coin_bits);
  };
  rr.phi = [fx](const std::uint64_t& x, const RandomBits& r, const std::vector<bool>& b) {
    bool mismatch = false;
    for (std::size_t i = 0; i < fx.k; ++i)
      if (b[i] != (coin_value(fx, i, x, r) < fx.thresholds[i])) mismatch = true;
    return fixture_member(fx, x) != mismatch;
  };
  return rr;
}

// ---------------------------------------------------------------------------

AuditRow audit_bounds(std::size_t k, std::size_t n) {
  if (k == 0) throw ArityError("audit needs k >= 1");
  AuditRow row;
  row.k = k;
  row.n = n;
  row.m = arthur_string_count(k);
  const BigInt km = BigInt(k) * row.m;
  const BigInt root = sqrt(km);
  const BigInt k2 = BigInt(k) * k;
  row.slack_identity = root * root == km && row.m % k == 0 &&
                       BigInt(row.m / k) - 2 * root == 3 * k2;
  row.chebyshev_per_index = Rational(BigInt(row.m), 4 * km);
  row.chernoff_exponent_is_2k = Rational(2 * (3 * k2) * (3 * k2), BigInt(row.m)) == Rational(2 * k);
  row.chernoff_bound = std::exp(-2.0 * static_cast<double>(k));
  row.chernoff_below_quarter_k = row.chernoff_bound <= 1.0 / (4.0 * static_cast<double>(k));
  const Rational two_n(BigInt(1), BigInt(1) << static_cast<unsigned>(n));
  const Rational third(1, 3);
  row.completeness_bound = Rational(1, 4) + two_n;
  row.soundness_bound = Rational(row.m) * two_n + Rational(BigInt(1), BigInt(4 * k));
  row.completeness_certified = row.completeness_bound < third;
  row.soundness_certified = row.soundness_bound < third;
  return row;
}

AuditReport bound_audit(std::size_t k_lo, std::size_t k_hi, std::size_t n_lo, std::size_t n_hi) {
  if (k_lo == 0 || k_lo > k_hi || n_lo > n_hi) throw ArityError("empty or invalid audit range");
  AuditReport report;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    std::optional<std::size_t> first;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      report.rows.push_back(audit_bounds(k, n));
      if (!first && report.rows.back().certified()) first = n;
    }
    report.min_certified_n.push_back(first);
  }
  return report;
}

}  // namespace rrkit
