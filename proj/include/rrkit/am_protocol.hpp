#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrkit/exact_oracles.hpp"
#include "rrkit/rational.hpp"
#include "rrkit/reduction.hpp"

namespace rrkit {

// Simulation of the Arthur-Merlin protocol with advice that certifies
// membership for any language randomly reducible to SAT. Instances are bit
// strings of length n held in a uint64_t.

using AmReduction = RandomReduction<std::uint64_t, CnfFormula, bool, bool>;

inline constexpr std::size_t kMaxExactAdviceBits = 22;

enum class AdviceProvenance { exact, sampled };

/// p_i = Pr_r[SAT(sigma(i, x, r))]. Identical for every x of a given length
/// when the reduction's query marginals are input-independent.
struct Advice {
  std::vector<Rational> p;
  AdviceProvenance provenance = AdviceProvenance::exact;
  std::size_t samples = 0;  // number of r values examined
};

/// Enumerates every r. Throws ResourceLimit above kMaxExactAdviceBits.
Advice compute_advice_exact(const AmReduction& rr, std::uint64_t x_ref, SatOracle& oracle);
Advice compute_advice_sampled(const AmReduction& rr, std::uint64_t x_ref, std::size_t samples,
                              SatOracle& oracle, Rng& rng);

/// Merlin's reply for one random string: per query a witness, or nullopt
/// for NIL ("this query is unsatisfiable").
struct Transcript {
  std::vector<std::optional<Assignment>> witnesses;
};

enum class MerlinKind { honest, adversarial };

/// The adversary only ever denies satisfiable queries at `target_index`;
/// it cannot forge witnesses because Arthur re-checks them.
struct MerlinStrategy {
  MerlinKind kind = MerlinKind::honest;
  std::size_t target_index = 0;
  std::size_t lie_budget = 0;
};

std::vector<Transcript> merlin_honest(const std::vector<QueryBatch<CnfFormula>>& batches,
                                      WitnessOracle& oracle);

struct AdversarialReply {
  std::vector<Transcript> transcripts;
  std::size_t lies = 0;
};

/// Honest transcripts, except that for each j where phi would reject the
/// honest answers, a satisfiable query at the target index is answered NIL
/// if that makes phi accept, until the lie budget is spent. Throws
/// PolicyError if the target index is out of range.
AdversarialReply merlin_adversarial(std::uint64_t x, const AmReduction& rr,
                                    const std::vector<RandomBits>& strings,
                                    const std::vector<QueryBatch<CnfFormula>>& batches,
                                    WitnessOracle& oracle, const MerlinStrategy& policy);

/// m = 9 k^3.
std::size_t arthur_string_count(std::size_t k);
/// p_i m - 2 sqrt(k m); with m = 9k^3 the root is exactly 3k^2.
Rational check3_threshold(const Rational& p_i, std::size_t k);

struct ProtocolOutcome {
  bool accepted = false;
  std::optional<int> failed_check;  // first failing check, 1..3
  std::array<bool, 3> check_passed{};
  std::size_t invalid_witnesses = 0;      // check (1) violations
  std::size_t phi_rejections = 0;         // strings where check (2) failed
  std::vector<std::size_t> proven;        // Z_i: proven-satisfiable queries per index
  std::vector<Rational> thresholds;       // check (3) bound per index, Z_i must exceed it
  std::size_t lies = 0;                   // reported by the simulator, unknown to Arthur
};

/// Arthur's three checks on a finished exchange:
///  (1) every non-NIL witness satisfies its query;
///  (2) phi(x, r_j, b_j) accepts for every j, b_ij = [w_ij is not NIL];
///  (3) for every i, strictly more than p_i m - 2 sqrt(k m) queries proven.
ProtocolOutcome arthur_verify(std::uint64_t x, const AmReduction& rr, const Advice& advice,
                              const std::vector<RandomBits>& strings,
                              const std::vector<QueryBatch<CnfFormula>>& batches,
                              const std::vector<Transcript>& transcripts);

/// One full session: Arthur draws m = 9k^3 random strings, Merlin replies,
/// Arthur checks.
ProtocolOutcome arthur_session(std::uint64_t x, const AmReduction& rr, const Advice& advice,
                               const MerlinStrategy& merlin, WitnessOracle& oracle, Rng& rng);

struct SessionSummary {
  std::size_t sessions = 0;
  std::size_t accepted = 0;
  std::array<std::size_t, 3> failures{};  // sessions whose first failing check was 1, 2, 3
  std::size_t check1_violations = 0;      // total invalid witnesses seen
  std::size_t lies = 0;
  double accept_rate() const {
    return sessions == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(sessions);
  }
};

/// Session s draws from make_rng(seed, "session", s).
SessionSummary run_sessions(std::uint64_t x, const AmReduction& rr, const Advice& advice,
                            const MerlinStrategy& merlin, std::size_t sessions,
                            std::uint64_t seed, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Threshold fixture.
//
// The planted language is L(x) = [popcount(x) is odd] (or its complement).
// Query i carries a coin c_i = [v_i < T_i] where v_i = (u_i + s_i(x)) mod 2^w,
// u_i is w fresh bits of r and s_i(x) a fixed shift derived from x. The query
// is the CNF "y = v_i and y < T_i" over w variables, so it is satisfiable iff
// c_i = 1, its witness is v_i, and its distribution does not depend on x.
// phi returns L(x) XOR [b != c]: exact on honest answers, while any single
// denial flips it.

struct ThresholdFixture {
  std::size_t k = 0;
  std::size_t n = 0;                      // instance length in bits
  std::size_t coin_bits = 0;              // w
  std::vector<std::uint32_t> thresholds;  // T_i in [0, 2^w]
  bool complement = false;
};

/// coin_bits = clamp(22 / k, 1, 4) so exact advice stays enumerable, and
/// T_i = 2^w - floor(i 2^w / (2k)), i.e. p_i ~ 1 - i / (2k); index 0 always
/// has p = 1.
ThresholdFixture default_threshold_fixture(std::size_t k, std::size_t n, bool complement = false);
AmReduction threshold_reduction(const ThresholdFixture& fx);
bool fixture_member(const ThresholdFixture& fx, std::uint64_t x);
/// Uniform n-bit instance with the requested membership.
std::uint64_t plant_instance(const ThresholdFixture& fx, bool member, Rng& rng);
/// The CNF "y = value and y < threshold" over `bits` variables.
CnfFormula threshold_query(std::uint32_t value, std::uint32_t threshold, std::size_t bits);

// ---------------------------------------------------------------------------
// Closed-form audit of the protocol's bounds.

struct AuditRow {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  bool slack_identity = false;    // m/k - 2 sqrt(k m) == 3k^2
  Rational chebyshev_per_index;   // m / (4 k m) = 1/(4k)
  bool chernoff_exponent_is_2k = false;  // 2 (3k^2)^2 / m == 2k
  double chernoff_bound = 0.0;    // e^(-2k)
  bool chernoff_below_quarter_k = false;  // e^(-2k) <= 1/(4k)
  Rational completeness_bound;    // 1/4 + 2^-n
  Rational soundness_bound;       // m 2^-n + 1/(4k)
  bool completeness_certified = false;  // < 1/3
  bool soundness_certified = false;     // < 1/3
  bool certified() const { return completeness_certified && soundness_certified; }
};

struct AuditReport {
  std::vector<AuditRow> rows;
  /// Per k (index k - k_lo): smallest n in range certified on both sides,
  /// nullopt if none.
  std::vector<std::optional<std::size_t>> min_certified_n;
};

AuditRow audit_bounds(std::size_t k, std::size_t n);
AuditReport bound_audit(std::size_t k_lo, std::size_t k_hi, std::size_t n_lo, std::size_t n_hi);

}  // namespace rrkit
