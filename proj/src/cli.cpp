#include "rrkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrkit/am_protocol.hpp"
#include "rrkit/approx_count.hpp"
#include "rrkit/errors.hpp"
#include "rrkit/exact_oracles.hpp"
#include "rrkit/fixtures.hpp"
#include "rrkit/formula.hpp"
#include "rrkit/matrix_json.hpp"
#include "rrkit/perm_rsr.hpp"
#include "rrkit/rational.hpp"

#ifndef RRKIT_VERSION
#define RRKIT_VERSION "unknown"
#endif

namespace rrkit {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t budget_vars = kDefaultVariableBudget;
};

/// What a subcommand hands back to the envelope.
struct Report {
  Json fields = Json::object();
  std::vector<std::string> inputs;  // files whose bytes make up inputs_digest
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t digest_inputs(const std::vector<std::string>& paths) {
  std::uint64_t h = fnv1a64("");
  for (const auto& p : paths) h = fnv1a64(read_file(p), h);
  return h;
}

Json rational_json(const Rational& q) { return to_string(q); }

std::vector<std::string> echo_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--workers") {
      ++i;
      continue;
    }
    if (args[i].rfind("--workers=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

Rational parse_factor(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const Error&) {
    throw CLI::ValidationError("--factor", "expected a decimal or a/b, got '" + s + "'");
  }
}

// ---------------------------------------------------------------------------

Report run_count_exact(const std::string& path, const Globals& g) {
  const CnfFormula f = read_dimacs_file(path);
  CountOracle oracle = count_oracle(g.workers);
  const std::uint64_t value = oracle.submit(std::span<const CnfFormula>(&f, 1)).front();
  Report r;
  r.inputs = {path};
  r.fields["var_count"] = f.var_count();
  r.fields["clause_count"] = f.clause_count();
  r.fields["value"] = value;
  r.fields["queries"] = oracle.stats().total_queries;
  return r;
}

Report run_perm_exact(const std::string& path, const Globals& g) {
  const FieldMatrix a = read_matrix_file(path);
  PermanentOracle oracle = permanent_oracle(g.workers);
  const FieldElement value = oracle.submit(std::span<const FieldMatrix>(&a, 1)).front();
  Report r;
  r.inputs = {path};
  r.fields["n"] = a.dimension();
  r.fields["modulus"] = a.modulus().value();
  r.fields["value"] = value.value();
  r.fields["queries"] = oracle.stats().total_queries;
  return r;
}

struct CountApproxArgs {
  std::string cnf;
  std::string factor = "2";
  double delta = 0.1;
  std::string ratio;
  bool shared_plan = false;
  bool probability = false;
};

Report run_count_approx(const CountApproxArgs& a, const Globals& g) {
  const CnfFormula f = read_dimacs_file(a.cnf);
  const Rational factor = parse_factor(a.factor);
  ApproxCountOptions options;
  options.budget_vars = g.budget_vars;
  options.shared_plan = a.shared_plan;
  SatOracle oracle = sat_oracle(g.workers);
  Rng rng = make_rng(g.seed, "count-approx");

  Report r;
  r.inputs = {a.cnf};
  ApproxCountResult res;
  std::optional<Rational> exact;
  if (a.ratio.empty()) {
    res = approx_count_parallel(f, factor, a.delta, oracle, rng, options);
    if (f.var_count() <= kMaxCountVariables) exact = Rational(count_exact(f));
  } else {
    r.inputs.push_back(a.ratio);
    const CnfFormula h = read_dimacs_file(a.ratio);
    res = approx_count_ratio(f, h, factor, a.delta, oracle, rng, options);
    if (f.var_count() <= kMaxCountVariables) {
      const std::uint64_t den = count_exact(h);
      if (den > 0) exact = Rational(BigInt(count_exact(conjoin(f, h))), BigInt(den));
    }
  }
  r.fields["mode"] = a.ratio.empty() ? "count" : "ratio";
  r.fields["estimate"] = rational_json(res.estimate);
  r.fields["estimate_decimal"] = to_double(res.estimate);
  if (a.probability && a.ratio.empty()) {
    const Rational p = res.estimate / Rational(BigInt(1) << static_cast<unsigned>(f.var_count()));
    r.fields["probability"] = rational_json(p);
  }
  r.fields["factor"] = rational_json(factor);
  r.fields["delta"] = a.delta;
  r.fields["rounds"] = res.oracle_rounds;
  r.fields["repetitions"] = res.repetitions;
  r.fields["amplification"] = res.amplification;
  r.fields["queries"] = res.queries;
  r.fields["shared_plan"] = a.shared_plan;
  if (exact) {
    r.fields["exact"] = rational_json(*exact);
    r.fields["within_factor"] = within_factor(res.estimate, *exact, factor);
  } else {
    r.fields["exact"] = nullptr;
    r.fields["within_factor"] = nullptr;
  }
  return r;
}

struct RsrArgs {
  std::string reduction = "perm-rsr";
  std::string input;
  std::size_t boost_t = 0;
  double fault = 0.0;
  std::size_t outer_k = 3;
};

void check_fault(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ArityError("--fault must lie in [0, 1]");
}

Report run_perm_rsr(const RsrArgs& a, const Globals& g) {
  check_fault(a.fault);
  const FieldMatrix x = read_matrix_file(a.input);
  PermReduction rr = perm_rsr(x.dimension(), x.modulus());
  if (a.boost_t > 0) rr = boost(rr, a.boost_t);
  PermanentOracle exact = permanent_oracle(g.workers);
  PermanentOracle oracle = a.fault > 0.0
                               ? faulty_oracle(exact, a.fault, derive_seed(g.seed, "fault"))
                               : permanent_oracle(g.workers);
  oracle.set_workers(g.workers);
  Rng rng = make_rng(g.seed, "r");
  const FieldElement out = run_reduction(rr, x, oracle, rng);
  const FieldElement truth = permanent_exact(x);

  Report r;
  r.inputs = {a.input};
  r.fields["reduction"] = rr.name;
  r.fields["n"] = x.dimension();
  r.fields["modulus"] = x.modulus().value();
  r.fields["boost"] = a.boost_t;
  r.fields["fault"] = a.fault;
  r.fields["output"] = out.value();
  r.fields["expected"] = truth.value();
  r.fields["success"] = out == truth;
  r.fields["queries"] = oracle.stats().total_queries;
  r.fields["rounds"] = oracle.stats().rounds;
  return r;
}

std::uint64_t parse_bit_string(const std::string& text, std::size_t& n) {
  std::uint64_t x = 0;
  n = 0;
  for (char c : text) {
    if (c == '0' || c == '1') {
      if (n == 63) throw ArityError("bit-string instance longer than 63 bits");
      x |= static_cast<std::uint64_t>(c - '0') << n++;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ParseError(1, "bit-string instance may only hold 0, 1 and whitespace");
    }
  }
  if (n == 0) throw ParseError(1, "empty bit-string instance");
  return x;
}

Report run_parity_sat(const RsrArgs& a, const Globals& g) {
  check_fault(a.fault);
  std::size_t n = 0;
  const std::uint64_t x = parse_bit_string(read_file(a.input), n);
  ParitySatReduction rr = compose(parity_outer(n, a.outer_k, 0.0), parity_inner(n, 0.0));
  if (a.boost_t > 0) rr = boost(rr, a.boost_t);
  SatOracle exact = sat_oracle(g.workers);
  SatOracle oracle = a.fault > 0.0 ? faulty_oracle(exact, a.fault, derive_seed(g.seed, "fault"))
                                   : sat_oracle(g.workers);
  oracle.set_workers(g.workers);
  Rng rng = make_rng(g.seed, "r");
  const bool out = run_reduction(rr, x, oracle, rng);

  Report r;
  r.inputs = {a.input};
  r.fields["reduction"] = rr.name;
  r.fields["n"] = n;
  r.fields["boost"] = a.boost_t;
  r.fields["fault"] = a.fault;
  r.fields["output"] = out;
  r.fields["expected"] = parity(x);
  r.fields["success"] = out == parity(x);
  r.fields["queries"] = oracle.stats().total_queries;
  r.fields["rounds"] = oracle.stats().rounds;
  return r;
}

Report run_rr(const RsrArgs& a, const Globals& g) {
  if (a.reduction == "perm-rsr") return run_perm_rsr(a, g);
  if (a.reduction == "parity-sat") return run_parity_sat(a, g);
  throw CLI::ValidationError("--reduction", "unknown reduction '" + a.reduction +
                                                "' (choose perm-rsr or parity-sat)");
}

Json audit_json(const AuditRow& row) {
  Json j;
  j["k"] = row.k;
  j["n"] = row.n;
  j["m"] = row.m;
  j["slack"] = 3 * row.k * row.k;
  j["slack_identity"] = row.slack_identity;
  j["chebyshev_per_index"] = rational_json(row.chebyshev_per_index);
  j["chernoff_exponent_is_2k"] = row.chernoff_exponent_is_2k;
  j["chernoff_bound"] = row.chernoff_bound;
  j["chernoff_below_quarter_k"] = row.chernoff_below_quarter_k;
  j["completeness_bound"] = rational_json(row.completeness_bound);
  j["soundness_bound"] = rational_json(row.soundness_bound);
  j["completeness_certified"] = row.completeness_certified;
  j["soundness_certified"] = row.soundness_certified;
  j["certified"] = row.certified();
  return j;
}

struct AuditArgs {
  std::size_t k = 4;
  std::size_t n = 20;
  std::size_t k_max = 0;
  std::size_t n_max = 0;
};

Report run_audit(const AuditArgs& a) {
  const std::size_t k_hi = std::max(a.k, a.k_max);
  const std::size_t n_hi = std::max(a.n, a.n_max);
  if (n_hi > 256) throw ArityError("--n is capped at 256");
  const AuditReport report = bound_audit(a.k, k_hi, a.n, n_hi);
  Report r;
  r.fields["rows"] = Json::array();
  for (const auto& row : report.rows) r.fields["rows"].push_back(audit_json(row));
  Json min_n = Json::object();
  for (std::size_t k = a.k; k <= k_hi; ++k) {
    const auto& v = report.min_certified_n[k - a.k];
    min_n[std::to_string(k)] = v ? Json(*v) : Json(nullptr);
  }
  r.fields["min_certified_n"] = min_n;
  return r;
}

struct AmArgs {
  std::string fixture = "yes";
  std::size_t k = 4;
  std::size_t n = 13;
  std::string merlin = "honest";
  std::optional<std::size_t> lies;
  std::size_t target = 0;
  std::size_t sessions = 1000;
};

Report run_am(const AmArgs& a, const Globals& g) {
  static const std::vector<std::string> kFixtures = {"yes", "no", "co-yes", "co-no"};
  if (std::find(kFixtures.begin(), kFixtures.end(), a.fixture) == kFixtures.end())
    throw CLI::ValidationError("--fixture", "choose yes, no, co-yes or co-no");
  if (a.merlin != "honest" && a.merlin != "adversarial")
    throw CLI::ValidationError("--merlin", "choose honest or adversarial");
  const bool complement = a.fixture.rfind("co-", 0) == 0;
  const bool member = a.fixture == "yes" || a.fixture == "co-yes";

  const ThresholdFixture fx = default_threshold_fixture(a.k, a.n, complement);
  const AmReduction rr = threshold_reduction(fx);
  Rng instance_rng = make_rng(g.seed, "instance");
  const std::uint64_t x = plant_instance(fx, member, instance_rng);

  SatOracle sat = sat_oracle(g.workers);
  Advice advice;
  if (rr.randomness_len <= kMaxExactAdviceBits) {
    advice = compute_advice_exact(rr, 0, sat);
  } else {
    Rng advice_rng = make_rng(g.seed, "advice");
    advice = compute_advice_sampled(rr, 0, std::size_t{1} << 16, sat, advice_rng);
  }

  const std::size_t m = arthur_string_count(a.k);
  MerlinStrategy strategy;
  strategy.kind = a.merlin == "honest" ? MerlinKind::honest : MerlinKind::adversarial;
  strategy.target_index = a.target;
  strategy.lie_budget = a.lies.value_or(m);
  if (strategy.kind == MerlinKind::adversarial && strategy.target_index >= a.k)
    throw PolicyError("--target must be below k");
  const SessionSummary s = run_sessions(x, rr, advice, strategy, a.sessions, g.seed, g.workers);

  Report r;
  r.fields["fixture"] = a.fixture;
  r.fields["k"] = a.k;
  r.fields["n"] = a.n;
  r.fields["m"] = m;
  r.fields["instance"] = x;
  r.fields["member"] = member;
  r.fields["coin_bits"] = fx.coin_bits;
  r.fields["advice"] = Json::array();
  for (const auto& p : advice.p) r.fields["advice"].push_back(rational_json(p));
  r.fields["advice_provenance"] =
      advice.provenance == AdviceProvenance::exact ? "exact" : "sampled";
  r.fields["merlin"] = a.merlin;
  if (strategy.kind == MerlinKind::adversarial) {
    r.fields["target"] = strategy.target_index;
    r.fields["lie_budget"] = strategy.lie_budget;
  }
  r.fields["sessions"] = s.sessions;
  r.fields["accepted"] = s.accepted;
  r.fields["accept_rate"] = s.accept_rate();
  r.fields["per_check_failures"] = {{"1", s.failures[0]}, {"2", s.failures[1]}, {"3", s.failures[2]}};
  r.fields["invalid_witnesses"] = s.check1_violations;
  r.fields["lies_told"] = s.lies;
  r.fields["thresholds"] = Json::array();
  for (const auto& p : advice.p) r.fields["thresholds"].push_back(rational_json(check3_threshold(p, a.k)));
  r.fields["audit"] = audit_json(audit_bounds(a.k, a.n));
  return r;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random reductions, parallel approximate counting and Arthur-Merlin simulation",
               "rrkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", RRKIT_VERSION);

  Globals globals;
  globals.workers = std::max(1U, std::thread::hardware_concurrency());
  auto* seed_opt = app.add_option("--seed", globals.seed, "Master seed (drawn and echoed if absent)");
  app.add_option("--workers", globals.workers, "Concurrent oracle workers")->check(CLI::Range(1U, 1024U));
  bool json = true;
  app.add_flag("--json,!--no-json", json, "Emit the JSON report (default on)");
  app.add_option("--budget-vars", globals.budget_vars, "Cap on counted variables after amplification");

  std::string cnf_path, matrix_path;
  auto* count_exact_cmd = app.add_subcommand("count-exact", "Exact model count of a DIMACS CNF");
  count_exact_cmd->add_option("file", cnf_path, "DIMACS CNF file")->required();

  auto* perm_exact_cmd = app.add_subcommand("perm-exact", "Exact permanent of a matrix over GF(p)");
  perm_exact_cmd->add_option("file", matrix_path, "Matrix JSON file")->required();

  CountApproxArgs ca;
  auto* approx_cmd = app.add_subcommand("count-approx", "One-round approximate model count");
  approx_cmd->add_option("file", ca.cnf, "DIMACS CNF file")->required();
  approx_cmd->add_option("--factor", ca.factor, "Approximation factor g > 1");
  approx_cmd->add_option("--delta", ca.delta, "Failure probability in (0, 1)");
  approx_cmd->add_option("--ratio", ca.ratio, "Post-selection formula h: estimate Pr[f | h]");
  approx_cmd->add_flag("--shared-plan", ca.shared_plan, "Hash numerator and denominator alike");
  approx_cmd->add_flag("--probability", ca.probability, "Also report estimate / 2^n");

  RsrArgs rsr;
  auto* rsr_cmd = app.add_subcommand("rsr-perm", "Permanent through its random self-reduction");
  rsr_cmd->add_option("--matrix", rsr.input, "Matrix JSON file")->required();
  rsr_cmd->add_option("--boost", rsr.boost_t, "Boost parameter t (0 = off)");
  rsr_cmd->add_option("--fault", rsr.fault, "Per-query oracle error rate");

  RsrArgs rr_args;
  auto* rr_cmd = app.add_subcommand("rr-run", "Run a named random reduction once");
  rr_cmd->add_option("--reduction", rr_args.reduction, "perm-rsr or parity-sat")->required();
  rr_cmd->add_option("--input", rr_args.input, "Matrix JSON (perm-rsr) or bit string (parity-sat)")
      ->required();
  rr_cmd->add_option("--boost", rr_args.boost_t, "Boost parameter t (0 = off)");
  rr_cmd->add_option("--fault", rr_args.fault, "Per-query oracle error rate");
  rr_cmd->add_option("--outer-k", rr_args.outer_k, "Outer queries of parity-sat")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));

  AmArgs am;
  auto* am_cmd = app.add_subcommand("am-sim", "Simulate Arthur-Merlin sessions on a planted fixture");
  am_cmd->add_option("--fixture", am.fixture, "yes, no, co-yes or co-no");
  am_cmd->add_option("--k", am.k, "Queries per random string")->check(CLI::Range(std::size_t{1}, std::size_t{16}));
  am_cmd->add_option("--n", am.n, "Instance length in bits")->check(CLI::Range(std::size_t{1}, std::size_t{63}));
  am_cmd->add_option("--merlin", am.merlin, "honest or adversarial");
  am_cmd->add_option("--lies", am.lies, "Adversary's lie budget (default m)");
  am_cmd->add_option("--target", am.target, "Index the adversary lies on");
  am_cmd->add_option("--sessions", am.sessions, "Number of sessions");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit-bounds", "Check the protocol's closed-form bounds");
  audit_cmd->add_option("--k", audit.k, "Smallest k")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  audit_cmd->add_option("--n", audit.n, "Smallest n");
  audit_cmd->add_option("--k-max", audit.k_max, "Largest k (default: --k)");
  audit_cmd->add_option("--n-max", audit.n_max, "Largest n (default: --n)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kExitUsage;
  }

  if (seed_opt->count() == 0) globals.seed = (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();

  const auto start = std::chrono::steady_clock::now();
  std::string command;
  Report report;
  try {
    if (count_exact_cmd->parsed()) {
      command = "count-exact";
      report = run_count_exact(cnf_path, globals);
    } else if (perm_exact_cmd->parsed()) {
      command = "perm-exact";
      report = run_perm_exact(matrix_path, globals);
    } else if (approx_cmd->parsed()) {
      command = "count-approx";
      report = run_count_approx(ca, globals);
    } else if (rsr_cmd->parsed()) {
      command = "rsr-perm";
      rsr.reduction = "perm-rsr";
      report = run_perm_rsr(rsr, globals);
    } else if (rr_cmd->parsed()) {
      command = "rr-run";
      report = run_rr(rr_args, globals);
    } else if (am_cmd->parsed()) {
      command = "am-sim";
      report = run_am(am, globals);
    } else {
      command = "audit-bounds";
      report = run_audit(audit);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

  Json doc;
  doc["command"] = command;
  doc["argv"] = echo_args(args);
  doc["seed"] = globals.seed;
  doc["inputs_digest"] = hex64(digest_inputs(report.inputs));
  doc["version"] = RRKIT_VERSION;
  for (auto& [key, value] : report.fields.items()) doc[key] = value;
  doc["elapsed_ms"] = elapsed.count();
  if (json)
    out << doc.dump(2) << "\n";
  else
    for (auto& [key, value] : doc.items()) out << key << ": " << value.dump() << "\n";
  return kExitOk;
}

}  // namespace rrkit
