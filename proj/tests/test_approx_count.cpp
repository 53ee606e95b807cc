#include <doctest.h>

#include <string>
#include <vector>

#include "rrkit/approx_count.hpp"
#include "rrkit/errors.hpp"
#include "rrkit/exact_oracles.hpp"

using namespace rrkit;

namespace {

Assignment bits_of(std::uint64_t v, std::size_t n) {
  Assignment a;
  for (std::size_t i = 0; i < n; ++i) a.bits.push_back((v >> i) & 1U);
  return a;
}

/// A satisfiable random 3-CNF on n variables with clause ratio 3.
CnfFormula satisfiable_instance(std::size_t n, Rng& rng) {
  for (;;) {
    CnfFormula f = random_kcnf(n, 3 * n, 3, rng);
    if (count_exact(f) > 0) return f;
  }
}

}  // namespace

TEST_CASE("derive_amplification") {
  CHECK(derive_amplification(Rational(2)) == 1);
  CHECK(derive_amplification(Rational(3)) == 1);
  CHECK(derive_amplification(Rational(3, 2)) == 2);
  CHECK(derive_amplification(Rational(10, 9)) == 7);
  CHECK(derive_amplification(Rational(3, 2), Rational(3, 2)) == 1);
  CHECK_THROWS_AS(derive_amplification(Rational(1)), ArityError);
  CHECK_THROWS_AS(derive_amplification(Rational(2), Rational(1)), ArityError);
  // Minimality: g^(t-1) < base <= g^t.
  for (int num = 101; num <= 300; num += 7) {
    const Rational g(num, 100);
    const std::size_t t = derive_amplification(g);
    Rational power = 1;
    for (std::size_t i = 1; i < t; ++i) power *= g;
    CHECK(power < 2);
    CHECK(power * g >= 2);
  }
}

TEST_CASE("repetitions_for") {
  CHECK(repetitions_for(0.1) == 24);
  CHECK(repetitions_for(0.05) == 24);
  CHECK(repetitions_for(0.5) == 8);
  CHECK(repetitions_for(0.01) == 40);
  CHECK_THROWS_AS(repetitions_for(0.0), ArityError);
  CHECK_THROWS_AS(repetitions_for(1.0), ArityError);
}

TEST_CASE("ratio factor composition: (1 + 1/(3 n^d))^2 < 1 + 1/n^d") {
  for (int n = 1; n <= 64; ++n)
    for (int d = 1; d <= 4; ++d) {
      Rational nd = 1;
      for (int i = 0; i < d; ++i) nd *= n;
      const Rational eps = 1 / nd;
      const Rational g_prime = 1 + eps / 3;
      const Rational squared = g_prime * g_prime;
      CHECK(squared == 1 + Rational(2, 3) * eps + eps * eps / 9);
      CHECK(squared <= 1 + Rational(7, 9) * eps);
      CHECK(squared < 1 + eps);
      CHECK(ratio_component_factor(1 + eps) == g_prime);
    }
  // For large g the per-count factor is capped so its square stays <= g.
  for (int num = 101; num <= 2000; num += 37) {
    const Rational g(num, 100);
    const Rational c = ratio_component_factor(g);
    CHECK(c > 1);
    CHECK(c * c <= g);
  }
}

TEST_CASE("hash plans") {
  Rng rng(1);
  const HashLevelPlan plan = draw_hash_plan(6, 3, rng);
  CHECK(plan.repetition_count() == 3);
  CHECK(plan.level_count() == 7);
  CHECK(plan.level(0, 0).empty());
  for (std::size_t rep = 0; rep < 3; ++rep)
    for (std::size_t i = 1; i < plan.level_count(); ++i) {
      const auto shorter = plan.level(rep, i - 1);
      const auto longer = plan.level(rep, i);
      REQUIRE(longer.size() == i);
      for (std::size_t c = 0; c < shorter.size(); ++c) {
        CHECK(shorter[c].variables == longer[c].variables);
        CHECK(shorter[c].parity == longer[c].parity);
      }
    }
  CHECK_THROWS_AS(plan.level(0, 8), ArityError);
  CHECK(plan_queries(CnfFormula(6), plan).size() == 21);
  CHECK_THROWS_AS(plan_queries(CnfFormula(5), plan), ArityError);
}

TEST_CASE("satisfiable levels form a prefix of every repetition") {
  Rng rng(2);
  SatOracle sat = sat_oracle();
  for (int trial = 0; trial < 20; ++trial) {
    const CnfFormula f = random_kcnf(10, 25, 3, rng);
    const HashLevelPlan plan = draw_hash_plan(10, 5, rng);
    const auto answers = sat.submit(plan_queries(f, plan));
    for (std::size_t rep = 0; rep < 5; ++rep)
      for (std::size_t i = 1; i < plan.level_count(); ++i)
        if (answers[rep * plan.level_count() + i]) CHECK(answers[rep * plan.level_count() + i - 1]);
  }
}

TEST_CASE("pairwise independence: two fixed assignments both survive i constraints w.p. 4^-i") {
  const std::size_t n = 8;
  const Assignment a = bits_of(0b10110010, n), b = bits_of(0b01110111, n);
  SUBCASE("exact over all single constraints") {
    int both = 0, one = 0, total = 0;
    for (std::uint64_t subset = 0; subset < (1U << n); ++subset)
      for (bool parity : {false, true}) {
        XorConstraint x;
        for (std::size_t v = 0; v < n; ++v)
          if ((subset >> v) & 1U) x.variables.push_back(static_cast<int>(v) + 1);
        x.parity = parity;
        ++total;
        if (x.holds(a)) ++one;
        if (x.holds(a) && x.holds(b)) ++both;
      }
    CHECK(one * 2 == total);
    CHECK(both * 4 == total);
  }
  SUBCASE("sampled for i <= 3") {
    Rng rng(3);
    const int draws = 40000;
    const HashLevelPlan plan = draw_hash_plan(n, draws, rng);
    for (std::size_t i = 1; i <= 3; ++i) {
      int both = 0;
      for (int d = 0; d < draws; ++d) {
        bool ok = true;
        for (const auto& x : plan.level(static_cast<std::size_t>(d), i)) ok = ok && x.holds(a) && x.holds(b);
        if (ok) ++both;
      }
      const double expected = std::pow(0.25, static_cast<double>(i));
      const double sd = std::sqrt(expected * (1 - expected) / draws);
      CHECK(std::abs(static_cast<double>(both) / draws - expected) <= 5 * sd);
    }
  }
}

TEST_CASE("raw_hash_estimate") {
  Rng rng(4);
  const HashLevelPlan plan = draw_hash_plan(3, 3, rng);
  OracleAnswerSheet<bool> none{std::vector<bool>(12, false)};
  CHECK(raw_hash_estimate(plan, none) == 0);

  // Repetition-major: rep 0 tops out at level 1, rep 1 at 3, rep 2 at 2.
  OracleAnswerSheet<bool> sheet{{true, true, false, false,  //
                                 true, true, true, true,    //
                                 true, true, true, false}};
  CHECK(raw_hash_estimate(plan, sheet) == 4);
  CHECK(raw_hash_estimate(plan, sheet, Rational(3)) == 12);
  // The lower median of an even number of repetitions.
  const HashLevelPlan two = draw_hash_plan(3, 2, rng);
  OracleAnswerSheet<bool> pair{{true, false, false, false, true, true, true, false}};
  CHECK(raw_hash_estimate(two, pair) == 1);
  CHECK_THROWS_AS(raw_hash_estimate(plan, pair), ArityError);
}

TEST_CASE("a single model: median estimate in {1, 2} in >= 90% of 200 runs") {
  const CnfFormula one_model(6, {{1}, {-2}, {3}, {-4}, {5}, {-6}});
  SatOracle sat = sat_oracle();
  Rng rng(5);
  int good = 0;
  for (int run = 0; run < 200; ++run) {
    const HashLevelPlan plan = draw_hash_plan(6, repetitions_for(0.1), rng);
    const Rational est = raw_hash_estimate(plan, {sat.submit(plan_queries(one_model, plan))});
    if (est == 1 || est == 2) ++good;
  }
  CHECK(good >= 180);
}

TEST_CASE("approx_count_parallel") {
  SatOracle sat = sat_oracle();
  SUBCASE("unsatisfiable formulas count exactly 0 in one round") {
    Rng rng(6);
    const auto res = approx_count_parallel(CnfFormula(3, {{1}, {-1}}), Rational(2), 0.1, sat, rng);
    CHECK(res.estimate == 0);
    CHECK(res.oracle_rounds == 1);
    CHECK(res.queries == 24 * 4);
    CHECK(res.repetitions == 24);
    CHECK(res.amplification == 1);
  }
  SUBCASE("estimate is 0 iff the formula is unsatisfiable") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
      const CnfFormula f = random_kcnf(8, 30 + trial, 3, rng);
      const auto res = approx_count_parallel(f, Rational(2), 0.1, sat, rng);
      CHECK((res.estimate == 0) == (count_exact(f) == 0));
    }
  }
  SUBCASE("empty formula on 10 variables lands in [512, 2048] in >= 90% of 200 runs") {
    Rng rng(8);
    int good = 0;
    for (int run = 0; run < 200; ++run) {
      const auto res = approx_count_parallel(CnfFormula(10), Rational(2), 0.1, sat, rng);
      if (res.estimate >= 512 && res.estimate <= 2048) ++good;
      CHECK(res.oracle_rounds == 1);
    }
    CHECK(good >= 180);
  }
  SUBCASE("amplification beyond the variable budget is refused") {
    Rng rng(9);
    CHECK_THROWS_AS(approx_count_parallel(CnfFormula(16), Rational(11, 10), 0.1, sat, rng),
                    ResourceLimit);
    ApproxCountOptions tight;
    tight.budget_vars = 10;
    CHECK_THROWS_AS(approx_count_parallel(CnfFormula(6), Rational(3, 2), 0.1, sat, rng, tight),
                    ResourceLimit);
  }
  SUBCASE("same seed, same estimate, whatever the worker count") {
    Rng r1(10), r2(10);
    SatOracle wide = sat_oracle(4);
    Rng inst(11);
    const CnfFormula f = satisfiable_instance(12, inst);
    CHECK(approx_count_parallel(f, Rational(3, 2), 0.1, sat, r1).estimate ==
          approx_count_parallel(f, Rational(3, 2), 0.1, wide, r2).estimate);
  }
}

TEST_CASE("accuracy over 200 seeded runs per configuration") {
  SatOracle sat = sat_oracle();
  for (std::size_t n : {8, 12, 16})
    for (const Rational& g : {Rational(2), Rational(3, 2)}) {
      Rng rng(100 + n);
      const CnfFormula f = satisfiable_instance(n, rng);
      const Rational truth(count_exact(f));
      int good = 0;
      for (int run = 0; run < 200; ++run) {
        Rng run_rng = make_rng(n, "accuracy", static_cast<std::uint64_t>(run));
        const auto res = approx_count_parallel(f, g, 0.1, sat, run_rng);
        if (within_factor(res.estimate, truth, g)) ++good;
      }
      INFO("n = " << n << ", g = " << to_string(g) << ", count = " << to_string(truth));
      CHECK(good >= 170);  // 1 - delta - 0.05
    }
}

TEST_CASE("approx_count_ratio") {
  SatOracle sat = sat_oracle();
  const CnfFormula f(2, {{1}}), h(2, {{1, 2}});
  SUBCASE("f = h with a shared plan is exactly 1") {
    ApproxCountOptions shared;
    shared.shared_plan = true;
    Rng rng(12);
    for (int run = 0; run < 20; ++run) {
      Rng inst(run);
      const CnfFormula g = satisfiable_instance(8, inst);
      CHECK(approx_count_ratio(g, g, Rational(2), 0.1, sat, rng, shared).estimate == 1);
    }
  }
  SUBCASE("Pr[x1 | x1 or x2] = 2/3 within factor g in >= 90% of runs") {
    for (const Rational& g : {Rational(2), Rational(3, 2)}) {
      Rng rng(13);
      int good = 0;
      for (int run = 0; run < 100; ++run) {
        const auto res = approx_count_ratio(f, h, g, 0.1, sat, rng);
        CHECK(res.oracle_rounds == 1);
        if (within_factor(res.estimate, Rational(2, 3), g)) ++good;
      }
      CHECK(good >= 90);
    }
  }
  SUBCASE("both counts share a single batch") {
    Rng rng(14);
    const auto res = approx_count_ratio(f, h, Rational(2), 0.1, sat, rng);
    const std::size_t t = res.amplification;
    CHECK(t == derive_amplification(ratio_component_factor(Rational(2))));
    CHECK(res.repetitions == repetitions_for(0.05));
    CHECK(res.queries == 2 * res.repetitions * (2 * t + 1));
    CHECK(res.oracle_rounds == 1);
  }
  SUBCASE("unsatisfiable post-selection") {
    Rng rng(15);
    CHECK_THROWS_AS(approx_count_ratio(f, CnfFormula(2, {{1}, {-1}}), Rational(2), 0.1, sat, rng),
                    PostselectionImpossible);
  }
  SUBCASE("mismatched variable counts") {
    Rng rng(16);
    CHECK_THROWS_AS(approx_count_ratio(f, CnfFormula(3), Rational(2), 0.1, sat, rng), ArityError);
  }
}
