#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "rrkit/errors.hpp"
#include "rrkit/rng.hpp"

namespace rrkit {

struct OracleStats {
  std::uint64_t total_queries = 0;
  std::uint64_t rounds = 0;
  std::uint64_t max_batch = 0;
};

/// An oracle answers whole batches of queries, one batch per round. The
/// answer function receives the query's global index (its position in the
/// oracle's lifetime stream of queries), which wrappers such as the faulty
/// oracle use to derive per-query randomness. Answers are reassembled by
/// index, so worker count never changes results.
template <class Query, class Answer>
class Oracle {
 public:
  using AnswerFn = std::function<Answer(const Query&, std::uint64_t)>;

  explicit Oracle(AnswerFn fn, unsigned workers = 1)
      : fn_(std::move(fn)), workers_(std::max(1U, workers)) {}

  /// Answers every query as a single round.
  std::vector<Answer> submit(std::span<const Query> queries) {
    const std::uint64_t base = stats_.total_queries;
    std::vector<Slot> slots(queries.size());
    const std::size_t nthreads = std::min<std::size_t>(workers_, queries.size());
    if (nthreads <= 1) {
      for (std::size_t i = 0; i < queries.size(); ++i) slots[i].value = fn_(queries[i], base + i);
    } else {
      std::exception_ptr failure;
      std::mutex failure_mu;
      std::vector<std::thread> pool;
      pool.reserve(nthreads);
      for (std::size_t w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < queries.size(); i += nthreads)
              slots[i].value = fn_(queries[i], base + i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      if (failure) std::rethrow_exception(failure);
    }
    stats_.total_queries += queries.size();
    stats_.rounds += 1;
    stats_.max_batch = std::max<std::uint64_t>(stats_.max_batch, queries.size());

    std::vector<Answer> answers;
    answers.reserve(slots.size());
    for (auto& s : slots) answers.push_back(std::move(*s.value));
    return answers;
  }

  const OracleStats& stats() const noexcept { return stats_; }
  const AnswerFn& answer_fn() const noexcept { return fn_; }
  unsigned workers() const noexcept { return workers_; }
  void set_workers(unsigned w) noexcept { workers_ = std::max(1U, w); }

 private:
  // Avoids std::vector<bool> packing, which would race under workers.
  struct Slot {
    std::optional<Answer> value;
  };

  AnswerFn fn_;
  unsigned workers_;
  OracleStats stats_;
};

/// Wraps `inner` so that each query is independently answered wrongly with
/// probability `epsilon`. Whether query #idx is corrupted, and how, depends
/// only on (seed, idx). `corrupt(answer, rng)` must change the answer.
/// epsilon = 1 corrupts every answer. Throws ArityError outside
/// [0, 1].
template <class Query, class Answer, class Corrupt>
Oracle<Query, Answer> faulty_oracle(const Oracle<Query, Answer>& inner, double epsilon,
                                    std::uint64_t seed, Corrupt corrupt) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ArityError("fault rate must lie in [0, 1]");
  auto inner_fn = inner.answer_fn();
  return Oracle<Query, Answer>(
      [inner_fn, epsilon, seed, corrupt](const Query& q, std::uint64_t idx) {
        Answer a = inner_fn(q, idx);
        Rng rng = make_rng(seed, "oracle-fault", idx);
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) corrupt(a, rng);
        return a;
      },
      inner.workers());
}

}  // namespace rrkit
