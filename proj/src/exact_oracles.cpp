#include "rrkit/exact_oracles.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "rrkit/errors.hpp"

namespace rrkit {

FieldElement permanent_exact(const FieldMatrix& a) {
  const std::size_t n = a.dimension();
  if (n > kMaxPermanentDimension)
    throw ResourceLimit("permanent of a " + std::to_string(n) + "x" + std::to_string(n) +
                        " matrix exceeds the " + std::to_string(kMaxPermanentDimension) +
                        " dimension budget");
  const std::uint64_t p = a.modulus().value();

  // perm(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij, walking the
  // subsets S in Gray-code order so each step adds or removes one column.
  std::vector<std::uint64_t> row_sum(n, 0);
  std::uint64_t total = 0;  // signed sum kept mod p
  std::uint64_t subset = 0;
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    const unsigned col = static_cast<unsigned>(__builtin_ctzll(step));
    subset ^= std::uint64_t{1} << col;
    const bool added = (subset >> col) & 1U;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t e = a.raw(i, col);
      row_sum[i] = added ? (row_sum[i] + e) % p : (row_sum[i] + p - e) % p;
    }
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < n && prod != 0; ++i) prod = prod * row_sum[i] % p;
    const bool negative = ((n - static_cast<std::size_t>(__builtin_popcountll(subset))) & 1U) != 0;
    total = negative ? (total + p - prod) % p : (total + prod) % p;
  }
  return FieldElement(static_cast<std::int64_t>(total), a.modulus());
}

std::uint64_t count_exact(const CnfFormula& f) {
  const std::size_t n = f.var_count();
  if (n > kMaxCountVariables)
    throw ResourceLimit("exact counting of " + std::to_string(n) + " variables exceeds the " +
                        std::to_string(kMaxCountVariables) + " variable budget");
  struct Masks {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
  };
  std::vector<Masks> masks;
  masks.reserve(f.clause_count());
  for (const auto& c : f.clauses()) {
    Masks m;
    for (Literal l : c) {
      const std::uint32_t bit = std::uint32_t{1} << (std::abs(l) - 1);
      (l > 0 ? m.pos : m.neg) |= bit;
    }
    masks.push_back(m);
  }
  std::uint64_t count = 0;
  const std::uint32_t end = static_cast<std::uint32_t>(1) << n;  // n <= 26
  for (std::uint32_t x = 0; x < end; ++x) {
    bool ok = true;
    for (const auto& m : masks) {
      if (((x & m.pos) | (~x & m.neg)) == 0) {
        ok = false;
        break;
      }
    }
    count += ok ? 1 : 0;
  }
  return count;
}

namespace {

class Dpll {
 public:
  explicit Dpll(const CnfFormula& f)
      : nvars_(f.var_count()), value_(nvars_, kUnset), watches_(2 * nvars_) {
    for (const auto& c : f.clauses()) {
      std::vector<int> lits;
      lits.reserve(c.size());
      for (Literal l : c) {
        const int enc = 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0);
        bool dup = false;
        for (int e : lits) dup = dup || e == enc;
        if (!dup) lits.push_back(enc);
      }
      if (lits.size() == 1) {
        units_.push_back(lits[0]);
        continue;
      }
      const int id = static_cast<int>(clauses_.size());
      watches_[lits[0]].push_back(id);
      watches_[lits[1]].push_back(id);
      clauses_.push_back(std::move(lits));
    }
  }

  SatVerdict solve() {
    for (int u : units_) {
      const signed char v = lit_value(u);
      if (v == 0) return {};
      if (v == kUnset) assign(u);
    }
    std::size_t next_var = 0;
    while (true) {
      if (!propagate()) {
        // Undo exhausted decisions, then flip the most recent open one.
        while (!decisions_.empty() && decisions_.back().flipped) {
          undo_to(decisions_.back().trail_pos);
          decisions_.pop_back();
        }
        if (decisions_.empty()) return {};
        auto& d = decisions_.back();
        undo_to(d.trail_pos);
        d.flipped = true;
        assign(2 * d.var);  // positive literal
        next_var = d.var + 1;
        continue;
      }
      while (next_var < nvars_ && value_[next_var] != kUnset) ++next_var;
      if (next_var == nvars_) break;
      decisions_.push_back({trail_.size(), next_var, false});
      assign(2 * static_cast<int>(next_var) + 1);  // negative literal first
      ++next_var;
    }
    Assignment a;
    a.bits.resize(nvars_);
    for (std::size_t v = 0; v < nvars_; ++v) a.bits[v] = value_[v] == 1;
    return {true, std::move(a)};
  }

 private:
  static constexpr signed char kUnset = -1;

  struct Decision {
    std::size_t trail_pos;
    std::size_t var;
    bool flipped;
  };

  // 1 true, 0 false, -1 unassigned.
  signed char lit_value(int lit) const {
    const signed char v = value_[static_cast<std::size_t>(lit >> 1)];
    if (v == kUnset) return kUnset;
    return (lit & 1) ? static_cast<signed char>(1 - v) : v;
  }

  void assign(int lit) {
    value_[static_cast<std::size_t>(lit >> 1)] = (lit & 1) ? 0 : 1;
    trail_.push_back(lit);
  }

  void undo_to(std::size_t pos) {
    while (trail_.size() > pos) {
      value_[static_cast<std::size_t>(trail_.back() >> 1)] = kUnset;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, pos);
  }

  // False on conflict.
  bool propagate() {
    while (qhead_ < trail_.size()) {
      const int false_lit = trail_[qhead_++] ^ 1;
      auto& ws = watches_[static_cast<std::size_t>(false_lit)];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t w = 0; w < ws.size(); ++w) {
        const int id = ws[w];
        if (conflict) {
          ws[keep++] = id;
          continue;
        }
        auto& c = clauses_[static_cast<std::size_t>(id)];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[keep++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[static_cast<std::size_t>(c[1])].push_back(id);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = id;
        if (lit_value(c[0]) == 0) {
          conflict = true;
        } else {
          assign(c[0]);
        }
      }
      ws.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  std::size_t nvars_;
  std::vector<signed char> value_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  std::vector<Decision> decisions_;
};

}  // namespace

SatVerdict sat_decide(const CnfFormula& f) { return Dpll(f).solve(); }

PermanentOracle permanent_oracle(unsigned workers) {
  return PermanentOracle([](const FieldMatrix& a, std::uint64_t) { return permanent_exact(a); },
                         workers);
}

CountOracle count_oracle(unsigned workers) {
  return CountOracle([](const CnfFormula& f, std::uint64_t) { return count_exact(f); }, workers);
}

SatOracle sat_oracle(unsigned workers) {
  return SatOracle([](const CnfFormula& f, std::uint64_t) { return sat_decide(f).satisfiable; },
                   workers);
}

WitnessOracle witness_oracle(unsigned workers) {
  return WitnessOracle([](const CnfFormula& f, std::uint64_t) { return sat_decide(f); }, workers);
}

void Corruption::operator()(FieldElement& v, Rng& rng) const {
  const std::uint32_t p = v.modulus().value();
  std::uniform_int_distribution<std::uint32_t> offset(1, p - 1);
  v += FieldElement(offset(rng), v.modulus());
}

void Corruption::operator()(bool& v, Rng&) const { v = !v; }

void Corruption::operator()(SatVerdict& v, Rng&) const {
  v.satisfiable = !v.satisfiable;
  v.witness.reset();
}

void Corruption::operator()(std::uint64_t& v, Rng& rng) const {
  v += std::uniform_int_distribution<std::uint64_t>(1, 1U << 16)(rng);
}

}  // namespace rrkit
