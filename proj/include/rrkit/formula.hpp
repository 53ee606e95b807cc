#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "rrkit/rng.hpp"

namespace rrkit {

/// Default cap on the number of counted (non-auxiliary) variables a formula
/// may reach through tensor powers.
inline constexpr std::size_t kDefaultVariableBudget = 40;

using Literal = int;
using Clause = std::vector<Literal>;

/// Truth values for variables 1..n, stored at index var-1.
struct Assignment {
  std::vector<bool> bits;

  std::size_t size() const noexcept { return bits.size(); }
  bool value(int var) const { return bits.at(static_cast<std::size_t>(var) - 1); }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// CNF over variables 1..var_count. Construction rejects out-of-range
/// literals, empty clauses and clauses holding both l and -l.
class CnfFormula {
 public:
  explicit CnfFormula(std::size_t var_count, std::vector<Clause> clauses = {});

  std::size_t var_count() const noexcept { return var_count_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  std::size_t clause_count() const noexcept { return clauses_.size(); }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::size_t var_count_;
  std::vector<Clause> clauses_;
};

/// Parity constraint: XOR of `variables` equals `parity`. An empty variable
/// set reads "parity = 0".
struct XorConstraint {
  std::vector<int> variables;  // sorted, distinct
  bool parity = false;

  bool holds(const Assignment& a) const;
};

/// Throws ParseError (with the 1-based line number) on a malformed header,
/// out-of-range literal, tautological or empty clause, or a clause count
/// that disagrees with the header.
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);
CnfFormula read_dimacs_file(const std::string& path);

/// Header line then one zero-terminated clause per line.
std::string to_dimacs(const CnfFormula& f);

/// Throws ArityError when the assignment length differs from var_count.
bool evaluate(const CnfFormula& f, const Assignment& a);

/// Clause union over a shared variable set; throws ArityError on mismatch.
CnfFormula conjoin(const CnfFormula& f, const CnfFormula& h);

/// `copies` disjoint copies of f; copy j (0-based) has its variables shifted
/// by j * var_count, so the model count is count(f)^copies. Throws
/// ResourceLimit if copies * var_count exceeds `budget`.
CnfFormula tensor_power(const CnfFormula& f, std::size_t copies,
                        std::size_t budget = kDefaultVariableBudget);

/// Conjoins parity constraints using chained Tseitin gadgets. The system is
/// first brought to echelon form keyed on each row's highest variable, so
/// that under lowest-index branching every row is forced the moment its
/// second-highest variable is set. Auxiliary variables are numbered after
/// the original ones and are functionally determined by them, so models
/// restricted to the original variables are exactly the models of f that
/// satisfy every constraint.
CnfFormula add_xor_constraints(const CnfFormula& f,
                               const std::vector<XorConstraint>& constraints);

/// Uniform random k-CNF with distinct variables per clause and random signs.
CnfFormula random_kcnf(std::size_t vars, std::size_t clauses, std::size_t k, Rng& rng);

}  // namespace rrkit
