#include "rrkit/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rrkit/errors.hpp"

namespace rrkit {

namespace {

// Empty string if the clause is acceptable, otherwise the reason.
std::string clause_problem(const Clause& c, std::size_t var_count) {
  if (c.empty()) return "empty clause";
  for (Literal l : c) {
    const auto v = static_cast<std::size_t>(std::abs(l));
    if (l == 0 || v > var_count)
      return "literal " + std::to_string(l) + " out of range 1.." + std::to_string(var_count);
  }
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c[i] == -c[j]) return "tautological clause on variable " + std::to_string(std::abs(c[i]));
  return {};
}

bool parse_long(std::string_view tok, long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

CnfFormula::CnfFormula(std::size_t var_count, std::vector<Clause> clauses)
    : var_count_(var_count), clauses_(std::move(clauses)) {
  if (var_count_ == 0) throw ArityError("a formula needs at least one variable");
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (auto why = clause_problem(clauses_[i], var_count_); !why.empty())
      throw ArityError("clause " + std::to_string(i + 1) + ": " + why);
  }
}

bool XorConstraint::holds(const Assignment& a) const {
  bool acc = false;
  for (int v : variables) acc ^= a.value(v);
  return acc == parity;
}

CnfFormula parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  long vars = 0;
  long declared = 0;
  std::vector<Clause> clauses;
  Clause current;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    const auto first = sv.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    sv.remove_prefix(first);
    if (sv.front() == 'c') continue;
    if (sv.front() == '%') break;  // SATLIB end marker
    if (sv.front() == 'p') {
      if (have_header) throw ParseError(lineno, "duplicate header");
      std::istringstream hs{std::string(sv)};
      std::string p, fmt, v, c, extra;
      hs >> p >> fmt >> v >> c;
      if (p != "p" || fmt != "cnf" || !parse_long(v, vars) || !parse_long(c, declared) ||
          (hs >> extra))
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      if (vars <= 0) throw ParseError(lineno, "variable count must be positive");
      if (declared < 0) throw ParseError(lineno, "negative clause count");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause data before 'p cnf' header");

    std::size_t pos = 0;
    while (pos < sv.size()) {
      const auto start = sv.find_first_not_of(" \t\r", pos);
      if (start == std::string_view::npos) break;
      auto end = sv.find_first_of(" \t\r", start);
      if (end == std::string_view::npos) end = sv.size();
      long lit = 0;
      if (!parse_long(sv.substr(start, end - start), lit))
        throw ParseError(lineno, "bad literal '" + std::string(sv.substr(start, end - start)) + "'");
      pos = end;
      if (lit == 0) {
        if (auto why = clause_problem(current, static_cast<std::size_t>(vars)); !why.empty())
          throw ParseError(lineno, why);
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::abs(lit) > vars)
        throw ParseError(lineno, "literal " + std::to_string(lit) + " out of range 1.." +
                                     std::to_string(vars));
      current.push_back(static_cast<Literal>(lit));
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(lineno, "last clause is not zero-terminated");
  if (static_cast<long>(clauses.size()) != declared)
    throw ParseError(lineno, "header declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(clauses.size()));
  return CnfFormula(static_cast<std::size_t>(vars), std::move(clauses));
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

CnfFormula read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_dimacs(in);
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.var_count() << ' ' << f.clause_count() << '\n';
  for (const auto& c : f.clauses()) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

bool evaluate(const CnfFormula& f, const Assignment& a) {
  if (a.size() != f.var_count())
    throw ArityError("assignment has " + std::to_string(a.size()) + " values, formula has " +
                     std::to_string(f.var_count()) + " variables");
  for (const auto& c : f.clauses()) {
    const bool sat = std::any_of(c.begin(), c.end(), [&](Literal l) {
      return a.value(std::abs(l)) == (l > 0);
    });
    if (!sat) return false;
  }
  return true;
}

CnfFormula conjoin(const CnfFormula& f, const CnfFormula& h) {
  if (f.var_count() != h.var_count())
    throw ArityError("conjoin: " + std::to_string(f.var_count()) + " vs " +
                     std::to_string(h.var_count()) + " variables");
  auto clauses = f.clauses();
  clauses.insert(clauses.end(), h.clauses().begin(), h.clauses().end());
  return CnfFormula(f.var_count(), std::move(clauses));
}

CnfFormula tensor_power(const CnfFormula& f, std::size_t copies, std::size_t budget) {
  if (copies == 0) throw ArityError("tensor power needs at least one copy");
  const std::size_t n = f.var_count();
  if (copies * n > budget)
    throw ResourceLimit("tensor power " + std::to_string(copies) + " of a " + std::to_string(n) +
                        "-variable formula needs " + std::to_string(copies * n) +
                        " variables, budget is " + std::to_string(budget));
  std::vector<Clause> clauses;
  clauses.reserve(copies * f.clause_count());
  for (std::size_t j = 0; j < copies; ++j) {
    const int shift = static_cast<int>(j * n);
    for (const auto& c : f.clauses()) {
      Clause shifted;
      shifted.reserve(c.size());
      for (Literal l : c) shifted.push_back(l > 0 ? l + shift : l - shift);
      clauses.push_back(std::move(shifted));
    }
  }
  return CnfFormula(copies * n, std::move(clauses));
}

namespace {

// Dense GF(2) row over variables 1..n (bit v-1), with its right-hand side.
struct XorRow {
  std::vector<std::uint64_t> bits;
  bool parity = false;

  long top() const {
    for (std::size_t w = bits.size(); w > 0; --w)
      if (bits[w - 1] != 0)
        return static_cast<long>((w - 1) * 64 + 63 - static_cast<unsigned>(__builtin_clzll(bits[w - 1])));
    return -1;
  }
  void absorb(const XorRow& o) {
    for (std::size_t w = 0; w < bits.size(); ++w) bits[w] ^= o.bits[w];
    parity ^= o.parity;
  }
};

}  // namespace

CnfFormula add_xor_constraints(const CnfFormula& f,
                               const std::vector<XorConstraint>& constraints) {
  if (constraints.empty()) return f;
  const std::size_t n = f.var_count();
  const std::size_t words = (n + 63) / 64;

  // pivot[v] holds the row whose highest variable is v (0-based).
  std::vector<XorRow> pivot(n);
  std::vector<bool> used(n, false);
  bool inconsistent = false;
  for (const auto& xc : constraints) {
    XorRow row{std::vector<std::uint64_t>(words, 0), xc.parity};
    for (int v : xc.variables) {
      if (v < 1 || static_cast<std::size_t>(v) > n)
        throw ArityError("xor constraint variable " + std::to_string(v) + " out of range");
      row.bits[(v - 1) / 64] ^= std::uint64_t{1} << ((v - 1) % 64);
    }
    while (true) {
      const long t = row.top();
      if (t < 0) {
        if (row.parity) inconsistent = true;  // reduced to 0 = 1
        break;
      }
      if (!used[t]) {
        pivot[t] = std::move(row);
        used[t] = true;
        break;
      }
      row.absorb(pivot[t]);
    }
  }

  auto clauses = f.clauses();
  int next_aux = static_cast<int>(n);
  if (inconsistent) {
    const int z = ++next_aux;
    clauses.push_back({z});
    clauses.push_back({-z});
    return CnfFormula(static_cast<std::size_t>(next_aux), std::move(clauses));
  }

  for (std::size_t t = 0; t < n; ++t) {
    if (!used[t]) continue;
    const XorRow& row = pivot[t];
    std::vector<int> vars;
    for (std::size_t v = 0; v < n; ++v)
      if ((row.bits[v / 64] >> (v % 64)) & 1U) vars.push_back(static_cast<int>(v) + 1);
    if (vars.size() == 1) {
      clauses.push_back({row.parity ? vars[0] : -vars[0]});
      continue;
    }
    // Chain acc_1 = v1 ^ v2, acc_k = acc_{k-1} ^ v_{k+1}, closing with
    // acc ^ v_last = parity.
    int acc = vars[0];
    for (std::size_t i = 1; i + 1 < vars.size(); ++i) {
      const int a = ++next_aux;
      const int q = vars[i];
      clauses.push_back({-a, acc, q});
      clauses.push_back({-a, -acc, -q});
      clauses.push_back({a, -acc, q});
      clauses.push_back({a, acc, -q});
      acc = a;
    }
    const int last = vars.back();
    if (row.parity) {
      clauses.push_back({acc, last});
      clauses.push_back({-acc, -last});
    } else {
      clauses.push_back({-acc, last});
      clauses.push_back({acc, -last});
    }
  }
  return CnfFormula(static_cast<std::size_t>(next_aux), std::move(clauses));
}

CnfFormula random_kcnf(std::size_t vars, std::size_t clauses, std::size_t k, Rng& rng) {
  if (k == 0 || k > vars) throw ArityError("random_kcnf: need 1 <= k <= vars");
  std::uniform_int_distribution<int> pick(1, static_cast<int>(vars));
  std::bernoulli_distribution sign(0.5);
  std::vector<Clause> out;
  out.reserve(clauses);
  for (std::size_t c = 0; c < clauses; ++c) {
    Clause cl;
    while (cl.size() < k) {
      const int v = pick(rng);
      if (std::none_of(cl.begin(), cl.end(), [&](Literal l) { return std::abs(l) == v; }))
        cl.push_back(sign(rng) ? v : -v);
    }
    out.push_back(std::move(cl));
  }
  return CnfFormula(vars, std::move(out));
}

}  // namespace rrkit
