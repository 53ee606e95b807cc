#include "rrkit/field.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rrkit/errors.hpp"

namespace rrkit {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t c = n | 1;
  while (!is_prime(c)) c += 2;
  return c;
}

Modulus default_modulus(std::size_t n) {
  return Modulus(next_prime(std::max<std::uint64_t>(n + 2, 257)));
}

Modulus::Modulus(std::uint64_t p) {
  if (p > std::numeric_limits<std::uint32_t>::max())
    throw NotPrime("modulus " + std::to_string(p) + " does not fit in 32 bits");
  if (!is_prime(p)) throw NotPrime("modulus " + std::to_string(p) + " is not prime");
  p_ = static_cast<std::uint32_t>(p);
}

FieldElement::FieldElement(std::int64_t value, Modulus m) : value_(0), modulus_(m) {
  const std::int64_t p = m.value();
  std::int64_t r = value % p;
  if (r < 0) r += p;
  value_ = static_cast<std::uint32_t>(r);
}

void FieldElement::require_same_field(const FieldElement& o) const {
  if (modulus_ != o.modulus_)
    throw ModulusMismatch("field elements over GF(" + std::to_string(modulus_.value()) +
                          ") and GF(" + std::to_string(o.modulus_.value()) + ")");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_field(o);
  std::uint64_t s = std::uint64_t{value_} + o.value_;
  if (s >= modulus_.value()) s -= modulus_.value();
  return FieldElement(Raw{}, static_cast<std::uint32_t>(s), modulus_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same_field(o);
  std::uint64_t s = std::uint64_t{value_} + modulus_.value() - o.value_;
  if (s >= modulus_.value()) s -= modulus_.value();
  return FieldElement(Raw{}, static_cast<std::uint32_t>(s), modulus_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_field(o);
  const std::uint64_t prod = std::uint64_t{value_} * o.value_ % modulus_.value();
  return FieldElement(Raw{}, static_cast<std::uint32_t>(prod), modulus_);
}

FieldElement FieldElement::operator-() const {
  return FieldElement(Raw{}, value_ == 0 ? 0 : modulus_.value() - value_, modulus_);
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  FieldElement base = *this;
  FieldElement acc = one(modulus_);
  while (e != 0) {
    if (e & 1U) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

FieldElement field_inverse(const FieldElement& a) {
  if (a.is_zero())
    throw NoInverse("0 has no inverse mod " + std::to_string(a.modulus().value()));
  // Fermat: a^(p-2) = a^-1 for prime p.
  return a.pow(a.modulus().value() - 2);
}

FieldMatrix::FieldMatrix(std::size_t n, Modulus m) : n_(n), modulus_(m), entries_(n * n, 0) {
  if (n == 0) throw ArityError("matrix dimension must be positive");
}

FieldMatrix::FieldMatrix(const std::vector<std::vector<std::int64_t>>& rows, Modulus m)
    : FieldMatrix(rows.size(), m) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_)
      throw ArityError("matrix row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(n_));
    for (std::size_t j = 0; j < n_; ++j)
      entries_[i * n_ + j] = FieldElement(rows[i][j], m).value();
  }
}

FieldMatrix FieldMatrix::identity(std::size_t n, Modulus m) {
  FieldMatrix id(n, m);
  for (std::size_t i = 0; i < n; ++i) id.entries_[i * n + i] = 1;
  return id;
}

FieldElement FieldMatrix::at(std::size_t row, std::size_t col) const {
  return FieldElement(entries_.at(row * n_ + col), modulus_);
}

void FieldMatrix::set(std::size_t row, std::size_t col, const FieldElement& v) {
  if (v.modulus() != modulus_) throw ModulusMismatch("matrix entry from a different field");
  entries_.at(row * n_ + col) = v.value();
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& o) const {
  if (o.modulus_ != modulus_) throw ModulusMismatch("matrix sum across fields");
  if (o.n_ != n_) throw ArityError("matrix sum of different dimensions");
  FieldMatrix out(n_, modulus_);
  const std::uint64_t p = modulus_.value();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = static_cast<std::uint32_t>((std::uint64_t{entries_[i]} + o.entries_[i]) % p);
  return out;
}

FieldMatrix FieldMatrix::scaled(const FieldElement& s) const {
  if (s.modulus() != modulus_) throw ModulusMismatch("matrix scaled by foreign scalar");
  FieldMatrix out(n_, modulus_);
  const std::uint64_t p = modulus_.value();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out.entries_[i] = static_cast<std::uint32_t>(std::uint64_t{entries_[i]} * s.value() % p);
  return out;
}

FieldPolynomial::FieldPolynomial(std::vector<FieldElement> coefficients, Modulus m)
    : modulus_(m), coeffs_(std::move(coefficients)) {
  for (const auto& c : coeffs_)
    if (c.modulus() != m) throw ModulusMismatch("polynomial coefficient from a different field");
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FieldElement evaluate(const FieldPolynomial& poly, const FieldElement& t) {
  if (t.modulus() != poly.modulus()) throw ModulusMismatch("evaluation point from a different field");
  FieldElement acc = FieldElement::zero(poly.modulus());
  const auto& c = poly.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

FieldPolynomial lagrange_interpolate(
    std::span<const std::pair<FieldElement, FieldElement>> points) {
  if (points.empty()) throw DegenerateNodes("interpolation needs at least one point");
  const Modulus m = points.front().first.modulus();
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].first.modulus() != m || points[i].second.modulus() != m)
      throw ModulusMismatch("interpolation points from different fields");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i].first == points[j].first)
        throw DegenerateNodes("repeated node x = " + std::to_string(points[i].first.value()));
  }

  // master(t) = prod (t - x_j), degree n, lowest first.
  std::vector<FieldElement> master(n + 1, FieldElement::zero(m));
  master[0] = FieldElement::one(m);
  for (std::size_t j = 0; j < n; ++j) {
    const FieldElement neg = -points[j].first;
    for (std::size_t d = j + 1; d > 0; --d) master[d] = master[d - 1] + master[d] * neg;
    master[0] = master[0] * neg;
  }

  std::vector<FieldElement> result(n, FieldElement::zero(m));
  std::vector<FieldElement> basis(n, FieldElement::zero(m));
  for (std::size_t i = 0; i < n; ++i) {
    const FieldElement xi = points[i].first;
    // basis(t) = master(t) / (t - x_i) by synthetic division.
    FieldElement carry = master[n];
    for (std::size_t d = n; d > 0; --d) {
      basis[d - 1] = carry;
      carry = master[d - 1] + carry * xi;
    }
    const FieldElement denom = evaluate(FieldPolynomial(basis, m), xi);
    const FieldElement scale = points[i].second * field_inverse(denom);
    for (std::size_t d = 0; d < n; ++d) result[d] += basis[d] * scale;
  }
  return FieldPolynomial(std::move(result), m);
}

}  // namespace rrkit
