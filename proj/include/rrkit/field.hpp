#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rrkit {

/// A prime modulus p < 2^32, checked by trial division when constructed.
/// Everything downstream takes a Modulus rather than a raw integer, so the
/// primality check runs once per field rather than once per element.
class Modulus {
 public:
  explicit Modulus(std::uint64_t p);

  std::uint32_t value() const noexcept { return p_; }
  friend bool operator==(Modulus, Modulus) = default;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n) noexcept;
/// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);
/// Default field for n x n permanent instances: smallest prime >= max(n+2, 257).
Modulus default_modulus(std::size_t n);

class FieldElement {
 public:
  /// `value` is reduced into [0, p).
  FieldElement(std::int64_t value, Modulus m);
  static FieldElement zero(Modulus m) { return FieldElement(0, m); }
  static FieldElement one(Modulus m) { return FieldElement(1, m); }

  std::uint32_t value() const noexcept { return value_; }
  Modulus modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement pow(std::uint64_t e) const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  /// Canonical order by residue; used for deterministic tie-breaking.
  friend std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b) {
    return a.value_ <=> b.value_;
  }

 private:
  struct Raw {};
  FieldElement(Raw, std::uint32_t v, Modulus m) : value_(v), modulus_(m) {}
  void require_same_field(const FieldElement& o) const;

  std::uint32_t value_;
  Modulus modulus_;
};

/// Throws NoInverse on zero.
FieldElement field_inverse(const FieldElement& a);

/// Square matrix over GF(p), row-major.
class FieldMatrix {
 public:
  FieldMatrix(std::size_t n, Modulus m);
  /// Entries are reduced mod p; the row count fixes n and every row must
  /// have n entries.
  FieldMatrix(const std::vector<std::vector<std::int64_t>>& rows, Modulus m);

  static FieldMatrix identity(std::size_t n, Modulus m);

  std::size_t dimension() const noexcept { return n_; }
  Modulus modulus() const noexcept { return modulus_; }

  FieldElement at(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, const FieldElement& v);
  std::uint32_t raw(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }
  std::span<const std::uint32_t> raw_entries() const noexcept { return entries_; }

  FieldMatrix operator+(const FieldMatrix& o) const;
  FieldMatrix scaled(const FieldElement& s) const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t n_;
  Modulus modulus_;
  std::vector<std::uint32_t> entries_;
};

/// Coefficients lowest degree first, trailing zeros trimmed (the zero
/// polynomial has no coefficients).
class FieldPolynomial {
 public:
  explicit FieldPolynomial(Modulus m) : modulus_(m) {}
  FieldPolynomial(std::vector<FieldElement> coefficients, Modulus m);

  Modulus modulus() const noexcept { return modulus_; }
  const std::vector<FieldElement>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }

  friend bool operator==(const FieldPolynomial&, const FieldPolynomial&) = default;

 private:
  Modulus modulus_;
  std::vector<FieldElement> coeffs_;
};

/// Horner evaluation.
FieldElement evaluate(const FieldPolynomial& poly, const FieldElement& t);

/// The unique polynomial of degree < points.size() through every point.
/// Throws DegenerateNodes on repeated x-coordinates or an empty list.
FieldPolynomial lagrange_interpolate(
    std::span<const std::pair<FieldElement, FieldElement>> points);

}  // namespace rrkit
