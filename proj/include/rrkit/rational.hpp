#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rrkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a decimal ("1.5", "0.1", "3") or fraction ("10/9") literal.
/// Throws Error on anything else.
Rational parse_rational(std::string_view text);

/// "a/b" in lowest terms, or "a" when the denominator is 1.
std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// floor(x^(1/t) * 2^frac_bits) / 2^frac_bits for x >= 0.
Rational nth_root_floor(const Rational& x, std::size_t t, std::size_t frac_bits = 16);

/// est / g <= truth <= est * g (both zero counts as within).
bool within_factor(const Rational& estimate, const Rational& truth, const Rational& g);

}  // namespace rrkit
