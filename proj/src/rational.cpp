#include "rrkit/rational.hpp"

#include <cctype>

#include "rrkit/errors.hpp"

namespace rrkit {

namespace {

BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error("malformed number '" + std::string(whole) + "'");
  BigInt v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error("malformed number '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

BigInt floor_nth_root(const BigInt& x, std::size_t t) {
  if (x < 2 || t == 1) return x;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (static_cast<unsigned>(msb(x)) / t + 1);
  while (lo < hi) {
    const BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, static_cast<unsigned>(t)) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational q;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt den = parse_digits(s.substr(slash + 1), text);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    q = Rational(parse_digits(s.substr(0, slash), text), den);
  } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = s.substr(0, dot);
    const std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw Error("malformed number '" + std::string(text) + "'");
    const BigInt whole = ip.empty() ? BigInt(0) : parse_digits(ip, text);
    const BigInt frac = fp.empty() ? BigInt(0) : parse_digits(fp, text);
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    q = Rational(whole * scale + frac, scale);
  } else {
    q = Rational(parse_digits(s, text));
  }
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational nth_root_floor(const Rational& x, std::size_t t, std::size_t frac_bits) {
  if (t == 0) throw ArityError("0-th root");
  if (x < 0) throw ArityError("root of a negative number");
  if (t == 1) return x;
  // floor((num / den)^(1/t) * 2^b) = floor((num * 2^(bt) / den)^(1/t)) since
  // floor(y^(1/t)) = floor(floor(y)^(1/t)).
  const BigInt scaled = (numerator(x) << static_cast<unsigned>(frac_bits * t)) / denominator(x);
  return Rational(floor_nth_root(scaled, t), BigInt(1) << static_cast<unsigned>(frac_bits));
}

bool within_factor(const Rational& estimate, const Rational& truth, const Rational& g) {
  return estimate <= truth * g && truth <= estimate * g;
}

}  // namespace rrkit
