#include "rrkit/fixtures.hpp"

#include <bit>
#include <cmath>

#include "rrkit/errors.hpp"

namespace rrkit {

namespace {

std::uint64_t failure_cutoff(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArityError("failure probability must lie in [0, 1]");
  return static_cast<std::uint64_t>(std::llround(p * static_cast<double>(1U << kFailureCoinBits)));
}

std::uint64_t low_bits(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void check_length(std::size_t n) {
  if (n == 0 || n > 63) throw ArityError("instance length must lie in [1, 63]");
}

}  // namespace

bool parity(std::uint64_t x) noexcept { return std::popcount(x) % 2 == 1; }

ParityReduction parity_outer(std::size_t n, std::size_t k, double beta) {
  check_length(n);
  if (k == 0) throw ArityError("outer reduction needs k >= 1");
  const std::uint64_t cutoff = failure_cutoff(beta);
  ParityReduction rr;
  rr.name = "parity-rsr";
  rr.input_domain = "parity";
  rr.query_domain = "parity";
  rr.k = k;
  rr.randomness_len = k * n + kFailureCoinBits;
  rr.sigma = [n](std::size_t j, const std::uint64_t& x, const RandomBits& r) {
    return (x ^ r.read(j * n, n)) & low_bits(n);
  };
  rr.phi = [n, k, cutoff](const std::uint64_t&, const RandomBits& r, const std::vector<bool>& b) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (b[j] != parity(r.read(j * n, n))) ++ones;
    const bool majority = 2 * ones > k;
    return r.read(k * n, kFailureCoinBits) < cutoff ? !majority : majority;
  };
  return rr;
}

ParitySatReduction parity_inner(std::size_t n, double alpha) {
  check_length(n);
  const std::uint64_t cutoff = failure_cutoff(alpha);
  ParitySatReduction rr;
  rr.name = "parity-sat";
  rr.input_domain = "parity";
  rr.query_domain = "sat";
  rr.k = n;
  rr.randomness_len = n + kFailureCoinBits;
  rr.sigma = [n](std::size_t i, const std::uint64_t& y, const RandomBits& r) {
    const bool bit = ((y ^ r.read(0, n)) >> i) & 1U;
    return bit ? CnfFormula(1, {{1}}) : CnfFormula(1, {{1}, {-1}});
  };
  rr.phi = [n, cutoff](const std::uint64_t&, const RandomBits& r, const std::vector<bool>& b) {
    bool out = parity(r.read(0, n));
    for (bool v : b) out ^= v;
    return r.read(n, kFailureCoinBits) < cutoff ? !out : out;
  };
  return rr;
}

}  // namespace rrkit
