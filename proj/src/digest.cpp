#include "rrkit/digest.hpp"

#include <string>

#include "rrkit/rng.hpp"

namespace rrkit {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ v); }

}  // namespace

std::uint64_t canonical_hash(const FieldMatrix& m) {
  std::uint64_t h = mix(fnv1a64("matrix"), m.modulus().value());
  h = mix(h, m.dimension());
  for (auto e : m.raw_entries()) h = mix(h, e);
  return h;
}

std::uint64_t canonical_hash(const FieldElement& v) {
  return mix(mix(fnv1a64("element"), v.modulus().value()), v.value());
}

std::uint64_t canonical_hash(const CnfFormula& f) { return fnv1a64(to_dimacs(f)); }

std::uint64_t canonical_hash(std::uint64_t v) { return mix(fnv1a64("u64"), v); }

std::uint64_t canonical_hash(bool v) { return mix(fnv1a64("bool"), v ? 1 : 0); }

}  // namespace rrkit
