#pragma once

#include <concepts>
#include <cstdint>

#include "rrkit/field.hpp"
#include "rrkit/formula.hpp"

namespace rrkit {

// 64-bit hashes of canonical serializations. Used for batch provenance and
// to bucket queries when estimating distribution distances; collisions only
// make distance estimates optimistic.
std::uint64_t canonical_hash(const FieldMatrix& m);
std::uint64_t canonical_hash(const FieldElement& v);
std::uint64_t canonical_hash(const CnfFormula& f);
std::uint64_t canonical_hash(std::uint64_t v);
std::uint64_t canonical_hash(bool v);

/// Other integer types hash as their 64-bit two's-complement value.
template <std::integral T>
  requires(!std::same_as<T, bool> && !std::same_as<T, std::uint64_t>)
std::uint64_t canonical_hash(T v) {
  return canonical_hash(static_cast<std::uint64_t>(v));
}

}  // namespace rrkit
