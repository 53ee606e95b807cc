#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rrkit {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

// Stream splitting. Every randomized component takes its generator from
//   derive_seed(master, label)            = splitmix64(master ^ fnv1a64(label))
//   derive_seed(master, label, index)     = splitmix64(derive_seed(master, label) + index)
// so that a stream depends only on where it is used, never on the order in
// which streams were requested.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index) noexcept;

inline Rng make_rng(std::uint64_t master, std::string_view label) {
  return Rng(derive_seed(master, label));
}
inline Rng make_rng(std::uint64_t master, std::string_view label,
                    std::uint64_t index) {
  return Rng(derive_seed(master, label, index));
}

/// A finite random string r, packed LSB-first into 64-bit words. Reductions
/// declare how many bits they consume and read them through this type, so
/// that boosted and composed reductions can carve out sub-strings exactly.
class RandomBits {
 public:
  RandomBits() = default;
  explicit RandomBits(std::size_t length);
  RandomBits(std::vector<std::uint64_t> words, std::size_t length);

  /// `length` uniform bits from `rng`.
  static RandomBits draw(std::size_t length, Rng& rng);
  /// The low `length` bits of `value` (length <= 64); used to enumerate r.
  static RandomBits from_integer(std::uint64_t value, std::size_t length);

  std::size_t size() const noexcept { return length_; }
  bool bit(std::size_t i) const;
  /// Reads `count` <= 64 bits starting at `offset` as an integer, bit
  /// `offset` landing in the least significant position.
  std::uint64_t read(std::size_t offset, std::size_t count) const;
  RandomBits slice(std::size_t offset, std::size_t count) const;
  RandomBits concat(const RandomBits& tail) const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::uint64_t digest() const noexcept;

  friend bool operator==(const RandomBits&, const RandomBits&) = default;

 private:
  void mask_tail() noexcept;

  std::vector<std::uint64_t> words_;
  std::size_t length_ = 0;
};

}  // namespace rrkit
