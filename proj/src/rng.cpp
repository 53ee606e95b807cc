#include "rrkit/rng.hpp"

#include <stdexcept>

namespace rrkit {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept {
  return splitmix64(master ^ fnv1a64(label));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index) noexcept {
  return splitmix64(derive_seed(master, label) + index);
}

RandomBits::RandomBits(std::size_t length)
    : words_((length + 63) / 64, 0), length_(length) {}

RandomBits::RandomBits(std::vector<std::uint64_t> words, std::size_t length)
    : words_(std::move(words)), length_(length) {
  if (words_.size() != (length + 63) / 64)
    throw std::invalid_argument("RandomBits: word count does not match length");
  mask_tail();
}

RandomBits RandomBits::draw(std::size_t length, Rng& rng) {
  RandomBits r(length);
  for (auto& w : r.words_) w = rng();
  r.mask_tail();
  return r;
}

RandomBits RandomBits::from_integer(std::uint64_t value, std::size_t length) {
  if (length > 64) throw std::invalid_argument("RandomBits::from_integer: length > 64");
  RandomBits r(length);
  if (length > 0) r.words_[0] = value;
  r.mask_tail();
  return r;
}

void RandomBits::mask_tail() noexcept {
  const std::size_t rem = length_ % 64;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

bool RandomBits::bit(std::size_t i) const {
  if (i >= length_) throw std::out_of_range("RandomBits::bit");
  return (words_[i / 64] >> (i % 64)) & 1U;
}

std::uint64_t RandomBits::read(std::size_t offset, std::size_t count) const {
  if (count > 64 || offset + count > length_)
    throw std::out_of_range("RandomBits::read");
  if (count == 0) return 0;
  const std::size_t w = offset / 64;
  const std::size_t s = offset % 64;
  std::uint64_t v = words_[w] >> s;
  if (s != 0 && s + count > 64) v |= words_[w + 1] << (64 - s);
  if (count < 64) v &= (std::uint64_t{1} << count) - 1;
  return v;
}

RandomBits RandomBits::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > length_) throw std::out_of_range("RandomBits::slice");
  RandomBits out(count);
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    const std::size_t take = std::min<std::size_t>(64, count - 64 * i);
    out.words_[i] = read(offset + 64 * i, take);
  }
  return out;
}

RandomBits RandomBits::concat(const RandomBits& tail) const {
  RandomBits out(length_ + tail.length_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i];
  const std::size_t s = length_ % 64;
  std::size_t w = length_ / 64;
  for (std::size_t i = 0; i < tail.words_.size(); ++i) {
    const std::uint64_t v = tail.words_[i];
    if (s == 0) {
      out.words_[w + i] = v;
    } else {
      out.words_[w + i] |= v << s;
      if (w + i + 1 < out.words_.size()) out.words_[w + i + 1] |= v >> (64 - s);
    }
  }
  out.mask_tail();
  return out;
}

std::uint64_t RandomBits::digest() const noexcept {
  std::uint64_t h = splitmix64(length_);
  for (auto w : words_) h = splitmix64(h ^ w);
  return h;
}

}  // namespace rrkit
