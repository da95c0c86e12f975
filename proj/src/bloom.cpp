#include "sibra/bloom.hpp"

#include <cmath>
#include <stdexcept>

namespace sibra {

namespace {

// 128-bit FNV-1a folded into two 64-bit lanes; the second lane reprocesses
// the state so h1/h2 are independent enough for double hashing.
std::pair<std::uint64_t, std::uint64_t> hash_pair(std::string_view key) {
  std::uint64_t h1 = 1469598103934665603ull;
  for (unsigned char c : key) {
    h1 ^= c;
    h1 *= 1099511628211ull;
  }
  std::uint64_t h2 = h1 ^ 0x9e3779b97f4a7c15ull;
  h2 *= 0xbf58476d1ce4e5b9ull;
  h2 ^= h2 >> 27;
  h2 *= 0x94d049bb133111ebull;
  h2 ^= h2 >> 31;
  return {h1, h2 | 1};  // odd step avoids degenerate cycles
}

}  // namespace

std::size_t BloomFilter::bits_for(std::size_t capacity, double fp_rate) {
  if (capacity == 0 || fp_rate <= 0 || fp_rate >= 1)
    throw std::invalid_argument("bad bloom parameters");
  double ln2 = std::log(2.0);
  double m = -static_cast<double>(capacity) * std::log(fp_rate) / (ln2 * ln2);
  return static_cast<std::size_t>(std::ceil(m));
}

int BloomFilter::hashes_for(std::size_t capacity, std::size_t bits) {
  double k = static_cast<double>(bits) / static_cast<double>(capacity) * std::log(2.0);
  int ki = static_cast<int>(std::lround(k));
  return ki < 1 ? 1 : ki;
}

BloomFilter::BloomFilter(std::size_t capacity, double fp_rate)
    : bit_count_(bits_for(capacity, fp_rate)),
      hash_count_(hashes_for(capacity, bit_count_)),
      words_((bit_count_ + 63) / 64, 0) {}

void BloomFilter::insert(std::string_view key) {
  auto [h1, h2] = hash_pair(key);
  for (int i = 0; i < hash_count_; ++i) {
    std::uint64_t bit = (h1 + static_cast<std::uint64_t>(i) * h2) % bit_count_;
    words_[bit >> 6] |= 1ull << (bit & 63);
  }
  ++inserted_;
}

bool BloomFilter::contains(std::string_view key) const {
  auto [h1, h2] = hash_pair(key);
  for (int i = 0; i < hash_count_; ++i) {
    std::uint64_t bit = (h1 + static_cast<std::uint64_t>(i) * h2) % bit_count_;
    if (!(words_[bit >> 6] & (1ull << (bit & 63)))) return false;
  }
  return true;
}

void BloomFilter::clear() {
  std::fill(words_.begin(), words_.end(), 0);
  inserted_ = 0;
}

}  // namespace sibra
