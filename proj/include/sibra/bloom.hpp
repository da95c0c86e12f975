// bloom.hpp -- fixed-size Bloom filter over byte strings.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sibra {

class BloomFilter {
 public:
  // Sized from expected element count and target false-positive rate.
  BloomFilter(std::size_t capacity, double fp_rate);

  void insert(std::string_view key);
  bool contains(std::string_view key) const;
  void clear();

  std::size_t bit_count() const { return bit_count_; }
  int hash_count() const { return hash_count_; }
  std::size_t inserted() const { return inserted_; }

  static std::size_t bits_for(std::size_t capacity, double fp_rate);
  static int hashes_for(std::size_t capacity, std::size_t bits);

 private:
  std::size_t bit_count_;
  int hash_count_;
  std::size_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sibra
