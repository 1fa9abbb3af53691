#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <optional>

#include "ulab/bytes.hpp"

namespace ulab {

// A stream of random bits consumed most-significant-bit first from a
// sequence of bytes. The seeded form expands mt19937_64 output words into
// 8 big-endian bytes each, so dumping those bytes to a file and reading
// the file back yields the same stream.
class NoiseSource {
 public:
  static NoiseSource seeded(std::uint64_t seed);
  static NoiseSource from_bytes(Bytes bytes);
  // Throws Error(kInvalidInput) if the file cannot be read.
  static NoiseSource from_file(const std::filesystem::path& path);

  // Throws Error(kNoiseExhausted) once a byte-backed stream runs dry.
  bool bit();
  // n <= 64 bits as an unsigned integer, first bit most significant.
  std::uint64_t bits(unsigned n);
  std::uint8_t byte() { return static_cast<std::uint8_t>(bits(8)); }

  // Rejection sampling on bit_width(n - 1) bits; n == 1 consumes nothing.
  std::uint64_t uniform_below(std::uint64_t n);
  // 53 bits scaled into [0, 1).
  double unit_real();
  // p <= 0 and p >= 1 consume nothing; otherwise one unit_real draw.
  bool bernoulli(double p);

  std::uint64_t consumed_bits() const { return consumed_; }

  // The next n bytes the seeded generator would produce from a fresh start.
  static Bytes seeded_bytes(std::uint64_t seed, std::size_t n);

 private:
  NoiseSource() = default;
  bool refill();

  std::optional<std::mt19937_64> gen_;
  Bytes buffer_;
  std::size_t pos_ = 0;
  unsigned bit_ = 0;  // next bit within buffer_[pos_], 0 = MSB
  std::uint64_t consumed_ = 0;
};

}  // namespace ulab
