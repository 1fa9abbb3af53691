#include "ulab/noise.hpp"

#include <bit>
#include <fstream>
#include <iterator>

#include "ulab/error.hpp"

namespace ulab {

namespace {

void append_word(Bytes& out, std::uint64_t w) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(w >> shift));
  }
}

}  // namespace

NoiseSource NoiseSource::seeded(std::uint64_t seed) {
  NoiseSource n;
  n.gen_.emplace(seed);
  return n;
}

NoiseSource NoiseSource::from_bytes(Bytes bytes) {
  NoiseSource n;
  n.buffer_ = std::move(bytes);
  return n;
}

NoiseSource NoiseSource::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kInvalidInput, "cannot read noise file " + path.string());
  }
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_bytes(std::move(data));
}

Bytes NoiseSource::seeded_bytes(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  Bytes out;
  out.reserve(n + 8);
  while (out.size() < n) append_word(out, gen());
  out.resize(n);
  return out;
}

bool NoiseSource::refill() {
  if (!gen_) return false;
  buffer_.clear();
  for (int i = 0; i < 64; ++i) append_word(buffer_, (*gen_)());
  pos_ = 0;
  return true;
}

bool NoiseSource::bit() {
  if (pos_ >= buffer_.size() && !refill()) {
    throw Error(Errc::kNoiseExhausted, "noise stream exhausted after " +
                                           std::to_string(consumed_) + " bits");
  }
  const bool b = (buffer_[pos_] >> (7 - bit_)) & 1U;
  if (++bit_ == 8) {
    bit_ = 0;
    ++pos_;
  }
  ++consumed_;
  return b;
}

std::uint64_t NoiseSource::bits(unsigned n) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < n; ++i) v = (v << 1) | (bit() ? 1U : 0U);
  return v;
}

std::uint64_t NoiseSource::uniform_below(std::uint64_t n) {
  if (n == 0) throw Error(Errc::kInvalidInput, "uniform_below(0)");
  if (n == 1) return 0;
  const unsigned width = static_cast<unsigned>(std::bit_width(n - 1));
  for (;;) {
    const std::uint64_t v = bits(width);
    if (v < n) return v;
  }
}

double NoiseSource::unit_real() {
  return static_cast<double>(bits(53)) * 0x1.0p-53;
}

bool NoiseSource::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return unit_real() < p;
}

}  // namespace ulab
