#include "hiwish/rng.hpp"

namespace hiwish {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t seed_fold(std::uint64_t master,
                        std::span<const std::uint64_t> values) {
  std::uint64_t h = master;
  for (std::uint64_t v : values) h = splitmix64(h ^ splitmix64(v));
  return h;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  // SplitMix64 state expansion, the seeding recommended for xoshiro.
  std::uint64_t z = seed;
  for (auto &word : s_) {
    z += kGolden;
    std::uint64_t w = z;
    w = (w ^ (w >> 30)) * 0xBF58476D1CE4E5B9ULL;
    w = (w ^ (w >> 27)) * 0x94D049BB133111EBULL;
    word = w ^ (w >> 31);
  }
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_ ^ splitmix64(index));
}

}  // namespace hiwish
