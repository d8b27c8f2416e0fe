#ifndef HIWISH_RNG_HPP
#define HIWISH_RNG_HPP

#include <cstdint>
#include <span>

namespace hiwish {

// One step of the SplitMix64 output function, used as a 64-bit mixer.
// Bijective, so distinct inputs never collide.
std::uint64_t splitmix64(std::uint64_t x);

// Folds a sequence of values into a master seed:
//   h = master; for v in values: h = splitmix64(h ^ splitmix64(v));
// The study uses this to give every (matrix, sample size, replication)
// cell its own reproducible stream regardless of scheduling.
std::uint64_t seed_fold(std::uint64_t master, std::span<const std::uint64_t> values);

// xoshiro256++ generator, seeded by expanding a 64-bit seed through
// SplitMix64.  Streams are cheap value types; copying one forks the state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform draw on the open interval (0, 1): (next >> 11 + 0.5) * 2^-53.
  // Never returns 0 or 1, so log(u) is always finite.
  double uniform01();

  // Derived stream with seed = seed ^ splitmix64(index).  Substreams of
  // the same parent are independent for distinct indices.
  RngStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace hiwish

#endif  // HIWISH_RNG_HPP
