#pragma once

#include <cstdint>
#include <span>

namespace offrl {

// Identifies one reproducible random stream. Distinct (base_seed, stream_index)
// pairs yield statistically independent sequences; identical pairs replay
// bit-identically. Episode i of a rollout uses stream_index + i, so datasets
// are prefix-stable when n grows and safe to generate in parallel.
struct RngStream {
  std::uint64_t base_seed = 0;
  std::uint64_t stream_index = 0;

  RngStream at(std::uint64_t index) const { return {base_seed, index}; }
};

// Folds up to three 64-bit labels into a fresh base seed (splitmix64 chain).
// Used by the harness to derive per-(n, replicate) stream families.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

// xoshiro256** seeded through splitmix64. Self-contained so sampled datasets
// are identical across standard libraries and platforms.
class Xoshiro256 {
 public:
  explicit Xoshiro256(RngStream stream);

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53 mantissa bits.
  double next_double();
  // Uniform in [0, bound).
  int next_int(int bound);
  // Inverse-CDF draw from a probability row; the final bucket absorbs
  // cumulative rounding slack.
  int sample_categorical(std::span<const double> probs);

 private:
  std::uint64_t state_[4];
};

}  // namespace offrl
