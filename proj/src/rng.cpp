#include "offrl/rng.hpp"

#include <cassert>

namespace offrl {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t x = a;
  std::uint64_t out = splitmix64(x);
  x ^= b + 0x9e3779b97f4a7c15ULL;
  out ^= splitmix64(x);
  x ^= c + 0xbf58476d1ce4e5b9ULL;
  out ^= splitmix64(x);
  return out;
}

Xoshiro256::Xoshiro256(RngStream stream) {
  std::uint64_t x = stream.base_seed;
  (void)splitmix64(x);
  x ^= stream.stream_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  for (auto& word : state_) word = splitmix64(x);
  // All-zero state is the one invalid seed for xoshiro.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

static inline std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

std::uint64_t Xoshiro256::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Xoshiro256::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Xoshiro256::next_int(int bound) {
  assert(bound > 0);
  return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                           static_cast<unsigned __int128>(bound)) >> 64);
}

int Xoshiro256::sample_categorical(std::span<const double> probs) {
  assert(!probs.empty());
  const double u = next_double();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}

}  // namespace offrl
