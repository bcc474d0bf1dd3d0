#include "starfd/rng.hpp"

#include <numbers>
#include <vector>

namespace starfd {

namespace {

// splitmix64 finalizer; decorrelates nearby keys before seeding.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  std::uint64_t acc = mix(base_seed);
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(acc);
  for (std::uint64_t k : keys) {
    acc = mix(acc ^ mix(k));
    push(acc);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

double RngStream::uniform01() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform_phase() {
  return std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(engine_);
}

}  // namespace starfd
