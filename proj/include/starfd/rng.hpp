#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace starfd {

// Purpose tags for the independent streams derived from one trial key.
enum class StreamPurpose : std::uint64_t {
  kChannel = 0x43484e4cULL,
  kInit = 0x494e4954ULL,
  kTest = 0x54455354ULL,
};

// A named random stream. Streams built from the same (seed, keys...) tuple are
// identical; different tuples give statistically independent engines, so trials
// can be evaluated in any order or on any thread.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::initializer_list<std::uint64_t> keys);
  RngStream(std::uint64_t base_seed, std::uint64_t trial_index, StreamPurpose purpose)
      : RngStream(base_seed, {trial_index, static_cast<std::uint64_t>(purpose)}) {}

  std::mt19937_64& engine() { return engine_; }

  double uniform01();
  double uniform_phase();  // [0, 2*pi)

 private:
  std::mt19937_64 engine_;
};

}  // namespace starfd
