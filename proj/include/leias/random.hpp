#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace leias {

// One named pseudo-random substream. The stream's state depends only on the
// scenario seed and its name, so consumers never perturb each other.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view name);

  // Uniform on [0, 1) with 53 bits of resolution; platform independent.
  double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  // Uniform over {0, ..., n-1}; n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::mt19937_64 engine_;
};

// The substreams the simulator consumes.
struct RngStreams {
  explicit RngStreams(std::uint64_t seed)
      : errors(seed, "errors"), selection(seed, "selection"), trials(seed, "trials") {}

  RandomStream errors;     // sensor error magnitudes and directions
  RandomStream selection;  // Boltzmann action sampling
  RandomStream trials;     // training-trial sensor and error draws
};

}  // namespace leias
