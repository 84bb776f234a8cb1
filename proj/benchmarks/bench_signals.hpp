#pragma once

#include <random>

#include "speechlift/audio_buffer.hpp"

namespace speechlift::bench {

inline AudioBuffer noise(std::size_t channels, std::size_t frames, int rate, std::uint64_t seed = 1) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<std::vector<double>> ch(channels, std::vector<double>(frames));
  for (auto& c : ch)
    for (double& v : c) v = d(gen);
  return AudioBuffer(rate, std::move(ch));
}

}  // namespace speechlift::bench
