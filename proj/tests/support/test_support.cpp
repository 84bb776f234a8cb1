#include "test_support.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include <unistd.h>

namespace speechlift::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("speechlift-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

AudioBuffer sine(double hz, double amplitude, double seconds, int rate, std::size_t channels) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  return AudioBuffer(rate, std::vector<std::vector<double>>(channels, x));
}

AudioBuffer white_noise(std::size_t channels, std::size_t frames, int rate, double stddev, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<std::vector<double>> planar(channels, std::vector<double>(frames));
  for (auto& ch : planar)
    for (double& v : ch) v = dist(gen);
  return AudioBuffer(rate, std::move(planar));
}

AudioBuffer stereo(const std::vector<double>& left, const std::vector<double>& right, int rate) {
  return AudioBuffer(rate, {left, right});
}

std::vector<std::complex<double>> naive_dft(const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      acc += frame[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / n);
    out[k] = acc;
  }
  return out;
}

std::vector<double> direct_forward(const MaskModel& model, const FeatureMap& input) {
  const std::size_t T = input.frames;
  const std::size_t F = input.bins;
  std::vector<double> act = input.values;  // channel-major (c, t, f)
  for (std::size_t li = 0; li < model.config().layers.size(); ++li) {
    const auto& l = model.config().layers[li];
    const auto pt = static_cast<long>(l.kernel_time / 2);
    const auto pf = static_cast<long>(l.kernel_freq / 2);
    std::vector<double> next(l.out_channels * T * F);
    for (std::size_t o = 0; o < l.out_channels; ++o) {
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t f = 0; f < F; ++f) {
          double acc = model.layers()[li].bias[o];
          for (std::size_t c = 0; c < l.in_channels; ++c) {
            for (std::size_t dt = 0; dt < l.kernel_time; ++dt) {
              for (std::size_t df = 0; df < l.kernel_freq; ++df) {
                const long tt = static_cast<long>(t) + static_cast<long>(dt) - pt;
                const long ff = static_cast<long>(f) + static_cast<long>(df) - pf;
                if (tt < 0 || ff < 0 || tt >= static_cast<long>(T) || ff >= static_cast<long>(F)) continue;
                acc += model.weight(li, o, c, dt, df) * act[(c * T + static_cast<std::size_t>(tt)) * F +
                                                            static_cast<std::size_t>(ff)];
              }
            }
          }
          next[(o * T + t) * F + f] =
              l.activation == Activation::kRelu ? std::max(acc, 0.0) : 1.0 / (1.0 + std::exp(-acc));
        }
      }
    }
    act = std::move(next);
  }
  return act;
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace speechlift::testing
