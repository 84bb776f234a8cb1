#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace speechlift::detail {

// Real-input transform of fixed length n backed by FFTW. Plans are created
// once per length and shared; each RealFft owns its scratch arrays, so one
// instance per thread.
//
// forward: out[k] = sum_t in[t] exp(-2 pi i k t / n), k in [0, n/2]
// inverse: out[t] = sum_k X[k] exp(+2 pi i k t / n) over the Hermitian
//          extension (unnormalized: n times the true inverse)
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace speechlift::detail
