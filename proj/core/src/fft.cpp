#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace speechlift::detail {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// fftw planning is not thread-safe; execution with the new-array interface is.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  auto* cplx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  const int len = static_cast<int>(n);
  PlanPair p;
  p.forward = fftw_plan_dft_r2c_1d(len, real, cplx, FFTW_ESTIMATE);
  p.inverse = fftw_plan_dft_c2r_1d(len, cplx, real, FFTW_ESTIMATE);
  fftw_free(real);
  fftw_free(cplx);
  if (p.forward == nullptr || p.inverse == nullptr) throw std::runtime_error("fftw planning failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace

struct RealFft::Impl {
  PlanPair plans;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2) throw std::invalid_argument("RealFft: length must be at least 2");
  impl_->plans = plans_for(n);
  impl_->real = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  impl_->cplx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  if (impl_->real == nullptr || impl_->cplx == nullptr) {
    fftw_free(impl_->real);
    fftw_free(impl_->cplx);
    throw std::bad_alloc();
  }
}

RealFft::~RealFft() {
  fftw_free(impl_->real);
  fftw_free(impl_->cplx);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_ / 2 + 1)
    throw std::invalid_argument("RealFft::forward: size mismatch");
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute_dft_r2c(impl_->plans.forward, impl_->real, impl_->cplx);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {impl_->cplx[k][0], impl_->cplx[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (out.size() != n_ || in.size() != n_ / 2 + 1)
    throw std::invalid_argument("RealFft::inverse: size mismatch");
  for (std::size_t k = 0; k < in.size(); ++k) {
    impl_->cplx[k][0] = in[k].real();
    impl_->cplx[k][1] = in[k].imag();
  }
  // c2r drops the imaginary parts of the DC and Nyquist bins.
  fftw_execute_dft_c2r(impl_->plans.inverse, impl_->cplx, impl_->real);
  std::copy(impl_->real, impl_->real + n_, out.begin());
}

}  // namespace speechlift::detail
