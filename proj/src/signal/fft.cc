// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not thread-safe; execution with the new-array interface
// is. Plans live for the whole process.
PlanPair GetPlans(int n) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* real = fftw_alloc_real(n);
  fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair plans;
  plans.forward = fftw_plan_dft_r2c_1d(n, real, cplx, flags);
  plans.inverse = fftw_plan_dft_c2r_1d(n, cplx, real, flags);
  fftw_free(real);
  fftw_free(cplx);
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(int size) : size_(size) {
  DEREVERB_CHECK(size > 0, "FFT size must be positive");
  PlanPair plans = GetPlans(size);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  DEREVERB_CHECK(static_cast<int>(in.size()) == size_ &&
                     static_cast<int>(out.size()) == num_bins(),
                 "RealFft::Forward size mismatch");
  // r2c leaves its input untouched.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  DEREVERB_CHECK(static_cast<int>(in.size()) == num_bins() &&
                     static_cast<int>(out.size()) == size_,
                 "RealFft::Inverse size mismatch");
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / size_;
  for (double& v : out) v *= scale;
}

std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  if (std::min(a.size(), b.size()) <= 32) {
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  RealFft fft(static_cast<int>(n));
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(fft.num_bins()), fb(fft.num_bins());
  fft.Forward(pa, fa);
  fft.Forward(pb, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.Inverse(fa, pa);
  pa.resize(out_len);
  return pa;
}

}  // namespace dereverb
