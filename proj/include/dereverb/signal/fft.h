// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_SIGNAL_FFT_H_
#define DEREVERB_SIGNAL_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace dereverb {

// Real-input DFT of fixed length backed by FFTW. Plans are cached per length
// and shared; Forward/Inverse are safe to call concurrently.
class RealFft {
 public:
  explicit RealFft(int size);

  int size() const { return size_; }
  int num_bins() const { return size_ / 2 + 1; }

  // out[k] = sum_n in[n] exp(-j 2 pi k n / N), k = 0..N/2.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  // Inverse of Forward including the 1/N factor. Imaginary parts of the DC
  // and Nyquist bins are ignored.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  int size_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Linear convolution via FFT; output length a.size() + b.size() - 1.
std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b);

}  // namespace dereverb

#endif  // DEREVERB_SIGNAL_FFT_H_
