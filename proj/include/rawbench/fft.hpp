// Copyright 2026 The rawbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWBENCH_FFT_HPP_
#define RAWBENCH_FFT_HPP_

// Real-to-complex transforms on top of FFTW. Plans are created once per size
// under a lock (the FFTW planner is not thread-safe) and executed with the
// new-array interface on freshly aligned buffers, which is thread-safe and
// keeps results independent of caller buffer alignment.

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "rawbench/error.hpp"

namespace rawbench::fft {

using Complex = std::complex<double>;

namespace detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using AlignedBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
AlignedBuffer<T> allocate(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)));
  if (p == nullptr) throw Error("fftw_malloc failed");
  return AlignedBuffer<T>(p);
}

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan forward(std::size_t n) { return get(n, true); }
  fftw_plan inverse(std::size_t n) { return get(n, false); }

 private:
  fftw_plan get(std::size_t n, bool forward) {
    std::lock_guard lock(mutex_);
    auto& plans = forward ? forward_ : inverse_;
    if (auto it = plans.find(n); it != plans.end()) return it->second;
    auto real = allocate<double>(n);
    auto spectrum = allocate<fftw_complex>(n / 2 + 1);
    const int size = static_cast<int>(n);
    fftw_plan plan =
        forward ? fftw_plan_dft_r2c_1d(size, real.get(), spectrum.get(), FFTW_ESTIMATE)
                : fftw_plan_dft_c2r_1d(size, spectrum.get(), real.get(), FFTW_ESTIMATE);
    if (plan == nullptr) throw Error("FFTW planning failed");
    plans.emplace(n, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> forward_;
  std::map<std::size_t, fftw_plan> inverse_;
};

}  // namespace detail

// One-sided spectrum (n/2 + 1 bins) of a real signal of length n. Shorter
// input is zero-padded to n.
inline std::vector<Complex> forward_real(std::span<const double> x, std::size_t n) {
  if (n == 0) throw InvalidArgument("FFT size must be positive");
  if (x.size() > n) throw InvalidArgument("FFT input longer than transform size");
  auto plan = detail::PlanCache::instance().forward(n);
  auto in = detail::allocate<double>(n);
  auto out = detail::allocate<fftw_complex>(n / 2 + 1);
  std::memset(in.get(), 0, sizeof(double) * n);
  std::memcpy(in.get(), x.data(), sizeof(double) * x.size());
  fftw_execute_dft_r2c(plan, in.get(), out.get());
  std::vector<Complex> spectrum(n / 2 + 1);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    spectrum[k] = Complex(out[k][0], out[k][1]);
  }
  return spectrum;
}

inline std::vector<Complex> forward_real(std::span<const double> x) {
  return forward_real(x, x.size());
}

// Inverse of forward_real, including the 1/n normalization.
inline std::vector<double> inverse_real(std::span<const Complex> spectrum, std::size_t n) {
  if (spectrum.size() != n / 2 + 1) {
    throw InvalidArgument("inverse FFT: spectrum size does not match n/2+1");
  }
  auto plan = detail::PlanCache::instance().inverse(n);
  auto in = detail::allocate<fftw_complex>(n / 2 + 1);
  auto out = detail::allocate<double>(n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plan, in.get(), out.get());
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = out[i] * scale;
  return x;
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Linear convolution truncated to the first `keep` output samples.
inline std::vector<double> convolve(std::span<const double> x, std::span<const double> h,
                                    std::size_t keep) {
  if (x.empty() || h.empty()) return std::vector<double>(keep, 0.0);
  const std::size_t n = next_pow2(x.size() + h.size() - 1);
  auto fx = forward_real(x, n);
  const auto fh = forward_real(h, n);
  for (std::size_t k = 0; k < fx.size(); ++k) fx[k] *= fh[k];
  auto y = inverse_real(fx, n);
  y.resize(keep, 0.0);
  return y;
}

// r[lag + max_lag] = sum_n a[n] * b[n + lag] for lag in [-max_lag, max_lag].
inline std::vector<double> cross_correlate(std::span<const double> a, std::span<const double> b,
                                           std::size_t max_lag) {
  const std::size_t n = next_pow2(a.size() + b.size() + 1);
  auto fa = forward_real(a, n);
  const auto fb = forward_real(b, n);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] = std::conj(fa[k]) * fb[k];
  const auto r = inverse_real(fa, n);
  std::vector<double> out(2 * max_lag + 1, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const long lag = static_cast<long>(i) - static_cast<long>(max_lag);
    const long idx = lag >= 0 ? lag : static_cast<long>(n) + lag;
    if (lag >= static_cast<long>(b.size()) || -lag >= static_cast<long>(a.size())) continue;
    out[i] = r[static_cast<std::size_t>(idx)];
  }
  return out;
}

}  // namespace rawbench::fft

#endif  // RAWBENCH_FFT_HPP_
