#pragma once

// Test-only oracles. These deliberately avoid the library's FFT and
// convolution code paths so they can check them independently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "stvsr/tensor.hpp"

namespace stvsr::testing {

inline VideoTensor random_video(std::uint64_t seed, Shape3 shape, std::size_t channels = 1,
                                double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  VideoTensor v(shape, channels);
  for (double& s : v.samples()) s = u(rng);
  return v;
}

inline Kernel3D random_kernel(std::uint64_t seed, Shape3 extent, Shape3 center) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> taps(extent.volume());
  double total = 0.0;
  for (double& v : taps) total += (v = u(rng));
  for (double& v : taps) v /= total;
  return Kernel3D(extent, center, std::move(taps));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const VideoTensor& a, const VideoTensor& b) {
  return max_abs_diff(a.samples(), b.samples());
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

/// Direct O(N^2) 3-D DFT, sign -1 forward.
inline std::vector<Complex> naive_dft(Shape3 s, const std::vector<Complex>& x, bool inverse = false) {
  const double sign = inverse ? 1.0 : -1.0;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> out(s.volume());
  for (std::size_t u = 0; u < s.t; ++u)
    for (std::size_t v = 0; v < s.h; ++v)
      for (std::size_t w = 0; w < s.w; ++w) {
        Complex acc{};
        for (std::size_t t = 0; t < s.t; ++t)
          for (std::size_t h = 0; h < s.h; ++h)
            for (std::size_t l = 0; l < s.w; ++l) {
              const double phase =
                  sign * two_pi *
                  (static_cast<double>(u * t) / static_cast<double>(s.t) +
                   static_cast<double>(v * h) / static_cast<double>(s.h) +
                   static_cast<double>(w * l) / static_cast<double>(s.w));
              acc += x[(t * s.h + h) * s.w + l] * std::polar(1.0, phase);
            }
        out[(u * s.h + v) * s.w + w] = acc;
      }
  return out;
}

/// Circular convolution by explicit signed-offset loops:
///   out[n] = sum_j k[j] x[(n - (j - center)) mod shape].
inline VideoTensor naive_circular_conv(const VideoTensor& x, const Kernel3D& k) {
  const Shape3 s = x.shape();
  const auto mod = [](long a, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((a % m) + m) % m);
  };
  VideoTensor out(s, x.channels());
  for (std::size_t c = 0; c < x.channels(); ++c)
    for (std::size_t t = 0; t < s.t; ++t)
      for (std::size_t h = 0; h < s.h; ++h)
        for (std::size_t w = 0; w < s.w; ++w) {
          double acc = 0.0;
          for (std::size_t a = 0; a < k.extent().t; ++a)
            for (std::size_t b = 0; b < k.extent().h; ++b)
              for (std::size_t d = 0; d < k.extent().w; ++d) {
                const long ot = static_cast<long>(a) - static_cast<long>(k.center().t);
                const long oh = static_cast<long>(b) - static_cast<long>(k.center().h);
                const long ow = static_cast<long>(d) - static_cast<long>(k.center().w);
                acc += k.at(a, b, d) * x.at(mod(static_cast<long>(t) - ot, s.t),
                                            mod(static_cast<long>(h) - oh, s.h),
                                            mod(static_cast<long>(w) - ow, s.w), c);
              }
          out.at(t, h, w, c) = acc;
        }
  return out;
}

}  // namespace stvsr::testing
