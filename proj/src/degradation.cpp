#include "stvsr/degradation.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "stvsr/error.hpp"

namespace stvsr {

VideoTensor conv3_circular(const VideoTensor& x, const Kernel3D& k) {
  const Shape3& s = x.shape();
  if (!k.fits(s)) {
    throw ShapeError("kernel extent " + to_string(k.extent()) + " exceeds video extent " +
                     to_string(s));
  }
  const Shape3& e = k.extent();
  const Shape3& c = k.center();
  const std::size_t C = x.channels();
  VideoTensor out(s, C);
  // Tap j reads x[n - (j - c)]; precompute the wrapped source index per axis.
  const auto src = [](std::size_t n, std::size_t j, std::size_t center, std::size_t len) {
    return (n + center + len - j % len) % len;
  };
  for (std::size_t t = 0; t < s.t; ++t)
    for (std::size_t h = 0; h < s.h; ++h)
      for (std::size_t w = 0; w < s.w; ++w) {
        double acc[3] = {0.0, 0.0, 0.0};
        for (std::size_t kt = 0; kt < e.t; ++kt) {
          const std::size_t st = src(t, kt, c.t, s.t);
          for (std::size_t kh = 0; kh < e.h; ++kh) {
            const std::size_t sh = src(h, kh, c.h, s.h);
            for (std::size_t kw = 0; kw < e.w; ++kw) {
              const double tap = k.at(kt, kh, kw);
              if (tap == 0.0) continue;
              const std::size_t sw = src(w, kw, c.w, s.w);
              for (std::size_t ch = 0; ch < C; ++ch) acc[ch] += tap * x.at(st, sh, sw, ch);
            }
          }
        }
        for (std::size_t ch = 0; ch < C; ++ch) out.at(t, h, w, ch) = acc[ch];
      }
  return out;
}

VideoTensor downsample_std(const VideoTensor& x, const ScaleFactor& s) {
  if (!s.divides(x.shape())) {
    throw ShapeError("video " + to_string(x.shape()) + " is not divisible by scale " +
                     std::to_string(s.t()) + "x" + std::to_string(s.h()) + "x" +
                     std::to_string(s.w()));
  }
  const Shape3 low = s.down(x.shape());
  const std::size_t C = x.channels();
  VideoTensor out(low, C);
  for (std::size_t t = 0; t < low.t; ++t)
    for (std::size_t h = 0; h < low.h; ++h)
      for (std::size_t w = 0; w < low.w; ++w)
        for (std::size_t c = 0; c < C; ++c)
          out.at(t, h, w, c) = x.at(t * s.t(), h * s.h(), w * s.w(), c);
  return out;
}

VideoTensor blur_downsample(const VideoTensor& x, const Kernel3D& k, const ScaleFactor& s) {
  if (!s.divides(x.shape())) {
    throw ShapeError("video " + to_string(x.shape()) + " is not divisible by the scale factor");
  }
  return downsample_std(conv3_circular(x, k), s);
}

VideoTensor degrade(const VideoTensor& x, const DegradationSpec& spec) {
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw ContractError("noise sigma must be finite and non-negative");
  }
  VideoTensor y = blur_downsample(x, spec.kernel, spec.scale);
  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : y.samples()) v += noise(rng);
  }
  return y;
}

Kernel3D exposure_box_kernel(std::size_t n) {
  if (n == 0) throw ContractError("exposure box kernel needs at least one tap");
  return Kernel3D({n, 1, 1}, {n / 2, 0, 0}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Kernel3D gaussian_spatial_kernel(double sigma, std::size_t extent_h, std::size_t extent_w) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ContractError("gaussian kernel sigma must be positive");
  }
  if (extent_h % 2 == 0 || extent_w % 2 == 0) {
    throw ContractError("gaussian kernel extents must be odd");
  }
  const long ch = static_cast<long>(extent_h / 2);
  const long cw = static_cast<long>(extent_w / 2);
  std::vector<double> taps(extent_h * extent_w);
  double total = 0.0;
  for (std::size_t h = 0; h < extent_h; ++h)
    for (std::size_t w = 0; w < extent_w; ++w) {
      const double dh = static_cast<double>(static_cast<long>(h) - ch);
      const double dw = static_cast<double>(static_cast<long>(w) - cw);
      const double v = std::exp(-(dh * dh + dw * dw) / (2.0 * sigma * sigma));
      taps[h * extent_w + w] = v;
      total += v;
    }
  for (double& v : taps) v /= total;
  return Kernel3D({1, extent_h, extent_w}, {0, extent_h / 2, extent_w / 2}, std::move(taps));
}

double cubic_weight(double x) {
  constexpr double a = -0.5;
  const double ax = std::abs(x);
  if (ax <= 1.0) return ((a + 2.0) * ax - (a + 3.0)) * ax * ax + 1.0;
  if (ax < 2.0) return ((a * ax - 5.0 * a) * ax + 8.0 * a) * ax - 4.0 * a;
  return 0.0;
}

BicubicKernel bicubic_kernel(std::size_t s) {
  if (s == 0) throw ContractError("bicubic kernel factor must be positive");
  if (s == 1) return {Kernel3D::delta(), {}, false};
  // cubic(d/s) is non-zero for |d| < 2s: 4s taps when the sampling points sit
  // at half-integers (even s), 4s - 1 when they sit on integers (odd s).
  const bool even = s % 2 == 0;
  const std::size_t n = even ? 4 * s : 4 * s - 1;
  const double mid = (static_cast<double>(n) - 1.0) / 2.0;
  std::vector<double> line(n);
  for (std::size_t j = 0; j < n; ++j) {
    line[j] = cubic_weight((static_cast<double>(j) - mid) / static_cast<double>(s));
  }
  std::vector<double> taps(n * n);
  double total = 0.0;
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t w = 0; w < n; ++w) {
      taps[h * n + w] = line[h] * line[w];
      total += taps[h * n + w];
    }
  for (double& v : taps) v /= total;
  const std::size_t center = (n - 1) / 2;
  const long shift = static_cast<long>(s / 2);
  return {Kernel3D({1, n, n}, {0, center, center}, std::move(taps)), {0, -shift, -shift}, even};
}

Kernel3D parse_kernel(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != "K3") {
    throw ContractError("kernel text must start with the 'K3' header");
  }
  std::size_t kt = 0, kh = 0, kw = 0, ct = 0, chh = 0, cw = 0;
  if (!(in >> kt >> kh >> kw >> ct >> chh >> cw)) {
    throw ContractError("kernel header must list k_t k_h k_w c_t c_h c_w");
  }
  const Shape3 extent{kt, kh, kw};
  std::vector<double> taps;
  taps.reserve(extent.volume());
  for (std::size_t i = 0; i < extent.volume(); ++i) {
    double v = 0.0;
    if (!(in >> v)) {
      throw ContractError("kernel text ends after " + std::to_string(i) + " of " +
                          std::to_string(extent.volume()) + " taps");
    }
    taps.push_back(v);
  }
  std::string extra;
  if (in >> extra) throw ContractError("kernel text has trailing data '" + extra + "'");
  return Kernel3D(extent, {ct, chh, cw}, std::move(taps));
}

void format_kernel(std::ostream& out, const Kernel3D& k) {
  const Shape3& e = k.extent();
  const Shape3& c = k.center();
  out << "K3 " << e.t << ' ' << e.h << ' ' << e.w << ' ' << c.t << ' ' << c.h << ' ' << c.w
      << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t t = 0; t < e.t; ++t)
    for (std::size_t h = 0; h < e.h; ++h) {
      for (std::size_t w = 0; w < e.w; ++w) out << (w ? " " : "") << k.at(t, h, w);
      out << '\n';
    }
}

Kernel3D read_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kernel file " + path);
  try {
    return parse_kernel(in);
  } catch (const ContractError& e) {
    throw ContractError(path + ": " + e.what());
  }
}

void write_kernel_file(const std::string& path, const Kernel3D& k) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create kernel file " + path);
  format_kernel(out, k);
  if (!out) throw IoError("failed writing kernel file " + path);
}

}  // namespace stvsr
