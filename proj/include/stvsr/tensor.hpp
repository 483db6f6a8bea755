#pragma once

// Video tensor container, 3-D spectra and blur kernels shared by every
// stage of the restoration pipeline.
//
// Layout conventions used throughout the library:
//   * samples are stored in (t, h, w, c) order, channel fastest;
//   * spectra are per channel, stored in (t, h, w) order;
//   * the forward FFT is unnormalized, the inverse divides by T*H*W;
//   * all convolutions are circular.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stvsr {

using Complex = std::complex<double>;

/// Extent (or index) along the time, height and width axes.
struct Shape3 {
  std::size_t t = 1;
  std::size_t h = 1;
  std::size_t w = 1;

  std::size_t volume() const { return t * h * w; }
  friend bool operator==(const Shape3&, const Shape3&) = default;
};

std::string to_string(const Shape3& s);

/// Signed voxel offset, used for circular shifts.
struct Offset3 {
  long t = 0;
  long h = 0;
  long w = 0;
};

/// Positive integer down/up-sampling factors (s_t, s_h, s_w).
class ScaleFactor {
 public:
  ScaleFactor() = default;
  ScaleFactor(std::size_t st, std::size_t sh, std::size_t sw);

  std::size_t t() const { return t_; }
  std::size_t h() const { return h_; }
  std::size_t w() const { return w_; }
  /// s_t * s_h * s_w, the number of aliased copies folded by decimation.
  std::size_t total() const { return t_ * h_ * w_; }

  bool divides(const Shape3& s) const {
    return s.t % t_ == 0 && s.h % h_ == 0 && s.w % w_ == 0;
  }
  Shape3 up(const Shape3& s) const { return {s.t * t_, s.h * h_, s.w * w_}; }
  Shape3 down(const Shape3& s) const { return {s.t / t_, s.h / h_, s.w / w_}; }

  friend bool operator==(const ScaleFactor&, const ScaleFactor&) = default;

 private:
  std::size_t t_ = 1;
  std::size_t h_ = 1;
  std::size_t w_ = 1;
};

/// T x H x W x C real video, C in {1, 3}.
class VideoTensor {
 public:
  VideoTensor() = default;
  VideoTensor(std::size_t frames, std::size_t height, std::size_t width,
              std::size_t channels, double fill = 0.0);
  VideoTensor(Shape3 shape, std::size_t channels, double fill = 0.0);
  VideoTensor(Shape3 shape, std::size_t channels, std::vector<double> samples);

  std::size_t frames() const { return shape_.t; }
  std::size_t height() const { return shape_.h; }
  std::size_t width() const { return shape_.w; }
  std::size_t channels() const { return channels_; }
  const Shape3& shape() const { return shape_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  std::size_t index(std::size_t t, std::size_t h, std::size_t w, std::size_t c = 0) const {
    return ((t * shape_.h + h) * shape_.w + w) * channels_ + c;
  }
  double& at(std::size_t t, std::size_t h, std::size_t w, std::size_t c = 0) {
    return samples_[index(t, h, w, c)];
  }
  double at(std::size_t t, std::size_t h, std::size_t w, std::size_t c = 0) const {
    return samples_[index(t, h, w, c)];
  }

  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  /// Copies one channel out as a contiguous (t, h, w) array.
  std::vector<double> channel(std::size_t c) const;
  void set_channel(std::size_t c, std::span<const double> values);

  bool all_finite() const;

  friend bool operator==(const VideoTensor&, const VideoTensor&) = default;

 private:
  Shape3 shape_{0, 0, 0};
  std::size_t channels_ = 0;
  std::vector<double> samples_;
};

/// Complex (t, h, w) array holding one channel's 3-D spectrum.
class ComplexSpectrum {
 public:
  ComplexSpectrum() = default;
  explicit ComplexSpectrum(Shape3 shape, Complex fill = {});
  ComplexSpectrum(Shape3 shape, std::vector<Complex> values);

  const Shape3& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t u, std::size_t v, std::size_t w) const {
    return (u * shape_.h + v) * shape_.w + w;
  }
  Complex& at(std::size_t u, std::size_t v, std::size_t w) { return values_[index(u, v, w)]; }
  Complex at(std::size_t u, std::size_t v, std::size_t w) const { return values_[index(u, v, w)]; }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

 private:
  Shape3 shape_{0, 0, 0};
  std::vector<Complex> values_;
};

/// Compact 3-D blur kernel. Tap (i, j, l) sits at offset (i, j, l) - center
/// from the origin, so convolution reads
///   (x * k)[n] = sum_j k[j] x[n - (j - center)].
class Kernel3D {
 public:
  Kernel3D() = default;
  Kernel3D(Shape3 extent, Shape3 center, std::vector<double> taps);

  /// Single unit tap.
  static Kernel3D delta();

  const Shape3& extent() const { return extent_; }
  const Shape3& center() const { return center_; }
  std::span<const double> taps() const { return taps_; }
  double at(std::size_t t, std::size_t h, std::size_t w) const {
    return taps_[(t * extent_.h + h) * extent_.w + w];
  }

  double sum() const;
  bool fits(const Shape3& video) const {
    return extent_.t <= video.t && extent_.h <= video.h && extent_.w <= video.w;
  }

  /// Separable product of a temporal-only and a spatial-only kernel.
  static Kernel3D compose(const Kernel3D& temporal, const Kernel3D& spatial);

  friend bool operator==(const Kernel3D&, const Kernel3D&) = default;

 private:
  Shape3 extent_{1, 1, 1};
  Shape3 center_{0, 0, 0};
  std::vector<double> taps_{1.0};
};

// Spectral transforms ------------------------------------------------------

/// Forward 3-D DFT over (t, h, w) of one channel. Unnormalized.
ComplexSpectrum fft3(const VideoTensor& v, std::size_t channel);
/// Forward 3-D DFT of a real (t, h, w) array.
ComplexSpectrum fft3(Shape3 shape, std::span<const double> values);
/// Inverse transform of a spectrum, scaled by 1/(T*H*W), returned as a
/// single-channel tensor. Throws SymmetryError if the imaginary residue
/// exceeds 1e-6.
VideoTensor ifft3(const ComplexSpectrum& s);
/// Inverse transform keeping the complex result (no symmetry check).
std::vector<Complex> ifft3_complex(const ComplexSpectrum& s);

/// Largest |imag| tolerated by ifft3 before reporting a symmetry fault.
inline constexpr double kImaginaryResidueLimit = 1e-6;

/// Spectrum of the kernel zero-embedded at `shape` with its center tap at
/// the origin and negative offsets wrapped to the end of each axis.
ComplexSpectrum kernel_to_otf(const Kernel3D& k, Shape3 shape);

/// Cyclic shift: out[n] = v[n - offset] on every axis.
VideoTensor circular_shift(const VideoTensor& v, Offset3 offset);

// Elementwise spectrum algebra.
ComplexSpectrum operator*(const ComplexSpectrum& a, const ComplexSpectrum& b);
ComplexSpectrum operator+(const ComplexSpectrum& a, const ComplexSpectrum& b);
ComplexSpectrum operator-(const ComplexSpectrum& a, const ComplexSpectrum& b);
ComplexSpectrum operator*(Complex s, const ComplexSpectrum& a);
ComplexSpectrum conj(const ComplexSpectrum& a);

}  // namespace stvsr
