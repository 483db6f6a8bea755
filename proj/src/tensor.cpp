#include "stvsr/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stvsr/error.hpp"

namespace stvsr {

std::string to_string(const Shape3& s) {
  return std::to_string(s.t) + "x" + std::to_string(s.h) + "x" + std::to_string(s.w);
}

ScaleFactor::ScaleFactor(std::size_t st, std::size_t sh, std::size_t sw)
    : t_(st), h_(sh), w_(sw) {
  if (st == 0 || sh == 0 || sw == 0) {
    throw ContractError("scale factors must be positive integers");
  }
}

namespace {

void check_video_shape(const Shape3& shape, std::size_t channels) {
  if (shape.t == 0 || shape.h == 0 || shape.w == 0) {
    throw ShapeError("video extents must be positive, got " + to_string(shape));
  }
  if (channels != 1 && channels != 3) {
    throw ShapeError("video must have 1 or 3 channels, got " + std::to_string(channels));
  }
}

void check_same_shape(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError("spectrum shapes differ: " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
}

}  // namespace

VideoTensor::VideoTensor(std::size_t frames, std::size_t height, std::size_t width,
                         std::size_t channels, double fill)
    : VideoTensor(Shape3{frames, height, width}, channels, fill) {}

VideoTensor::VideoTensor(Shape3 shape, std::size_t channels, double fill)
    : shape_(shape), channels_(channels) {
  check_video_shape(shape, channels);
  samples_.assign(shape.volume() * channels, fill);
}

VideoTensor::VideoTensor(Shape3 shape, std::size_t channels, std::vector<double> samples)
    : shape_(shape), channels_(channels), samples_(std::move(samples)) {
  check_video_shape(shape, channels);
  if (samples_.size() != shape.volume() * channels) {
    throw ShapeError("sample count " + std::to_string(samples_.size()) +
                     " does not match " + to_string(shape) + "x" +
                     std::to_string(channels));
  }
}

std::vector<double> VideoTensor::channel(std::size_t c) const {
  if (c >= channels_) {
    throw ContractError("channel " + std::to_string(c) + " out of range");
  }
  std::vector<double> out(shape_.volume());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples_[i * channels_ + c];
  return out;
}

void VideoTensor::set_channel(std::size_t c, std::span<const double> values) {
  if (c >= channels_) {
    throw ContractError("channel " + std::to_string(c) + " out of range");
  }
  if (values.size() != shape_.volume()) {
    throw ShapeError("channel plane has " + std::to_string(values.size()) +
                     " samples, expected " + std::to_string(shape_.volume()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) samples_[i * channels_ + c] = values[i];
}

bool VideoTensor::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double x) { return std::isfinite(x); });
}

ComplexSpectrum::ComplexSpectrum(Shape3 shape, Complex fill)
    : shape_(shape), values_(shape.volume(), fill) {}

ComplexSpectrum::ComplexSpectrum(Shape3 shape, std::vector<Complex> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape.volume()) {
    throw ShapeError("spectrum value count does not match " + to_string(shape));
  }
}

Kernel3D::Kernel3D(Shape3 extent, Shape3 center, std::vector<double> taps)
    : extent_(extent), center_(center), taps_(std::move(taps)) {
  if (extent.t == 0 || extent.h == 0 || extent.w == 0) {
    throw ContractError("kernel extent must be positive");
  }
  if (taps_.size() != extent.volume()) {
    throw ContractError("kernel has " + std::to_string(taps_.size()) + " taps, extent " +
                        to_string(extent) + " needs " + std::to_string(extent.volume()));
  }
  if (center.t >= extent.t || center.h >= extent.h || center.w >= extent.w) {
    throw ContractError("kernel center " + to_string(center) + " outside extent " +
                        to_string(extent));
  }
  for (double v : taps_) {
    if (!std::isfinite(v)) throw ContractError("kernel taps must be finite");
  }
}

Kernel3D Kernel3D::delta() { return Kernel3D({1, 1, 1}, {0, 0, 0}, {1.0}); }

double Kernel3D::sum() const { return std::accumulate(taps_.begin(), taps_.end(), 0.0); }

Kernel3D Kernel3D::compose(const Kernel3D& temporal, const Kernel3D& spatial) {
  if (temporal.extent().h != 1 || temporal.extent().w != 1) {
    throw ContractError("compose: temporal kernel must have 1x1 spatial extent");
  }
  if (spatial.extent().t != 1) {
    throw ContractError("compose: spatial kernel must have temporal extent 1");
  }
  const Shape3 extent{temporal.extent().t, spatial.extent().h, spatial.extent().w};
  const Shape3 center{temporal.center().t, spatial.center().h, spatial.center().w};
  std::vector<double> taps(extent.volume());
  std::size_t i = 0;
  for (std::size_t t = 0; t < extent.t; ++t)
    for (std::size_t h = 0; h < extent.h; ++h)
      for (std::size_t w = 0; w < extent.w; ++w) taps[i++] = temporal.at(t, 0, 0) * spatial.at(0, h, w);
  return Kernel3D(extent, center, std::move(taps));
}

ComplexSpectrum kernel_to_otf(const Kernel3D& k, Shape3 shape) {
  if (!k.fits(shape)) {
    throw ShapeError("kernel extent " + to_string(k.extent()) + " exceeds video extent " +
                     to_string(shape));
  }
  std::vector<double> embedded(shape.volume(), 0.0);
  const auto wrap = [](std::size_t i, std::size_t c, std::size_t n) {
    return (i + n - c) % n;
  };
  const Shape3& e = k.extent();
  const Shape3& c = k.center();
  for (std::size_t t = 0; t < e.t; ++t) {
    const std::size_t tt = wrap(t, c.t, shape.t);
    for (std::size_t h = 0; h < e.h; ++h) {
      const std::size_t hh = wrap(h, c.h, shape.h);
      for (std::size_t w = 0; w < e.w; ++w) {
        const std::size_t ww = wrap(w, c.w, shape.w);
        embedded[(tt * shape.h + hh) * shape.w + ww] = k.at(t, h, w);
      }
    }
  }
  return fft3(shape, embedded);
}

VideoTensor circular_shift(const VideoTensor& v, Offset3 offset) {
  const Shape3& s = v.shape();
  const auto norm = [](long d, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((d % m) + m) % m);
  };
  const std::size_t dt = norm(offset.t, s.t);
  const std::size_t dh = norm(offset.h, s.h);
  const std::size_t dw = norm(offset.w, s.w);
  VideoTensor out(s, v.channels());
  const std::size_t C = v.channels();
  for (std::size_t t = 0; t < s.t; ++t)
    for (std::size_t h = 0; h < s.h; ++h)
      for (std::size_t w = 0; w < s.w; ++w)
        for (std::size_t c = 0; c < C; ++c)
          out.at((t + dt) % s.t, (h + dh) % s.h, (w + dw) % s.w, c) = v.at(t, h, w, c);
  return out;
}

ComplexSpectrum operator*(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  check_same_shape(a, b);
  ComplexSpectrum out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = a.values()[i] * b.values()[i];
  return out;
}

ComplexSpectrum operator+(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  check_same_shape(a, b);
  ComplexSpectrum out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = a.values()[i] + b.values()[i];
  return out;
}

ComplexSpectrum operator-(const ComplexSpectrum& a, const ComplexSpectrum& b) {
  check_same_shape(a, b);
  ComplexSpectrum out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = a.values()[i] - b.values()[i];
  return out;
}

ComplexSpectrum operator*(Complex s, const ComplexSpectrum& a) {
  ComplexSpectrum out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = s * a.values()[i];
  return out;
}

ComplexSpectrum conj(const ComplexSpectrum& a) {
  ComplexSpectrum out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = std::conj(a.values()[i]);
  return out;
}

}  // namespace stvsr
