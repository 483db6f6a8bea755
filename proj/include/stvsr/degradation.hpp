#pragma once

// Forward model Y = downsample(X (*) K) + N and the kernel factories used to
// synthesize test data.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stvsr/tensor.hpp"

namespace stvsr {

struct DegradationSpec {
  Kernel3D kernel = Kernel3D::delta();
  ScaleFactor scale;
  double noise_sigma = 0.0;  // intensity units on the [0, 1] scale
  std::uint64_t seed = 0;
};

/// Circular 3-D convolution of every channel with one shared kernel,
/// evaluated directly in the sample domain.
VideoTensor conv3_circular(const VideoTensor& x, const Kernel3D& k);

/// Phase-0 decimation: keeps samples whose (t, h, w) indices are multiples of
/// the scale factors. Throws ShapeError if the extents are not divisible.
VideoTensor downsample_std(const VideoTensor& x, const ScaleFactor& s);

/// Noise-free part of the forward model, downsample_std(conv3_circular(x, k)).
VideoTensor blur_downsample(const VideoTensor& x, const Kernel3D& k, const ScaleFactor& s);

/// Full forward model. Noise is drawn from a mt19937_64 seeded with
/// spec.seed, one normal variate per sample in storage order.
VideoTensor degrade(const VideoTensor& x, const DegradationSpec& spec);

/// Temporal box of n taps, weight 1/n each, center at floor(n/2). Models
/// exposure integration over n consecutive frames.
Kernel3D exposure_box_kernel(std::size_t n);

/// Sampled, normalized 2-D Gaussian with temporal extent 1. Extents must be
/// odd; the center is the middle tap.
Kernel3D gaussian_spatial_kernel(double sigma, std::size_t extent_h, std::size_t extent_w);

/// Antialiasing bicubic (a = -0.5) downscaling kernel for spatial factor s.
///
/// Taps sample cubic(d / s) / s around the middle of the tap array. Image
/// resizers place output pixel i at input coordinate i*s + (s-1)/2; with
/// phase-0 decimation that alignment is reached by circularly shifting the
/// input by `pre_shift` before blurring. For even s the taps are symmetric
/// about a point half a sample past the declared center (`half_sample`).
struct BicubicKernel {
  Kernel3D kernel;
  Offset3 pre_shift;
  bool half_sample = false;
};
BicubicKernel bicubic_kernel(std::size_t s);

/// Cubic convolution kernel with a = -0.5.
double cubic_weight(double x);

// Kernel text format: a header line "K3 k_t k_h k_w c_t c_h c_w" followed by
// k_t*k_h*k_w whitespace-separated decimal taps in (t, h, w) order.
Kernel3D parse_kernel(std::istream& in);
void format_kernel(std::ostream& out, const Kernel3D& k);
Kernel3D read_kernel_file(const std::string& path);
void write_kernel_file(const std::string& path, const Kernel3D& k);

}  // namespace stvsr
