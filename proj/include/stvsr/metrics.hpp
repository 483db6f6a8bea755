#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stvsr/tensor.hpp"

namespace stvsr {

/// PSNR of identical inputs.
inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

/// 10 log10(peak^2 / MSE) over every sample of both tensors; +inf when equal.
double psnr(const VideoTensor& a, const VideoTensor& b, double peak = 1.0);

/// PSNR of each frame (MSE over that frame's samples, all channels).
std::vector<double> psnr_per_frame(const VideoTensor& a, const VideoTensor& b, double peak = 1.0);

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), C1 = (0.01 peak)^2,
/// C2 = (0.03 peak)^2, averaged over valid window positions, then over
/// channels. Needs H, W >= 11.
std::vector<double> ssim_per_frame(const VideoTensor& a, const VideoTensor& b, double peak = 1.0);

/// Mean of ssim_per_frame.
double ssim(const VideoTensor& a, const VideoTensor& b, double peak = 1.0);

/// sqrt(||a - b||^2 + eps^2) over the whole tensor.
double charbonnier(const VideoTensor& a, const VideoTensor& b, double eps = 1e-3);

enum class ColorSpace { rgb, luma };

std::string to_string(ColorSpace cs);
ColorSpace parse_color_space(const std::string& name);

/// ITU-R BT.601 studio-range luma on [0, 1] samples:
/// Y = (16 + 65.481 R + 128.553 G + 24.966 B) / 255. Single-channel input is
/// returned unchanged.
VideoTensor to_luma(const VideoTensor& v);

struct MetricReport {
  ColorSpace color = ColorSpace::rgb;
  std::vector<double> per_frame_psnr;
  std::vector<double> per_frame_ssim;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  std::optional<double> charbonnier;
};

/// Evaluates `test` against `reference` frame by frame.
MetricReport evaluate(const VideoTensor& reference, const VideoTensor& test,
                      ColorSpace color = ColorSpace::rgb, double peak = 1.0);

/// Human-readable table followed by a "[metrics]" section of key = value
/// lines (mean_psnr_db, mean_ssim, per_frame_psnr_db, per_frame_ssim, and
/// charbonnier when present). Infinite PSNR prints as "inf".
std::string format_report(const MetricReport& report);

}  // namespace stvsr
