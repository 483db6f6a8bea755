#pragma once

// Experiment configuration: a flat INI-style file (key = value lines grouped
// under [section] headers).
//
//   input_dir = ...            output_dir = ...
//   [degradation]  kernel = delta | box_gaussian | bicubic | file
//                  kernel_file, temporal_box, spatial_sigma, spatial_extent,
//                  scale = "s_t s_h s_w", noise_sigma, seed
//   [hqs]          iterations, sigma, lambda, mu_first, mu_last, init
//   [denoiser]     kind, multiplier, iterations, step
//   [metrics]      color_space = rgb | luma, peak
//   [output]       dump_trace = true | false
//
// Unknown sections or keys are rejected.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stvsr/degradation.hpp"
#include "stvsr/hqs.hpp"
#include "stvsr/metrics.hpp"

namespace stvsr {

enum class KernelSource { delta, box_gaussian, bicubic, file };

struct KernelRecipe {
  KernelSource source = KernelSource::box_gaussian;
  std::size_t temporal_box = 2;
  double spatial_sigma = 1.2;
  std::size_t spatial_extent = 3;
  std::string file;  // resolved against the config file's directory
};

struct ExperimentConfig {
  std::string input_dir;
  std::string output_dir;
  KernelRecipe kernel;
  ScaleFactor scale{2, 2, 2};
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  HqsConfig hqs;
  ColorSpace color = ColorSpace::rgb;
  double peak = 1.0;
  bool dump_trace = false;

  void validate() const;
};

/// Parses config text; relative paths are resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::string& base_dir = ".");
/// Throws IoError if the file cannot be read, ContractError on bad content.
ExperimentConfig load_config(const std::string& path);

/// Blur kernel plus the circular shift applied to the input before blurring
/// (non-zero only for bicubic kernels).
struct ResolvedKernel {
  Kernel3D kernel;
  Offset3 pre_shift;
};
ResolvedKernel resolve_kernel(const ExperimentConfig& cfg);

DegradationSpec degradation_spec(const ExperimentConfig& cfg);

}  // namespace stvsr
