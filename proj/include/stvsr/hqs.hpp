#pragma once

// Half-quadratic splitting restoration: alternate the closed-form data step
// (fdt_solve) with a denoiser for a fixed number of iterations.

#include <string>
#include <vector>

#include "stvsr/priors.hpp"
#include "stvsr/tensor.hpp"

namespace stvsr {

enum class InitMode { trilinear, zero_fill, nearest };

std::string to_string(InitMode mode);
InitMode parse_init_mode(const std::string& name);

/// Lower bound on the assumed noise level so that alpha_k stays positive.
inline constexpr double kSigmaFloor = 1e-3;

struct HqsConfig {
  std::size_t iterations = 3;
  double sigma = 0.005;   // assumed noise level of the observation
  double lambda = 0.02;   // prior weight
  double mu_first = 1e-2;
  double mu_last = 1.0;
  DenoiserSpec denoiser;
  InitMode init = InitMode::trilinear;

  void validate() const;
};

/// Per-iteration penalties: mu_k log-spaced from mu_first to mu_last,
/// alpha_k = mu_k * max(sigma, kSigmaFloor)^2, beta_k = sqrt(lambda / mu_k).
struct HqsSchedule {
  std::vector<double> mus;
  std::vector<double> alphas;
  std::vector<double> betas;
};

HqsSchedule build_schedule(const HqsConfig& cfg);

/// Initial high-resolution estimate from the observation.
///   trilinear: separable linear interpolation, output index i sampling input
///              coordinate i / s, samples past the last one replicated;
///   nearest:   sample replication;
///   zero_fill: upsample_zero.
VideoTensor init_x0(const VideoTensor& y, const ScaleFactor& s, InitMode mode);

struct RestoreIterate {
  VideoTensor z;  // data-step output
  VideoTensor x;  // denoiser output
};

struct RestoreTrace {
  HqsSchedule schedule;
  std::vector<RestoreIterate> iterates;
};

struct RestoreResult {
  VideoTensor video;
  RestoreTrace trace;
};

/// Runs cfg.iterations rounds of Z_k = fdt_solve(X_{k-1}, alpha_k) followed by
/// X_k = denoise(Z_k, beta_k). Deterministic. A non-finite intermediate
/// raises NumericError naming the iteration.
RestoreResult restore(const VideoTensor& y, const Kernel3D& k, const ScaleFactor& s,
                      const HqsConfig& cfg);

/// ||y - downsample(x (*) k)||, the data-fidelity residual.
double data_residual(const VideoTensor& x, const VideoTensor& y, const Kernel3D& k,
                     const ScaleFactor& s);

/// Reference interpolation baseline: bicubic spatial upscaling (a = -0.5,
/// half-pixel-centre alignment, replicated borders) followed by linear
/// temporal interpolation between observed frames.
VideoTensor bicubic_linear_upsample(const VideoTensor& y, const ScaleFactor& s);

}  // namespace stvsr
