#pragma once

// Solvers for the prior sub-problem: given the data-step output z and the
// current noise level beta, return a cleaner estimate. Every denoiser sees
// only (z, beta), so a learned model can be dropped in behind denoise().

#include <cstddef>
#include <functional>
#include <string>

#include "stvsr/tensor.hpp"

namespace stvsr {

enum class DenoiserKind { identity, gaussian, tv };

std::string to_string(DenoiserKind kind);
DenoiserKind parse_denoiser_kind(const std::string& name);

struct DenoiserSpec {
  DenoiserKind kind = DenoiserKind::tv;
  /// gaussian: smoothing std is multiplier*beta pixels.
  /// tv: regularization weight is multiplier*beta^2.
  double multiplier = 0.01;
  std::size_t iterations = 50;  // tv inner iterations
  double step = 0.125;          // tv dual step size

  /// Throws ContractError for out-of-range parameters.
  void validate() const;
};

/// Applies the configured denoiser at noise level beta. beta == 0 returns z
/// unchanged for every kind.
VideoTensor denoise(const VideoTensor& z, double beta, const DenoiserSpec& spec);

/// Per-frame circular 2-D Gaussian smoothing with standard deviation `sigma`
/// pixels. Taps are normalized, so the mean is preserved.
VideoTensor gaussian_smooth(const VideoTensor& z, double sigma);

/// Called after every inner iteration with the (1-based) iteration index and
/// the current primal estimate.
using TvObserver = std::function<void(std::size_t, const VideoTensor&)>;

/// Anisotropic TV denoising of each frame and channel by projected gradient
/// on the dual (Chambolle-style), solving
///     min_x 1/2 ||x - z||^2 + weight * TV(x).
VideoTensor tv_denoise(const VideoTensor& z, double weight, std::size_t iterations, double step,
                       const TvObserver& observer = {});

/// 1/2 ||x - z||^2 + weight * sum |forward differences of x| over frames.
double tv_objective(const VideoTensor& x, const VideoTensor& z, double weight);

}  // namespace stvsr
