#pragma once

// Closed-form data step of the half-quadratic splitting: the exact minimizer
// of
//     ||Y - downsample(Z (*) K)||^2 + alpha * ||Z - X_prev||^2
// under circular boundaries, computed with four 3-D FFTs per channel.
//
// With F the 3-D DFT, H = F(K), R = conj(H) F(zero_fill(Y)) + alpha F(X_prev),
// fold the block mean over the s_t*s_h*s_w aliased copies and tile its
// periodic extension:
//
//     Z = F^-1( (R - conj(H) tile( fold(H R) / (fold(|H|^2) + alpha) )) / alpha )
//
// Because fold averages (rather than sums) the aliases, the constant added to
// the folded denominator is alpha itself; a summing fold would need
// s_t*s_h*s_w*alpha. dense_oracle_solve certifies this to 1e-6.

#include <memory>
#include <vector>

#include "stvsr/tensor.hpp"

namespace stvsr {

/// Zero-fill upsampler; adjoint of downsample_std.
VideoTensor upsample_zero(const VideoTensor& y, const ScaleFactor& s);

/// Mean of the s_t x s_h x s_w contiguous LSTR-shaped blocks of a spectrum.
ComplexSpectrum spectrum_fold_avg(const ComplexSpectrum& spectrum, const ScaleFactor& s);

/// Periodic tiling of an LSTR-shaped spectrum up to HSTR shape.
ComplexSpectrum spectrum_tile(const ComplexSpectrum& spectrum, const ScaleFactor& s);

/// Precomputed kernel spectra for one (kernel, shape, scale) triple plus the
/// current penalty alpha. Copies share the spectra; with_alpha() is cheap.
class FdtContext {
 public:
  FdtContext(const Kernel3D& kernel, const ScaleFactor& scale, Shape3 lstr_shape, double alpha);

  FdtContext with_alpha(double alpha) const;

  const ComplexSpectrum& otf() const { return spectra_->otf; }
  const ScaleFactor& scale() const { return spectra_->scale; }
  const Shape3& hstr_shape() const { return spectra_->hstr; }
  const Shape3& lstr_shape() const { return spectra_->lstr; }
  double alpha() const { return alpha_; }
  /// fold(|H|^2), real and LSTR-shaped.
  const std::vector<double>& folded_power() const { return spectra_->folded_power; }

 private:
  struct Spectra {
    ComplexSpectrum otf;
    ScaleFactor scale;
    Shape3 hstr;
    Shape3 lstr;
    std::vector<double> folded_power;
  };
  FdtContext(std::shared_ptr<const Spectra> spectra, double alpha);

  std::shared_ptr<const Spectra> spectra_;
  double alpha_;
};

/// Exact minimizer of the data sub-problem for every channel of y.
VideoTensor fdt_solve(const VideoTensor& x_prev, const VideoTensor& y, const FdtContext& ctx);

/// ||y - downsample(z (*) k)||^2 + alpha ||z - x_prev||^2.
double data_objective(const VideoTensor& z, const VideoTensor& x_prev, const VideoTensor& y,
                      const Kernel3D& k, const ScaleFactor& s, double alpha);

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Largest HSTR volume accepted by the dense routines.
inline constexpr std::size_t kDenseOracleLimit = 4096;

/// Matrix of z -> downsample_std(conv3_circular(z, k), s) on single-channel
/// HSTR videos, assembled column by column from unit-vector probes.
DenseMatrix dense_degradation_operator(const Kernel3D& k, const ScaleFactor& s, Shape3 hstr);

/// Brute-force reference: solves (A^T A + alpha I) z = A^T y + alpha x_prev
/// by Cholesky factorization, per channel. Throws ContractError above
/// kDenseOracleLimit voxels, NumericError if the factorization or the
/// 1e-10 relative residual check fails.
VideoTensor dense_oracle_solve(const VideoTensor& x_prev, const VideoTensor& y, const Kernel3D& k,
                               const ScaleFactor& s, double alpha);

}  // namespace stvsr
