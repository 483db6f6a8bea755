#include <Eigen/Dense>

#include <cmath>

#include "stvsr/degradation.hpp"
#include "stvsr/error.hpp"
#include "stvsr/fdt_solver.hpp"

namespace stvsr {

namespace {

void check_dense_size(const Shape3& hstr) {
  if (hstr.volume() > kDenseOracleLimit) {
    throw ContractError("dense oracle limited to " + std::to_string(kDenseOracleLimit) +
                        " voxels, got " + to_string(hstr));
  }
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = m(r, c);
  return out;
}

}  // namespace

DenseMatrix dense_degradation_operator(const Kernel3D& k, const ScaleFactor& s, Shape3 hstr) {
  check_dense_size(hstr);
  if (!s.divides(hstr)) throw ShapeError("dense operator: shape not divisible by the scale");
  const std::size_t cols = hstr.volume();
  const std::size_t rows = s.down(hstr).volume();
  DenseMatrix a{rows, cols, std::vector<double>(rows * cols, 0.0)};
  VideoTensor probe(hstr, 1);
  for (std::size_t j = 0; j < cols; ++j) {
    probe.samples()[j] = 1.0;
    const VideoTensor column = blur_downsample(probe, k, s);
    probe.samples()[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) a.values[i * cols + j] = column.samples()[i];
  }
  return a;
}

VideoTensor dense_oracle_solve(const VideoTensor& x_prev, const VideoTensor& y, const Kernel3D& k,
                               const ScaleFactor& s, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ContractError("dense oracle: alpha must be positive");
  }
  const Shape3 hstr = s.up(y.shape());
  if (!(x_prev.shape() == hstr) || x_prev.channels() != y.channels()) {
    throw ShapeError("dense oracle: previous estimate must be " + to_string(hstr));
  }
  check_dense_size(hstr);
  const Eigen::MatrixXd a = to_eigen(dense_degradation_operator(k, s, hstr));
  const auto n = static_cast<Eigen::Index>(hstr.volume());
  Eigen::MatrixXd normal = a.transpose() * a;
  normal.diagonal().array() += alpha;
  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw NumericError("dense oracle: Cholesky factorization failed");
  }

  VideoTensor out(hstr, y.channels());
  for (std::size_t c = 0; c < y.channels(); ++c) {
    const std::vector<double> yc = y.channel(c);
    const std::vector<double> xc = x_prev.channel(c);
    const Eigen::Map<const Eigen::VectorXd> yv(yc.data(), static_cast<Eigen::Index>(yc.size()));
    const Eigen::Map<const Eigen::VectorXd> xv(xc.data(), n);
    const Eigen::VectorXd rhs = a.transpose() * yv + alpha * xv;
    Eigen::VectorXd z = llt.solve(rhs);
    // One step of iterative refinement, then certify the residual.
    z += llt.solve(rhs - normal * z);
    const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
    const double residual = (normal * z - rhs).norm() / scale;
    if (!(residual <= 1e-10)) {
      throw NumericError("dense oracle: normal-equation residual " + std::to_string(residual) +
                         " above 1e-10");
    }
    out.set_channel(c, std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
  }
  return out;
}

}  // namespace stvsr
