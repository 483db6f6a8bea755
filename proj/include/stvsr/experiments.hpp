#pragma once

// Reproducible experiment drivers shared by the CLI and the acceptance
// suite: the randomized solver-vs-oracle sweep, the runtime scaling bench and
// the synthetic moving-pattern sequence.

#include <cstdint>
#include <string>
#include <vector>

#include "stvsr/tensor.hpp"

namespace stvsr {

struct OracleInstance {
  Shape3 hstr;
  ScaleFactor scale;
  std::string kernel_name;
  Kernel3D kernel;
  double alpha = 0.0;
};

/// Every valid combination of HSTR shape {2,4}x{4,8}x{4,8}, scale {1,2}^3,
/// kernel {delta, box3_temporal, gaussian3x3, random3x3x3} and alpha
/// {1e-3, 0.1, 10}. Combinations whose kernel does not fit the shape are
/// skipped. The random kernel is drawn from `seed`.
std::vector<OracleInstance> oracle_grid(std::uint64_t seed);

struct OracleCheckResult {
  std::size_t instances = 0;
  double max_deviation = 0.0;
  std::string worst_instance;
};

/// Solves `trials` randomized instances (grid cells visited in a seeded
/// shuffled order, random observations and previous estimates) with both
/// fdt_solve and dense_oracle_solve and reports the largest deviation.
OracleCheckResult oracle_check(std::uint64_t seed, std::size_t trials);

struct BenchPoint {
  Shape3 shape;
  double seconds = 0.0;  // best of the repeats
};

struct BenchResult {
  std::vector<BenchPoint> fdt;
  double slope = 0.0;              // log-log fit of seconds against voxels
  double dense_seconds = 0.0;      // dense oracle at the smallest size
  double speedup = 0.0;            // dense_seconds / fdt seconds at that size
};

/// Times fdt_solve at 16^3, 32^3 and 64^3 voxels (scale 2x2x2, one channel)
/// and, when `with_dense` is set, the dense oracle at 16^3.
BenchResult run_bench(std::size_t repeats, bool with_dense);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Seeded sequence of translating gratings and soft-edged moving discs over
/// a smooth background, samples in [0, 1].
VideoTensor synthetic_video(std::uint64_t seed, Shape3 shape, std::size_t channels);

}  // namespace stvsr
