#include "stvsr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "stvsr/degradation.hpp"
#include "stvsr/error.hpp"
#include "stvsr/fdt_solver.hpp"

namespace stvsr {

namespace {

Kernel3D random_kernel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> taps(27);
  double total = 0.0;
  for (double& v : taps) total += (v = u(rng));
  for (double& v : taps) v /= total;
  return Kernel3D({3, 3, 3}, {1, 1, 1}, std::move(taps));
}

VideoTensor random_video(std::mt19937_64& rng, Shape3 shape, std::size_t channels) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VideoTensor v(shape, channels);
  for (double& s : v.samples()) s = u(rng);
  return v;
}

std::string describe(const OracleInstance& inst) {
  return to_string(inst.hstr) + " scale " + std::to_string(inst.scale.t()) + "x" +
         std::to_string(inst.scale.h()) + "x" + std::to_string(inst.scale.w()) + " kernel " +
         inst.kernel_name + " alpha " + std::to_string(inst.alpha);
}

// Best per-call time over `repeats` batches; each batch runs enough calls to
// last at least `min_batch` seconds so sub-millisecond sizes are measurable.
template <class F>
double best_seconds(std::size_t repeats, F&& f, double min_batch = 0.02) {
  using clock = std::chrono::steady_clock;
  std::size_t calls = 1;
  for (;;) {
    const auto start = clock::now();
    for (std::size_t i = 0; i < calls; ++i) f();
    const std::chrono::duration<double> took = clock::now() - start;
    if (took.count() >= min_batch || calls >= (1u << 20)) break;
    calls *= 2;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto start = clock::now();
    for (std::size_t i = 0; i < calls; ++i) f();
    const std::chrono::duration<double> took = clock::now() - start;
    best = std::min(best, took.count() / static_cast<double>(calls));
  }
  return best;
}

}  // namespace

std::vector<OracleInstance> oracle_grid(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Kernel3D random3 = random_kernel(rng);
  const std::vector<std::pair<std::string, Kernel3D>> kernels = {
      {"delta", Kernel3D::delta()},
      {"box3_temporal", exposure_box_kernel(3)},
      {"gaussian3x3", gaussian_spatial_kernel(1.0, 3, 3)},
      {"random3x3x3", random3},
  };
  std::vector<OracleInstance> grid;
  for (std::size_t t : {2u, 4u})
    for (std::size_t h : {4u, 8u})
      for (std::size_t w : {4u, 8u})
        for (std::size_t st : {1u, 2u})
          for (std::size_t sh : {1u, 2u})
            for (std::size_t sw : {1u, 2u})
              for (const auto& [name, k] : kernels)
                for (double alpha : {1e-3, 0.1, 10.0}) {
                  const Shape3 shape{t, h, w};
                  if (!k.fits(shape)) continue;
                  grid.push_back({shape, ScaleFactor(st, sh, sw), name, k, alpha});
                }
  return grid;
}

OracleCheckResult oracle_check(std::uint64_t seed, std::size_t trials) {
  const auto grid = oracle_grid(seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  OracleCheckResult result;
  for (std::size_t i = 0; i < trials; ++i) {
    const OracleInstance& inst = grid[order[i % order.size()]];
    const std::size_t channels = i % 2 == 0 ? 1 : 3;
    const Shape3 low = inst.scale.down(inst.hstr);
    const VideoTensor y = random_video(rng, low, channels);
    const VideoTensor x_prev = random_video(rng, inst.hstr, channels);
    const FdtContext ctx(inst.kernel, inst.scale, low, inst.alpha);
    const VideoTensor fast = fdt_solve(x_prev, y, ctx);
    const VideoTensor dense = dense_oracle_solve(x_prev, y, inst.kernel, inst.scale, inst.alpha);
    double dev = 0.0;
    for (std::size_t j = 0; j < fast.size(); ++j) {
      dev = std::max(dev, std::abs(fast.samples()[j] - dense.samples()[j]));
    }
    if (dev >= result.max_deviation) {
      result.max_deviation = dev;
      result.worst_instance = describe(inst);
    }
    ++result.instances;
  }
  return result;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContractError("loglog_slope needs at least two paired samples");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchResult run_bench(std::size_t repeats, bool with_dense) {
  const ScaleFactor scale(2, 2, 2);
  const Kernel3D kernel =
      Kernel3D::compose(exposure_box_kernel(2), gaussian_spatial_kernel(1.2, 3, 3));
  std::mt19937_64 rng(2024);
  BenchResult result;
  std::vector<double> sizes, seconds;
  for (std::size_t edge : {16u, 32u, 64u}) {
    const Shape3 high{edge, edge, edge};
    const Shape3 low = scale.down(high);
    const VideoTensor y = random_video(rng, low, 1);
    const VideoTensor x_prev = random_video(rng, high, 1);
    const FdtContext ctx(kernel, scale, low, 0.01);
    const double s = best_seconds(repeats, [&] { fdt_solve(x_prev, y, ctx); });
    result.fdt.push_back({high, s});
    sizes.push_back(static_cast<double>(high.volume()));
    seconds.push_back(s);
  }
  result.slope = loglog_slope(sizes, seconds);
  if (with_dense) {
    const Shape3 high = result.fdt.front().shape;
    const VideoTensor y = random_video(rng, scale.down(high), 1);
    const VideoTensor x_prev = random_video(rng, high, 1);
    result.dense_seconds =
        best_seconds(1, [&] { dense_oracle_solve(x_prev, y, kernel, scale, 0.01); }, 0.0);
    result.speedup = result.dense_seconds / result.fdt.front().seconds;
  }
  return result;
}

VideoTensor synthetic_video(std::uint64_t seed, Shape3 shape, std::size_t channels) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  struct Grating {
    double kh, kw, vel, phase, amp;
  };
  struct Disc {
    double h0, w0, vh, vw, radius;
    double color[3];
  };
  std::vector<Grating> gratings(3);
  for (auto& g : gratings) {
    const double freq = 1.5 + 3.0 * u(rng);  // cycles per frame width
    const double angle = two_pi * u(rng);
    g = {freq * std::sin(angle), freq * std::cos(angle), 0.02 + 0.06 * u(rng), two_pi * u(rng),
         0.06 + 0.06 * u(rng)};
  }
  std::vector<Disc> discs(4);
  for (auto& d : discs) {
    d.h0 = u(rng);
    d.w0 = u(rng);
    d.vh = (u(rng) - 0.5) * 0.06;
    d.vw = (u(rng) - 0.5) * 0.06;
    d.radius = 0.08 + 0.1 * u(rng);
    for (double& c : d.color) c = 0.15 + 0.7 * u(rng);
  }
  double tint[3];
  for (double& c : tint) c = 0.8 + 0.4 * u(rng);

  VideoTensor v(shape, channels);
  for (std::size_t t = 0; t < shape.t; ++t) {
    const double tf = static_cast<double>(t);
    for (std::size_t h = 0; h < shape.h; ++h)
      for (std::size_t w = 0; w < shape.w; ++w) {
        const double y = static_cast<double>(h) / static_cast<double>(shape.h);
        const double x = static_cast<double>(w) / static_cast<double>(shape.w);
        double base = 0.45 + 0.1 * std::sin(two_pi * (x + 0.5 * y));
        for (const auto& g : gratings) {
          base += g.amp * std::sin(two_pi * (g.kh * y + g.kw * x - g.vel * tf) + g.phase);
        }
        for (std::size_t c = 0; c < channels; ++c) {
          double value = base * (channels == 3 ? tint[c] : 1.0);
          for (const auto& d : discs) {
            // Shortest periodic distance to the disc centre.
            double dy = y - (d.h0 + d.vh * tf);
            double dx = x - (d.w0 + d.vw * tf);
            dy -= std::round(dy);
            dx -= std::round(dx);
            const double r = std::sqrt(dx * dx + dy * dy);
            const double edge = 0.5 * (1.0 - std::tanh((r - d.radius) * 60.0));
            value = value * (1.0 - edge) + d.color[channels == 3 ? c : 0] * edge;
          }
          v.at(t, h, w, c) = std::clamp(value, 0.0, 1.0);
        }
      }
  }
  return v;
}

}  // namespace stvsr
