#include "stvsr/hqs.hpp"

#include <algorithm>
#include <cmath>

#include "stvsr/degradation.hpp"
#include "stvsr/error.hpp"
#include "stvsr/fdt_solver.hpp"

namespace stvsr {

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::trilinear: return "trilinear";
    case InitMode::zero_fill: return "zero_fill";
    case InitMode::nearest: return "nearest";
  }
  return "unknown";
}

InitMode parse_init_mode(const std::string& name) {
  if (name == "trilinear") return InitMode::trilinear;
  if (name == "zero_fill") return InitMode::zero_fill;
  if (name == "nearest") return InitMode::nearest;
  throw ContractError("unknown init mode '" + name + "' (expected trilinear, zero_fill or nearest)");
}

void HqsConfig::validate() const {
  if (iterations < 1) throw ContractError("hqs iterations must be at least 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ContractError("hqs sigma must be finite and non-negative");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ContractError("hqs lambda must be positive");
  if (!(mu_first > 0.0) || !std::isfinite(mu_last) || !(mu_first <= mu_last)) {
    throw ContractError("hqs mu schedule needs 0 < mu_first <= mu_last");
  }
  denoiser.validate();
}

HqsSchedule build_schedule(const HqsConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.iterations;
  const double sigma = std::max(cfg.sigma, kSigmaFloor);
  HqsSchedule schedule;
  for (std::size_t k = 0; k < n; ++k) {
    double mu = cfg.mu_last;
    if (n > 1) {
      const double f = static_cast<double>(k) / static_cast<double>(n - 1);
      mu = std::exp(std::log(cfg.mu_first) + f * (std::log(cfg.mu_last) - std::log(cfg.mu_first)));
    }
    // Endpoints exact, free of exp/log rounding.
    if (k == 0 && n > 1) mu = cfg.mu_first;
    if (k + 1 == n) mu = cfg.mu_last;
    schedule.mus.push_back(mu);
    schedule.alphas.push_back(mu * sigma * sigma);
    schedule.betas.push_back(std::sqrt(cfg.lambda / mu));
  }
  return schedule;
}

namespace {

// Linear interpolation weights along one axis: output i samples input
// coordinate i / s, clamped to the last input sample.
struct LinearTap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<LinearTap> linear_taps(std::size_t n_in, std::size_t s) {
  std::vector<LinearTap> taps(n_in * s);
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const std::size_t lo = i / s;
    const double frac = static_cast<double>(i % s) / static_cast<double>(s);
    if (lo + 1 < n_in) {
      taps[i] = {lo, lo + 1, frac};
    } else {
      taps[i] = {n_in - 1, n_in - 1, 0.0};
    }
  }
  return taps;
}

VideoTensor trilinear(const VideoTensor& y, const ScaleFactor& s) {
  const auto tt = linear_taps(y.frames(), s.t());
  const auto th = linear_taps(y.height(), s.h());
  const auto tw = linear_taps(y.width(), s.w());
  const std::size_t C = y.channels();
  VideoTensor out(s.up(y.shape()), C);
  for (std::size_t t = 0; t < tt.size(); ++t)
    for (std::size_t h = 0; h < th.size(); ++h)
      for (std::size_t w = 0; w < tw.size(); ++w)
        for (std::size_t c = 0; c < C; ++c) {
          const auto [t0, t1, ft] = tt[t];
          const auto [h0, h1, fh] = th[h];
          const auto [w0, w1, fw] = tw[w];
          const auto lerp_w = [&](std::size_t a, std::size_t b) {
            return (1.0 - fw) * y.at(a, b, w0, c) + fw * y.at(a, b, w1, c);
          };
          const double v0 = (1.0 - fh) * lerp_w(t0, h0) + fh * lerp_w(t0, h1);
          const double v1 = (1.0 - fh) * lerp_w(t1, h0) + fh * lerp_w(t1, h1);
          out.at(t, h, w, c) = (1.0 - ft) * v0 + ft * v1;
        }
  return out;
}

VideoTensor nearest(const VideoTensor& y, const ScaleFactor& s) {
  const std::size_t C = y.channels();
  const Shape3 high = s.up(y.shape());
  VideoTensor out(high, C);
  for (std::size_t t = 0; t < high.t; ++t)
    for (std::size_t h = 0; h < high.h; ++h)
      for (std::size_t w = 0; w < high.w; ++w)
        for (std::size_t c = 0; c < C; ++c)
          out.at(t, h, w, c) = y.at(t / s.t(), h / s.h(), w / s.w(), c);
  return out;
}

}  // namespace

VideoTensor init_x0(const VideoTensor& y, const ScaleFactor& s, InitMode mode) {
  switch (mode) {
    case InitMode::trilinear: return trilinear(y, s);
    case InitMode::nearest: return nearest(y, s);
    case InitMode::zero_fill: return upsample_zero(y, s);
  }
  throw ContractError("unknown init mode");
}

RestoreResult restore(const VideoTensor& y, const Kernel3D& k, const ScaleFactor& s,
                      const HqsConfig& cfg) {
  RestoreResult result;
  result.trace.schedule = build_schedule(cfg);
  const HqsSchedule& schedule = result.trace.schedule;
  const Shape3 high = s.up(y.shape());
  if (!k.fits(high)) {
    throw ShapeError("kernel extent " + to_string(k.extent()) + " exceeds restored shape " +
                     to_string(high));
  }
  if (!y.all_finite()) throw NumericError("observation contains non-finite samples");

  VideoTensor x = init_x0(y, s, cfg.init);
  const FdtContext base(k, s, y.shape(), schedule.alphas.front());
  for (std::size_t i = 0; i < cfg.iterations; ++i) {
    const std::string where = "iteration " + std::to_string(i + 1);
    VideoTensor z;
    try {
      z = fdt_solve(x, y, base.with_alpha(schedule.alphas[i]));
    } catch (const NumericError& e) {
      throw NumericError(where + " data step: " + e.what());
    }
    x = denoise(z, schedule.betas[i], cfg.denoiser);
    if (!x.all_finite()) throw NumericError(where + " prior step produced non-finite samples");
    result.trace.iterates.push_back({std::move(z), x});
  }
  result.video = std::move(x);
  return result;
}

double data_residual(const VideoTensor& x, const VideoTensor& y, const Kernel3D& k,
                     const ScaleFactor& s) {
  const VideoTensor predicted = blur_downsample(x, k, s);
  if (!(predicted.shape() == y.shape()) || predicted.channels() != y.channels()) {
    throw ShapeError("data_residual: observation does not match the forward model output");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y.samples()[i] - predicted.samples()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

// Bicubic upscaling taps for one axis: output i sits at input coordinate
// (i + 0.5) / s - 0.5; border indices are clamped.
struct CubicTaps {
  std::size_t index[4];
  double weight[4];
};

std::vector<CubicTaps> cubic_taps(std::size_t n_in, std::size_t s) {
  std::vector<CubicTaps> taps(n_in * s);
  const long last = static_cast<long>(n_in) - 1;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(s) - 0.5;
    const long left = static_cast<long>(std::floor(u)) - 1;
    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
      const long src = left + j;
      const double wgt = cubic_weight(u - static_cast<double>(src));
      taps[i].index[j] = static_cast<std::size_t>(std::clamp(src, 0L, last));
      taps[i].weight[j] = wgt;
      total += wgt;
    }
    for (double& wgt : taps[i].weight) wgt /= total;
  }
  return taps;
}

}  // namespace

VideoTensor bicubic_linear_upsample(const VideoTensor& y, const ScaleFactor& s) {
  const auto th = cubic_taps(y.height(), s.h());
  const auto tw = cubic_taps(y.width(), s.w());
  const std::size_t C = y.channels();
  const Shape3 spatial{y.frames(), th.size(), tw.size()};
  VideoTensor rows(Shape3{y.frames(), y.height(), tw.size()}, C);
  for (std::size_t t = 0; t < y.frames(); ++t)
    for (std::size_t h = 0; h < y.height(); ++h)
      for (std::size_t w = 0; w < tw.size(); ++w)
        for (std::size_t c = 0; c < C; ++c) {
          double acc = 0.0;
          for (int j = 0; j < 4; ++j) acc += tw[w].weight[j] * y.at(t, h, tw[w].index[j], c);
          rows.at(t, h, w, c) = acc;
        }
  VideoTensor frames(spatial, C);
  for (std::size_t t = 0; t < y.frames(); ++t)
    for (std::size_t h = 0; h < th.size(); ++h)
      for (std::size_t w = 0; w < tw.size(); ++w)
        for (std::size_t c = 0; c < C; ++c) {
          double acc = 0.0;
          for (int j = 0; j < 4; ++j) acc += th[h].weight[j] * rows.at(t, th[h].index[j], w, c);
          frames.at(t, h, w, c) = acc;
        }
  return init_x0(frames, ScaleFactor(s.t(), 1, 1), InitMode::trilinear);
}

}  // namespace stvsr
