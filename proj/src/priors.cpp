#include "stvsr/priors.hpp"

#include <algorithm>
#include <cmath>

#include "stvsr/error.hpp"

namespace stvsr {

std::string to_string(DenoiserKind kind) {
  switch (kind) {
    case DenoiserKind::identity: return "identity";
    case DenoiserKind::gaussian: return "gaussian";
    case DenoiserKind::tv: return "tv";
  }
  return "unknown";
}

DenoiserKind parse_denoiser_kind(const std::string& name) {
  if (name == "identity") return DenoiserKind::identity;
  if (name == "gaussian") return DenoiserKind::gaussian;
  if (name == "tv") return DenoiserKind::tv;
  throw ContractError("unknown denoiser kind '" + name + "' (expected identity, gaussian or tv)");
}

void DenoiserSpec::validate() const {
  if (!(multiplier >= 0.0) || !std::isfinite(multiplier)) {
    throw ContractError("denoiser multiplier must be finite and non-negative");
  }
  if (kind == DenoiserKind::tv) {
    if (iterations < 1) throw ContractError("tv denoiser needs at least one iteration");
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw ContractError("tv denoiser step must be positive");
    }
  }
}

VideoTensor gaussian_smooth(const VideoTensor& z, double sigma) {
  if (!(sigma > 0.0)) return z;
  const long radius = std::max(1L, static_cast<long>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (long d = -radius; d <= radius; ++d) {
    const double v = std::exp(-static_cast<double>(d * d) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(d + radius)] = v;
    total += v;
  }
  for (double& v : taps) v /= total;

  const std::size_t H = z.height(), W = z.width(), C = z.channels();
  const auto wrap = [](long i, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
  };
  VideoTensor tmp(z.shape(), C);
  VideoTensor out(z.shape(), C);
  for (std::size_t t = 0; t < z.frames(); ++t) {
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t w = 0; w < W; ++w)
        for (std::size_t c = 0; c < C; ++c) {
          double acc = 0.0;
          for (long d = -radius; d <= radius; ++d) {
            acc += taps[static_cast<std::size_t>(d + radius)] *
                   z.at(t, h, wrap(static_cast<long>(w) + d, W), c);
          }
          tmp.at(t, h, w, c) = acc;
        }
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t w = 0; w < W; ++w)
        for (std::size_t c = 0; c < C; ++c) {
          double acc = 0.0;
          for (long d = -radius; d <= radius; ++d) {
            acc += taps[static_cast<std::size_t>(d + radius)] *
                   tmp.at(t, wrap(static_cast<long>(h) + d, H), w, c);
          }
          out.at(t, h, w, c) = acc;
        }
  }
  return out;
}

namespace {

// Planes are row-major H x W. Forward differences with a zero difference
// past the last row/column (Neumann boundary); div = -grad^T.
void gradient(const std::vector<double>& x, std::size_t rows, std::size_t cols,
              std::vector<double>& gy, std::vector<double>& gx) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      gy[i] = r + 1 < rows ? x[i + cols] - x[i] : 0.0;
      gx[i] = c + 1 < cols ? x[i + 1] - x[i] : 0.0;
    }
}

void divergence(const std::vector<double>& py, const std::vector<double>& px, std::size_t rows,
                std::size_t cols, std::vector<double>& div) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      double d = 0.0;
      if (r + 1 < rows) d += py[i];
      if (r > 0) d -= py[i - cols];
      if (c + 1 < cols) d += px[i];
      if (c > 0) d -= px[i - 1];
      div[i] = d;
    }
}

double plane_tv(const VideoTensor& x, std::size_t t, std::size_t c) {
  double tv = 0.0;
  for (std::size_t h = 0; h < x.height(); ++h)
    for (std::size_t w = 0; w < x.width(); ++w) {
      if (h + 1 < x.height()) tv += std::abs(x.at(t, h + 1, w, c) - x.at(t, h, w, c));
      if (w + 1 < x.width()) tv += std::abs(x.at(t, h, w + 1, c) - x.at(t, h, w, c));
    }
  return tv;
}

}  // namespace

VideoTensor tv_denoise(const VideoTensor& z, double weight, std::size_t iterations, double step,
                       const TvObserver& observer) {
  if (!(weight > 0.0)) return z;
  const std::size_t rows = z.height(), cols = z.width(), n = rows * cols;
  const std::size_t planes = z.frames() * z.channels();

  // Dual variables per plane, iterated in lockstep so the observer sees a
  // consistent estimate after each inner iteration.
  std::vector<std::vector<double>> py(planes, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> px(planes, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> f(planes, std::vector<double>(n));
  for (std::size_t t = 0; t < z.frames(); ++t)
    for (std::size_t c = 0; c < z.channels(); ++c) {
      auto& plane = f[t * z.channels() + c];
      for (std::size_t h = 0; h < rows; ++h)
        for (std::size_t w = 0; w < cols; ++w) plane[h * cols + w] = z.at(t, h, w, c);
    }

  std::vector<double> div(n), arg(n), gy(n), gx(n);
  VideoTensor x = z;
  for (std::size_t it = 1; it <= iterations; ++it) {
    for (std::size_t p = 0; p < planes; ++p) {
      // p <- clip(p + step * grad(div p - f / weight), [-1, 1])
      divergence(py[p], px[p], rows, cols, div);
      for (std::size_t i = 0; i < n; ++i) arg[i] = div[i] - f[p][i] / weight;
      gradient(arg, rows, cols, gy, gx);
      for (std::size_t i = 0; i < n; ++i) {
        py[p][i] = std::clamp(py[p][i] + step * gy[i], -1.0, 1.0);
        px[p][i] = std::clamp(px[p][i] + step * gx[i], -1.0, 1.0);
      }
      divergence(py[p], px[p], rows, cols, div);
      const std::size_t t = p / z.channels(), c = p % z.channels();
      for (std::size_t h = 0; h < rows; ++h)
        for (std::size_t w = 0; w < cols; ++w) {
          const std::size_t i = h * cols + w;
          x.at(t, h, w, c) = f[p][i] - weight * div[i];
        }
    }
    if (observer) observer(it, x);
  }
  return x;
}

double tv_objective(const VideoTensor& x, const VideoTensor& z, double weight) {
  if (!(x.shape() == z.shape()) || x.channels() != z.channels()) {
    throw ShapeError("tv_objective: shapes differ");
  }
  double fit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.samples()[i] - z.samples()[i];
    fit += d * d;
  }
  double tv = 0.0;
  for (std::size_t t = 0; t < x.frames(); ++t)
    for (std::size_t c = 0; c < x.channels(); ++c) tv += plane_tv(x, t, c);
  return 0.5 * fit + weight * tv;
}

VideoTensor denoise(const VideoTensor& z, double beta, const DenoiserSpec& spec) {
  spec.validate();
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ContractError("denoiser noise level beta must be finite and non-negative");
  }
  if (beta == 0.0) return z;
  VideoTensor out;
  switch (spec.kind) {
    case DenoiserKind::identity:
      return z;
    case DenoiserKind::gaussian:
      out = gaussian_smooth(z, spec.multiplier * beta);
      break;
    case DenoiserKind::tv:
      out = tv_denoise(z, spec.multiplier * beta * beta, spec.iterations, spec.step);
      break;
  }
  if (!out.all_finite()) throw NumericError("denoiser produced non-finite samples");
  return out;
}

}  // namespace stvsr
