#include "stvsr/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "stvsr/error.hpp"

namespace stvsr {

namespace {

void check_pair(const VideoTensor& a, const VideoTensor& b) {
  if (!(a.shape() == b.shape()) || a.channels() != b.channels()) {
    throw ShapeError("metric inputs differ in shape: " + to_string(a.shape()) + "x" +
                     std::to_string(a.channels()) + " vs " + to_string(b.shape()) + "x" +
                     std::to_string(b.channels()));
  }
}

void check_peak(double peak) {
  if (!(peak > 0.0) || !std::isfinite(peak)) throw ContractError("peak must be positive");
}

double psnr_from_mse(double mse, double peak) {
  if (mse == 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(peak * peak / mse);
}

constexpr std::size_t kWindow = 11;
constexpr double kWindowSigma = 1.5;

std::vector<double> gaussian_window() {
  std::vector<double> g(kWindow);
  const double c = static_cast<double>(kWindow / 2);
  for (std::size_t i = 0; i < kWindow; ++i) {
    const double d = static_cast<double>(i) - c;
    g[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
  }
  const double total = std::accumulate(g.begin(), g.end(), 0.0);
  for (double& v : g) v /= total;
  return g;
}

// SSIM of one frame/channel plane over valid window positions.
double plane_ssim(const VideoTensor& a, const VideoTensor& b, std::size_t t, std::size_t c,
                  const std::vector<double>& g, double c1, double c2) {
  const std::size_t H = a.height(), W = a.width();
  const std::size_t oh = H - kWindow + 1, ow = W - kWindow + 1;
  // Separable filtering of x, y, x^2, y^2, xy: horizontal pass first.
  std::vector<double> hx(H * ow), hy(H * ow), hxx(H * ow), hyy(H * ow), hxy(H * ow);
  for (std::size_t h = 0; h < H; ++h)
    for (std::size_t w = 0; w < ow; ++w) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t k = 0; k < kWindow; ++k) {
        const double x = a.at(t, h, w + k, c), y = b.at(t, h, w + k, c);
        sx += g[k] * x;
        sy += g[k] * y;
        sxx += g[k] * x * x;
        syy += g[k] * y * y;
        sxy += g[k] * x * y;
      }
      const std::size_t i = h * ow + w;
      hx[i] = sx, hy[i] = sy, hxx[i] = sxx, hyy[i] = syy, hxy[i] = sxy;
    }
  double total = 0.0;
  for (std::size_t h = 0; h < oh; ++h)
    for (std::size_t w = 0; w < ow; ++w) {
      double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
      for (std::size_t k = 0; k < kWindow; ++k) {
        const std::size_t i = (h + k) * ow + w;
        mx += g[k] * hx[i];
        my += g[k] * hy[i];
        mxx += g[k] * hxx[i];
        myy += g[k] * hyy[i];
        mxy += g[k] * hxy[i];
      }
      const double vx = mxx - mx * mx, vy = myy - my * my, cov = mxy - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  return total / static_cast<double>(oh * ow);
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_value(values[i]);
  }
  return out;
}

}  // namespace

double psnr(const VideoTensor& a, const VideoTensor& b, double peak) {
  check_pair(a, b);
  check_peak(peak);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.samples()[i] - b.samples()[i];
    sum += d * d;
  }
  return psnr_from_mse(sum / static_cast<double>(a.size()), peak);
}

std::vector<double> psnr_per_frame(const VideoTensor& a, const VideoTensor& b, double peak) {
  check_pair(a, b);
  check_peak(peak);
  const std::size_t per_frame = a.height() * a.width() * a.channels();
  std::vector<double> out(a.frames());
  for (std::size_t t = 0; t < a.frames(); ++t) {
    double sum = 0.0;
    for (std::size_t i = t * per_frame; i < (t + 1) * per_frame; ++i) {
      const double d = a.samples()[i] - b.samples()[i];
      sum += d * d;
    }
    out[t] = psnr_from_mse(sum / static_cast<double>(per_frame), peak);
  }
  return out;
}

std::vector<double> ssim_per_frame(const VideoTensor& a, const VideoTensor& b, double peak) {
  check_pair(a, b);
  check_peak(peak);
  if (a.height() < kWindow || a.width() < kWindow) {
    throw ShapeError("ssim needs frames of at least 11x11, got " + std::to_string(a.height()) +
                     "x" + std::to_string(a.width()));
  }
  const auto g = gaussian_window();
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  std::vector<double> out(a.frames());
  for (std::size_t t = 0; t < a.frames(); ++t) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.channels(); ++c) sum += plane_ssim(a, b, t, c, g, c1, c2);
    out[t] = sum / static_cast<double>(a.channels());
  }
  return out;
}

double ssim(const VideoTensor& a, const VideoTensor& b, double peak) {
  const auto frames = ssim_per_frame(a, b, peak);
  return std::accumulate(frames.begin(), frames.end(), 0.0) / static_cast<double>(frames.size());
}

double charbonnier(const VideoTensor& a, const VideoTensor& b, double eps) {
  check_pair(a, b);
  if (!(eps > 0.0)) throw ContractError("charbonnier epsilon must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.samples()[i] - b.samples()[i];
    sum += d * d;
  }
  return std::sqrt(sum + eps * eps);
}

std::string to_string(ColorSpace cs) { return cs == ColorSpace::rgb ? "rgb" : "luma"; }

ColorSpace parse_color_space(const std::string& name) {
  if (name == "rgb") return ColorSpace::rgb;
  if (name == "luma" || name == "y") return ColorSpace::luma;
  throw ContractError("unknown color space '" + name + "' (expected rgb or luma)");
}

VideoTensor to_luma(const VideoTensor& v) {
  if (v.channels() == 1) return v;
  VideoTensor out(v.shape(), 1);
  for (std::size_t i = 0; i < v.shape().volume(); ++i) {
    const double r = v.samples()[3 * i], g = v.samples()[3 * i + 1], b = v.samples()[3 * i + 2];
    out.samples()[i] = (16.0 + 65.481 * r + 128.553 * g + 24.966 * b) / 255.0;
  }
  return out;
}

MetricReport evaluate(const VideoTensor& reference, const VideoTensor& test, ColorSpace color,
                      double peak) {
  check_pair(reference, test);
  MetricReport report;
  report.color = color;
  const VideoTensor a = color == ColorSpace::luma ? to_luma(reference) : reference;
  const VideoTensor b = color == ColorSpace::luma ? to_luma(test) : test;
  report.per_frame_psnr = psnr_per_frame(a, b, peak);
  report.mean_psnr = std::accumulate(report.per_frame_psnr.begin(), report.per_frame_psnr.end(), 0.0) /
                     static_cast<double>(a.frames());
  if (a.height() >= kWindow && a.width() >= kWindow) {
    report.per_frame_ssim = ssim_per_frame(a, b, peak);
    report.mean_ssim =
        std::accumulate(report.per_frame_ssim.begin(), report.per_frame_ssim.end(), 0.0) /
        static_cast<double>(a.frames());
  } else {
    report.mean_ssim = std::numeric_limits<double>::quiet_NaN();
  }
  report.charbonnier = charbonnier(a, b);
  return report;
}

std::string format_report(const MetricReport& report) {
  std::ostringstream out;
  out << "frame      psnr_db        ssim\n";
  for (std::size_t t = 0; t < report.per_frame_psnr.size(); ++t) {
    char line[96];
    const std::string p = format_value(report.per_frame_psnr[t]);
    const std::string s =
        t < report.per_frame_ssim.size() ? format_value(report.per_frame_ssim[t]) : "n/a";
    std::snprintf(line, sizeof line, "%5zu %12s %11s\n", t, p.c_str(), s.c_str());
    out << line;
  }
  out << "mean  " << format_value(report.mean_psnr) << "  "
      << (report.per_frame_ssim.empty() ? std::string("n/a") : format_value(report.mean_ssim))
      << "\n\n[metrics]\n";
  out << "color_space = " << to_string(report.color) << '\n';
  out << "frames = " << report.per_frame_psnr.size() << '\n';
  out << "mean_psnr_db = " << format_value(report.mean_psnr) << '\n';
  out << "mean_ssim = "
      << (report.per_frame_ssim.empty() ? std::string("nan") : format_value(report.mean_ssim))
      << '\n';
  out << "per_frame_psnr_db = " << join(report.per_frame_psnr) << '\n';
  out << "per_frame_ssim = " << join(report.per_frame_ssim) << '\n';
  if (report.charbonnier) out << "charbonnier = " << format_value(*report.charbonnier) << '\n';
  return out.str();
}

}  // namespace stvsr
