#include "stvsr/fdt_solver.hpp"

#include <algorithm>
#include <cmath>

#include "fft_internal.hpp"

#include "stvsr/degradation.hpp"
#include "stvsr/error.hpp"

namespace stvsr {

namespace {

std::string scale_string(const ScaleFactor& s) {
  return std::to_string(s.t()) + "x" + std::to_string(s.h()) + "x" + std::to_string(s.w());
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ContractError("alpha must be positive and finite, got " + std::to_string(alpha));
  }
}

}  // namespace

VideoTensor upsample_zero(const VideoTensor& y, const ScaleFactor& s) {
  const Shape3 high = s.up(y.shape());
  const std::size_t C = y.channels();
  VideoTensor out(high, C);
  for (std::size_t t = 0; t < y.frames(); ++t)
    for (std::size_t h = 0; h < y.height(); ++h)
      for (std::size_t w = 0; w < y.width(); ++w)
        for (std::size_t c = 0; c < C; ++c)
          out.at(t * s.t(), h * s.h(), w * s.w(), c) = y.at(t, h, w, c);
  return out;
}

ComplexSpectrum spectrum_fold_avg(const ComplexSpectrum& spectrum, const ScaleFactor& s) {
  if (!s.divides(spectrum.shape())) {
    throw ShapeError("spectrum " + to_string(spectrum.shape()) + " is not divisible by scale " +
                     scale_string(s));
  }
  const Shape3 low = s.down(spectrum.shape());
  ComplexSpectrum out(low);
  const Shape3& high = spectrum.shape();
  for (std::size_t u = 0; u < high.t; ++u)
    for (std::size_t v = 0; v < high.h; ++v)
      for (std::size_t w = 0; w < high.w; ++w)
        out.at(u % low.t, v % low.h, w % low.w) += spectrum.at(u, v, w);
  const double inv = 1.0 / static_cast<double>(s.total());
  for (auto& z : out.values()) z *= inv;
  return out;
}

ComplexSpectrum spectrum_tile(const ComplexSpectrum& spectrum, const ScaleFactor& s) {
  const Shape3& low = spectrum.shape();
  const Shape3 high = s.up(low);
  ComplexSpectrum out(high);
  for (std::size_t u = 0; u < high.t; ++u)
    for (std::size_t v = 0; v < high.h; ++v)
      for (std::size_t w = 0; w < high.w; ++w)
        out.at(u, v, w) = spectrum.at(u % low.t, v % low.h, w % low.w);
  return out;
}

FdtContext::FdtContext(const Kernel3D& kernel, const ScaleFactor& scale, Shape3 lstr_shape,
                       double alpha)
    : alpha_(alpha) {
  check_alpha(alpha);
  auto spectra = std::make_shared<Spectra>();
  spectra->scale = scale;
  spectra->lstr = lstr_shape;
  spectra->hstr = scale.up(lstr_shape);
  spectra->otf = kernel_to_otf(kernel, spectra->hstr);
  ComplexSpectrum power(spectra->hstr);
  for (std::size_t i = 0; i < power.size(); ++i) {
    power.values()[i] = std::norm(spectra->otf.values()[i]);
  }
  const ComplexSpectrum folded = spectrum_fold_avg(power, scale);
  spectra->folded_power.resize(folded.size());
  for (std::size_t i = 0; i < folded.size(); ++i) {
    spectra->folded_power[i] = folded.values()[i].real();
  }
  spectra_ = std::move(spectra);
}

FdtContext::FdtContext(std::shared_ptr<const Spectra> spectra, double alpha)
    : spectra_(std::move(spectra)), alpha_(alpha) {
  check_alpha(alpha);
}

FdtContext FdtContext::with_alpha(double alpha) const { return FdtContext(spectra_, alpha); }

VideoTensor fdt_solve(const VideoTensor& x_prev, const VideoTensor& y, const FdtContext& ctx) {
  if (!(y.shape() == ctx.lstr_shape())) {
    throw ShapeError("low-resolution input is " + to_string(y.shape()) + ", context expects " +
                     to_string(ctx.lstr_shape()));
  }
  if (!(x_prev.shape() == ctx.hstr_shape())) {
    throw ShapeError("previous estimate is " + to_string(x_prev.shape()) +
                     ", context expects " + to_string(ctx.hstr_shape()));
  }
  if (x_prev.channels() != y.channels()) {
    throw ShapeError("channel count differs between previous estimate and observation");
  }
  const double alpha = ctx.alpha();
  const double inv_alpha = 1.0 / alpha;
  const double inv_copies = 1.0 / static_cast<double>(ctx.scale().total());
  const Shape3& high = ctx.hstr_shape();
  const Shape3& low = ctx.lstr_shape();
  const std::span<const Complex> otf = ctx.otf().values();
  const std::vector<double>& folded_power = ctx.folded_power();

  // Visits every HSTR bin with its flat index and the flat index of the LSTR
  // bin it aliases onto (u mod T_l, v mod H_l, w mod W_l).
  const auto for_each_bin = [&](auto&& f) {
    std::size_t i = 0;
    for (std::size_t u = 0; u < high.t; ++u) {
      const std::size_t lu = (u % low.t) * low.h;
      for (std::size_t v = 0; v < high.h; ++v) {
        const std::size_t lv = (lu + v % low.h) * low.w;
        for (std::size_t w = 0, lw = 0; w < high.w; ++w, ++i) {
          f(i, lv + lw);
          if (++lw == low.w) lw = 0;
        }
      }
    }
  };

  VideoTensor out(high, y.channels());
  std::vector<Complex> buf(high.volume());
  std::vector<Complex> ratio(low.volume());
  const std::size_t C = y.channels();
  for (std::size_t c = 0; c < C; ++c) {
    // F(zero_fill(y)) is the periodic tiling of the LSTR spectrum F(y).
    const ComplexSpectrum fy = fft3(y, c);
    const auto& fyv = fy.values();
    const auto xs = x_prev.samples();
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = Complex(xs[i * C + c], 0.0);
    detail::fft3_inplace(high, buf, false);

    // buf <- R = conj(H) F(y_up) + alpha F(x_prev); ratio <- fold(H R).
    std::fill(ratio.begin(), ratio.end(), Complex{});
    for_each_bin([&](std::size_t i, std::size_t l) {
      const Complex r = std::conj(otf[i]) * fyv[l] + alpha * buf[i];
      buf[i] = r;
      ratio[l] += otf[i] * r;
    });
    for (std::size_t l = 0; l < ratio.size(); ++l) {
      ratio[l] *= inv_copies / (folded_power[l] + alpha);
    }
    for_each_bin([&](std::size_t i, std::size_t l) {
      buf[i] = inv_alpha * (buf[i] - std::conj(otf[i]) * ratio[l]);
    });
    detail::fft3_inplace(high, buf, true);

    const double scale = 1.0 / static_cast<double>(high.volume());
    double residue = 0.0;
    auto os = out.samples();
    for (std::size_t i = 0; i < buf.size(); ++i) {
      os[i * C + c] = buf[i].real() * scale;
      residue = std::max(residue, std::abs(buf[i].imag()) * scale);
    }
    if (!(residue <= kImaginaryResidueLimit)) {
      throw SymmetryError("fdt_solve: imaginary residue " + std::to_string(residue) +
                          " exceeds limit");
    }
  }
  if (!out.all_finite()) throw NumericError("fdt_solve produced non-finite samples");
  return out;
}

double data_objective(const VideoTensor& z, const VideoTensor& x_prev, const VideoTensor& y,
                      const Kernel3D& k, const ScaleFactor& s, double alpha) {
  if (!(z.shape() == x_prev.shape()) || z.channels() != x_prev.channels()) {
    throw ShapeError("data_objective: estimate and previous estimate differ in shape");
  }
  const VideoTensor predicted = blur_downsample(z, k, s);
  if (!(predicted.shape() == y.shape()) || predicted.channels() != y.channels()) {
    throw ShapeError("data_objective: observation shape does not match the forward model");
  }
  double fit = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y.samples()[i] - predicted.samples()[i];
    fit += d * d;
  }
  double prox = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z.samples()[i] - x_prev.samples()[i];
    prox += d * d;
  }
  return fit + alpha * prox;
}

}  // namespace stvsr
