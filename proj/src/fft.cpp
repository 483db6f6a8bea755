#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "fft_internal.hpp"
#include "stvsr/error.hpp"
#include "stvsr/tensor.hpp"

namespace stvsr {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan is. Plans
// are created once per (shape, direction) with FFTW_UNALIGNED so they can be
// executed on any std::vector buffer, and kept for the process lifetime.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Shape3& s, int sign, bool in_place) {
    const auto key = std::make_tuple(s.t, s.h, s.w, sign, in_place);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> scratch_in(s.volume()), scratch_out(in_place ? 0 : s.volume());
    auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
    auto* out = in_place ? in : reinterpret_cast<fftw_complex*>(scratch_out.data());
    fftw_plan plan = fftw_plan_dft_3d(static_cast<int>(s.t), static_cast<int>(s.h),
                                      static_cast<int>(s.w), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericError("FFTW failed to plan a " + to_string(s) + " transform");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int, bool>, fftw_plan> plans_;
};

void execute(const Shape3& s, int sign, std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_plan plan = PlanCache::instance().get(s, sign, false);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void check_transform_shape(const Shape3& s) {
  if (s.t == 0 || s.h == 0 || s.w == 0) {
    throw ShapeError("cannot transform an empty " + to_string(s) + " array");
  }
}

}  // namespace

void detail::fft3_inplace(const Shape3& shape, std::vector<Complex>& data, bool inverse) {
  check_transform_shape(shape);
  if (data.size() != shape.volume()) throw ShapeError("fft3_inplace: buffer size mismatch");
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  fftw_plan plan = PlanCache::instance().get(shape, sign, true);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

ComplexSpectrum fft3(Shape3 shape, std::span<const double> values) {
  check_transform_shape(shape);
  if (values.size() != shape.volume()) {
    throw ShapeError("fft3: " + std::to_string(values.size()) + " samples do not fill " +
                     to_string(shape));
  }
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(in.size());
  execute(shape, FFTW_FORWARD, in, out);
  return ComplexSpectrum(shape, std::move(out));
}

ComplexSpectrum fft3(const VideoTensor& v, std::size_t channel) {
  if (channel >= v.channels()) {
    throw ContractError("fft3: channel " + std::to_string(channel) + " out of range for " +
                        std::to_string(v.channels()) + "-channel video");
  }
  return fft3(v.shape(), v.channel(channel));
}

std::vector<Complex> ifft3_complex(const ComplexSpectrum& s) {
  check_transform_shape(s.shape());
  std::vector<Complex> in(s.values().begin(), s.values().end());
  std::vector<Complex> out(in.size());
  execute(s.shape(), FFTW_BACKWARD, in, out);
  const double scale = 1.0 / static_cast<double>(s.size());
  for (auto& z : out) z *= scale;
  return out;
}

VideoTensor ifft3(const ComplexSpectrum& s) {
  const std::vector<Complex> z = ifft3_complex(s);
  std::vector<double> re(z.size());
  double residue = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    re[i] = z[i].real();
    residue = std::max(residue, std::abs(z[i].imag()));
  }
  if (!(residue <= kImaginaryResidueLimit)) {
    throw SymmetryError("ifft3: imaginary residue " + std::to_string(residue) +
                        " exceeds limit; spectrum is not conjugate-symmetric");
  }
  return VideoTensor(s.shape(), 1, std::move(re));
}

}  // namespace stvsr
