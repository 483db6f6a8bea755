// Release acceptance suite. Prints one PASS / FAIL / SKIP line per criterion
// and exits non-zero if any criterion fails.
//
//   STVSR_REDS4_DIR  optional root holding <clip>/gt/frame_%06d.png and
//                    <clip>/lr/frame_%06d.png (blur_bicubic) for the REDS4 clips.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "stvsr/degradation.hpp"
#include "stvsr/experiments.hpp"
#include "stvsr/fdt_solver.hpp"
#include "stvsr/frame_io.hpp"
#include "stvsr/hqs.hpp"
#include "stvsr/metrics.hpp"
#include "stvsr/priors.hpp"
#include "support.hpp"

using namespace stvsr;
using stvsr::testing::dot;
using stvsr::testing::max_abs_diff;
using stvsr::testing::random_kernel;
using stvsr::testing::random_video;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr std::size_t kOracleTrials = 300;
constexpr std::size_t kOracleMinInstances = 200;
constexpr double kOracleMaxDeviation = 1e-6;
constexpr double kOracleMaxSeconds = 120.0;
constexpr double kSlopeLimit = 1.15;
constexpr double kSpeedupLimit = 100.0;
constexpr std::size_t kBenchRepeats = 5;
constexpr double kGainLimitDb = 1.0;
constexpr double kResidualSlack = 1e-12;  // relative, for rounding only
constexpr double kRedsPsnr = 22.78;
constexpr double kRedsSsim = 0.624;
constexpr double kRedsPsnrTol = 0.5;
constexpr double kRedsSsimTol = 0.02;
constexpr double kFftTol = 1e-8;
constexpr double kAdjointTol = 1e-12;
constexpr double kDenseMatrixTol = 1e-12;
constexpr double kProxTol = 1e-6;
constexpr double kMetricTol = 1e-9;

enum class Verdict { pass, fail, skip };

std::vector<Verdict> g_verdicts;

void report(int id, const char* name, Verdict v, const std::string& detail) {
  const char* tag = v == Verdict::pass ? "PASS" : v == Verdict::fail ? "FAIL" : "SKIP";
  std::printf("%s [%d] %s: %s\n", tag, id, name, detail.c_str());
  std::fflush(stdout);
  g_verdicts.push_back(v);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs `fn` and turns an escaping exception into a FAIL line.
void guarded(int id, const char* name, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, name, Verdict::fail, std::string("exception: ") + e.what());
  }
}

// ---- 1 -------------------------------------------------------------------

void oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const OracleCheckResult r = oracle_check(7, kOracleTrials);
  const double secs = seconds_since(t0);
  const bool ok = r.instances >= kOracleMinInstances && r.max_deviation <= kOracleMaxDeviation &&
                  secs <= kOracleMaxSeconds;
  report(1, "oracle equivalence", ok ? Verdict::pass : Verdict::fail,
         fmt("instances=%zu (>= %zu), max_dev=%.3e (<= %.0e), worst=%s, %.1f s (<= %.0f s)",
             r.instances, kOracleMinInstances, r.max_deviation, kOracleMaxDeviation,
             r.worst_instance.c_str(), secs, kOracleMaxSeconds));
}

// ---- 2 -------------------------------------------------------------------

void complexity_scaling() {
  const BenchResult r = run_bench(kBenchRepeats, true);
  std::string times;
  for (const BenchPoint& p : r.fdt) times += fmt("%zu:%.3es ", p.shape.volume(), p.seconds);
  const bool ok = r.slope <= kSlopeLimit && r.speedup >= kSpeedupLimit;
  report(2, "complexity scaling", ok ? Verdict::pass : Verdict::fail,
         fmt("%sslope=%.3f (<= %.2f), dense=%.2f s, speedup=%.0fx (>= %.0fx)", times.c_str(),
             r.slope, kSlopeLimit, r.dense_seconds, r.speedup, kSpeedupLimit));
}

// ---- 3 -------------------------------------------------------------------

void synthetic_restoration() {
  const Kernel3D k = Kernel3D::compose(exposure_box_kernel(2), gaussian_spatial_kernel(1.2, 3, 3));
  const ScaleFactor s(2, 2, 2);
  const VideoTensor truth = synthetic_video(2024, {16, 64, 64}, 3);
  const VideoTensor y = degrade(truth, {k, s, 0.005, 2024});

  const HqsConfig cfg;  // defaults: K = 3, tv denoiser
  const RestoreResult r = restore(y, k, s, cfg);
  const VideoTensor baseline = init_x0(y, s, InitMode::trilinear);
  const double psnr_x = evaluate(truth, r.video).mean_psnr;
  const double psnr_b = evaluate(truth, baseline).mean_psnr;
  const double gain = psnr_x - psnr_b;

  // Residual of X_0 (the initialization) followed by X_1 .. X_K.
  std::vector<double> residuals{data_residual(baseline, y, k, s)};
  for (const RestoreIterate& it : r.trace.iterates) residuals.push_back(data_residual(it.x, y, k, s));
  bool monotone = true;
  std::string list;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (i > 0 && residuals[i] > residuals[i - 1] * (1.0 + kResidualSlack)) monotone = false;
    list += fmt(i ? ", %.4f" : "%.4f", residuals[i]);
  }
  const bool ok = gain >= kGainLimitDb && monotone;
  report(3, "synthetic end-to-end restoration", ok ? Verdict::pass : Verdict::fail,
         fmt("restored %.3f dB, trilinear %.3f dB, gain %.3f dB (>= %.1f), residual X_0..X_%zu "
             "[%s] %s",
             psnr_x, psnr_b, gain, kGainLimitDb, cfg.iterations, list.c_str(),
             monotone ? "non-increasing" : "INCREASES"));
}

// ---- 4 -------------------------------------------------------------------

void reds4_baseline() {
  const char* root = std::getenv("STVSR_REDS4_DIR");
  const std::vector<std::string> clips = {"000", "011", "015", "020"};
  bool present = root != nullptr;
  if (present) {
    for (const auto& c : clips) present = present && fs::is_directory(fs::path(root) / c / "gt") &&
                                          fs::is_directory(fs::path(root) / c / "lr");
  }
  if (!present) {
    report(4, "REDS4 bicubic+linear baseline", Verdict::skip,
           "dataset not found (set STVSR_REDS4_DIR to <root>/<clip>/{gt,lr})");
    return;
  }
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (const auto& c : clips) {
    const VideoTensor gt = read_frames((fs::path(root) / c / "gt").string());
    const VideoTensor lr = read_frames((fs::path(root) / c / "lr").string());
    // Space-time protocol: every other low-resolution frame is observed.
    const std::size_t n_in = (lr.frames() + 1) / 2;
    VideoTensor obs(Shape3{n_in, lr.height(), lr.width()}, lr.channels());
    const std::size_t per = lr.height() * lr.width() * lr.channels();
    for (std::size_t t = 0; t < n_in; ++t)
      for (std::size_t i = 0; i < per; ++i) obs.samples()[t * per + i] = lr.samples()[2 * t * per + i];
    const ScaleFactor s(2, gt.height() / lr.height(), gt.width() / lr.width());
    VideoTensor up = bicubic_linear_upsample(obs, s);
    // Score the frames that exist in the ground truth.
    const std::size_t frames = std::min(up.frames(), gt.frames());
    VideoTensor a(Shape3{frames, gt.height(), gt.width()}, gt.channels());
    VideoTensor b(Shape3{frames, gt.height(), gt.width()}, gt.channels());
    const std::size_t hp = gt.height() * gt.width() * gt.channels();
    std::copy_n(gt.samples().begin(), frames * hp, a.samples().begin());
    std::copy_n(up.samples().begin(), frames * hp, b.samples().begin());
    for (double& v : b.samples()) v = quantize(v) / 255.0;
    const MetricReport m = evaluate(a, b);
    psnr_sum += m.mean_psnr;
    ssim_sum += m.mean_ssim;
  }
  const double psnr_avg = psnr_sum / static_cast<double>(clips.size());
  const double ssim_avg = ssim_sum / static_cast<double>(clips.size());
  const bool ok = std::abs(psnr_avg - kRedsPsnr) <= kRedsPsnrTol &&
                  std::abs(ssim_avg - kRedsSsim) <= kRedsSsimTol;
  report(4, "REDS4 bicubic+linear baseline", ok ? Verdict::pass : Verdict::fail,
         fmt("%.3f dB / %.4f SSIM (target %.2f +- %.1f dB / %.3f +- %.2f)", psnr_avg, ssim_avg,
             kRedsPsnr, kRedsPsnrTol, kRedsSsim, kRedsSsimTol));
}

// ---- 5 -------------------------------------------------------------------

struct PropertyLog {
  bool all = true;
  std::string failed;
  void check(const char* name, bool ok, double measured) {
    std::printf("    %-34s %s (%.3e)\n", name, ok ? "ok" : "VIOLATED", measured);
    if (!ok) {
      all = false;
      failed += std::string(failed.empty() ? "" : ", ") + name;
    }
  }
};

// A(r, c) from the tap formula: output voxel r = downsampled index n*s reads
// z[(n*s - (j - center)) mod shape] with weight k[j].
std::vector<double> tap_formula_matrix(const Kernel3D& k, const ScaleFactor& s, Shape3 hs) {
  const Shape3 ls = s.down(hs);
  std::vector<double> a(ls.volume() * hs.volume(), 0.0);
  const auto mod = [](long v, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((v % m) + m) % m);
  };
  for (std::size_t t = 0; t < ls.t; ++t)
    for (std::size_t h = 0; h < ls.h; ++h)
      for (std::size_t w = 0; w < ls.w; ++w) {
        const std::size_t row = (t * ls.h + h) * ls.w + w;
        for (std::size_t a0 = 0; a0 < k.extent().t; ++a0)
          for (std::size_t a1 = 0; a1 < k.extent().h; ++a1)
            for (std::size_t a2 = 0; a2 < k.extent().w; ++a2) {
              const std::size_t zt = mod(static_cast<long>(t * s.t()) - (static_cast<long>(a0) - static_cast<long>(k.center().t)), hs.t);
              const std::size_t zh = mod(static_cast<long>(h * s.h()) - (static_cast<long>(a1) - static_cast<long>(k.center().h)), hs.h);
              const std::size_t zw = mod(static_cast<long>(w * s.w()) - (static_cast<long>(a2) - static_cast<long>(k.center().w)), hs.w);
              a[row * hs.volume() + (zt * hs.h + zh) * hs.w + zw] += k.at(a0, a1, a2);
            }
      }
  return a;
}

void property_suites() {
  PropertyLog log;

  {  // FFT round trip and Parseval
    double rt = 0.0;
    double parseval = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const VideoTensor x = random_video(seed, {3 + seed % 3, 8, 6 + seed % 2}, 1, -1.0, 1.0);
      const ComplexSpectrum X = fft3(x, 0);
      rt = std::max(rt, max_abs_diff(ifft3(X), x));
      double e_time = 0.0;
      double e_freq = 0.0;
      for (double v : x.samples()) e_time += v * v;
      for (Complex v : X.values()) e_freq += std::norm(v);
      parseval = std::max(parseval, std::abs(e_freq / static_cast<double>(x.size()) - e_time) / e_time);
    }
    log.check("fft round trip", rt <= kFftTol, rt);
    log.check("fft Parseval (relative)", parseval <= kFftTol, parseval);
  }
  {  // adjoint identities
    double up_down = 0.0;
    double fold_tile = 0.0;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const ScaleFactor s(1 + seed % 2, 2, 1 + (seed / 2) % 2);
      const Shape3 l{2, 4, 4};
      const VideoTensor y = random_video(seed, l, 1, -1.0, 1.0);
      const VideoTensor x = random_video(seed + 50, s.up(l), 1, -1.0, 1.0);
      up_down = std::max(up_down, std::abs(dot(downsample_std(x, s).samples(), y.samples()) -
                                           dot(x.samples(), upsample_zero(y, s).samples())));
      ComplexSpectrum A(s.up(l));
      ComplexSpectrum B(l);
      for (Complex& v : A.values()) v = {n(rng), n(rng)};
      for (Complex& v : B.values()) v = {n(rng), n(rng)};
      const Complex lhs = dot(spectrum_fold_avg(A, s).values(), B.values());
      const Complex rhs = dot(A.values(), spectrum_tile(B, s).values()) / static_cast<double>(s.total());
      fold_tile = std::max(fold_tile, std::abs(lhs - rhs));
    }
    log.check("zero-fill / decimation adjoint", up_down <= kAdjointTol, up_down);
    log.check("fold / tile adjoint", fold_tile <= kAdjointTol, fold_tile);
  }
  {  // degradation equals its dense matrix at 4x8x8
    const Shape3 hs{4, 8, 8};
    const ScaleFactor s(2, 2, 2);
    const Kernel3D k = random_kernel(77, {3, 3, 3}, {1, 1, 1});
    const std::vector<double> formula = tap_formula_matrix(k, s, hs);
    const DenseMatrix probed = dense_degradation_operator(k, s, hs);
    double entries = max_abs_diff(std::span<const double>(formula), std::span<const double>(probed.values));
    const VideoTensor x = random_video(78, hs, 1, -1.0, 1.0);
    const VideoTensor y = blur_downsample(x, k, s);
    double applied = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < hs.volume(); ++c) acc += formula[r * hs.volume() + c] * x.samples()[c];
      applied = std::max(applied, std::abs(acc - y.samples()[r]));
    }
    const double worst = std::max(entries, applied);
    log.check("degradation vs dense matrix", worst <= kDenseMatrixTol, worst);
  }
  {  // proximal limit
    const Kernel3D k = random_kernel(80, {3, 3, 3}, {1, 1, 1});
    const VideoTensor xp = random_video(81, {4, 8, 8}, 3);
    const VideoTensor y = random_video(82, {2, 4, 4}, 3);
    const double d = max_abs_diff(fdt_solve(xp, y, FdtContext(k, {2, 2, 2}, {2, 4, 4}, 1e8)), xp);
    log.check("fdt_solve -> X_prev at alpha 1e8", d <= kProxTol, d);
  }
  {  // denoiser identity at beta = 0
    const VideoTensor z = random_video(90, {2, 9, 9}, 3, -1.0, 2.0);
    bool exact = true;
    for (DenoiserKind kind : {DenoiserKind::identity, DenoiserKind::gaussian, DenoiserKind::tv}) {
      DenoiserSpec spec;
      spec.kind = kind;
      spec.multiplier = 3.0;
      exact = exact && denoise(z, 0.0, spec) == z;
    }
    log.check("denoise(beta = 0) is exact identity", exact, exact ? 0.0 : 1.0);
  }
  {  // metric identities
    const VideoTensor a = random_video(91, {2, 16, 16}, 3);
    VideoTensor b1 = a;
    VideoTensor b01 = a;
    for (double& v : b1.samples()) v += 1.0;
    for (double& v : b01.samples()) v += 0.1;
    const double p0 = std::abs(psnr(a, b1) - 0.0);
    const double p20 = std::abs(psnr(a, b01) - 20.0);
    log.check("psnr offset 1.0 -> 0 dB", p0 <= kMetricTol, p0);
    log.check("psnr offset 0.1 -> 20 dB", p20 <= kMetricTol, p20);
    log.check("psnr self -> +inf", psnr(a, a) == kPsnrInfinite, 0.0);
    const double s1 = std::abs(ssim(a, a) - 1.0);
    log.check("ssim self = 1", s1 <= kMetricTol, s1);
    const double ch = std::abs(charbonnier(a, a, 1e-3) - 1e-3);
    log.check("charbonnier self = eps", ch <= 1e-15, ch);
  }
  report(5, "property suites", log.all ? Verdict::pass : Verdict::fail,
         log.all ? "all properties hold" : "violated: " + log.failed);
}

// ---- 6 -------------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string("'") + STVSR_CLI_PATH + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs degrade -> restore -> evaluate in `dir` and returns an error or "".
std::string pipeline(const fs::path& dir) {
  fs::create_directories(dir);
  write_frames(synthetic_video(31, {8, 32, 32}, 3), (dir / "hr").string());
  std::ofstream(dir / "exp.ini") << "input_dir = hr\n"
                                    "output_dir = lr\n"
                                    "[degradation]\n"
                                    "noise_sigma = 0.005\n"
                                    "seed = 11\n"
                                    "[output]\n"
                                    "dump_trace = true\n";
  const fs::path log = dir / "log.txt";
  const std::string d = dir.string();
  if (run_cli("degrade --config '" + d + "/exp.ini'", log) != 0) return "degrade failed: " + slurp(log);
  if (run_cli("restore --config '" + d + "/exp.ini' --kernel '" + d + "/lr/kernel.k3' --input '" + d +
                  "/lr' --output '" + d + "/sr'",
              log) != 0) {
    return "restore failed: " + slurp(log);
  }
  if (run_cli("evaluate --reference '" + d + "/hr' --test '" + d + "/sr' --report '" + d +
                  "/report.txt'",
              log) != 0) {
    return "evaluate failed: " + slurp(log);
  }
  return "";
}

void determinism() {
  std::random_device rd;
  const fs::path root = fs::temp_directory_path() / ("stvsr_accept_" + std::to_string(rd()));
  const fs::path a = root / "run1";
  const fs::path b = root / "run2";
  std::string err = pipeline(a);
  if (err.empty()) err = pipeline(b);
  std::size_t compared = 0;
  std::string diff;
  if (err.empty()) {
    if (slurp(a / "report.txt") != slurp(b / "report.txt") || slurp(a / "report.txt").empty()) {
      diff = "report.txt";
    }
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (e.path().extension() != ".f32") continue;
      const fs::path rel = fs::relative(e.path(), a);
      ++compared;
      if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel)) {
        diff += (diff.empty() ? "" : ", ") + rel.string();
      }
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  if (!err.empty()) {
    report(6, "pipeline determinism", Verdict::fail, err);
    return;
  }
  const bool ok = diff.empty() && compared > 0;
  report(6, "pipeline determinism", ok ? Verdict::pass : Verdict::fail,
         ok ? fmt("report and %zu float sidecars byte-identical across two runs", compared)
            : "differences: " + (diff.empty() ? std::string("no sidecars written") : diff));
}

}  // namespace

int main() {
  guarded(1, "oracle equivalence", oracle_equivalence);
  guarded(2, "complexity scaling", complexity_scaling);
  guarded(3, "synthetic end-to-end restoration", synthetic_restoration);
  guarded(4, "REDS4 bicubic+linear baseline", reds4_baseline);
  guarded(5, "property suites", property_suites);
  guarded(6, "pipeline determinism", determinism);

  std::size_t failed = 0;
  for (Verdict v : g_verdicts) failed += v == Verdict::fail ? 1 : 0;
  std::printf("acceptance: %zu criteria, %zu failed\n", g_verdicts.size(), failed);
  return failed == 0 ? 0 : 1;
}
