// Command-line front end. Links only the C API of libstvsr.
//
//   stvsr degrade      --config C [--input DIR] [--output DIR]
//   stvsr restore      --config C --kernel K3 [--input DIR] [--output DIR] [--dump-trace]
//   stvsr evaluate     --reference DIR --test DIR [--report FILE] [--color-space rgb|luma]
//   stvsr oracle-check [--seed N] [--trials N]
//   stvsr bench        [--repeats N] [--no-dense]
//
// Exit codes: 0 success, 1 contract violation (bad flags, config, shapes,
// numerical failure), 2 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "stvsr/stvsr.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitContract = 1;
constexpr int kExitIo = 2;

// Raised to unwind a subcommand with a specific exit code.
struct Failure {
  int code;
};

int exit_code(stvsr_status s) { return s == STVSR_ERR_IO ? kExitIo : kExitContract; }

void check(stvsr_status s, const std::string& what) {
  if (s == STVSR_OK) return;
  std::fprintf(stderr, "stvsr: %s: %s (%s)\n", what.c_str(), stvsr_last_error(),
               stvsr_status_name(s));
  throw Failure{exit_code(s)};
}

[[noreturn]] void fail(int code, const std::string& message) {
  std::fprintf(stderr, "stvsr: %s\n", message.c_str());
  throw Failure{code};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Video = std::unique_ptr<stvsr_video, Deleter<stvsr_video, stvsr_video_destroy>>;
using Kernel = std::unique_ptr<stvsr_kernel, Deleter<stvsr_kernel, stvsr_kernel_destroy>>;
using Config = std::unique_ptr<stvsr_config, Deleter<stvsr_config, stvsr_config_destroy>>;
using Trace = std::unique_ptr<stvsr_trace, Deleter<stvsr_trace, stvsr_trace_destroy>>;
using Report = std::unique_ptr<stvsr_report, Deleter<stvsr_report, stvsr_report_destroy>>;

Config load_config(const std::string& path) {
  stvsr_config* raw = nullptr;
  check(stvsr_config_load(path.c_str(), &raw), "loading config");
  return Config(raw);
}

Video read_video(const std::string& dir) {
  stvsr_video* raw = nullptr;
  check(stvsr_video_read_frames(dir.c_str(), &raw), "reading frames");
  return Video(raw);
}

void write_video(const stvsr_video* v, const std::string& dir, bool dump) {
  check(stvsr_video_write_frames(v, dir.c_str(), dump ? 1 : 0), "writing frames to " + dir);
}

// Flag value wins over the config value; one of them must be set.
std::string pick(const std::string& flag, const char* from_config, const char* what) {
  std::string v = flag.empty() ? std::string(from_config) : flag;
  if (v.empty()) fail(kExitContract, std::string("no ") + what + " given (flag or config)");
  return v;
}

void require_dir(const std::string& dir, const char* what) {
  if (!fs::is_directory(dir)) fail(kExitIo, std::string(what) + " " + dir + " does not exist");
}

struct DegradeArgs {
  std::string config, input, output;
};

int run_degrade(const DegradeArgs& a) {
  Config cfg = load_config(a.config);
  const std::string input = pick(a.input, stvsr_config_input_dir(cfg.get()), "input directory");
  const std::string output = pick(a.output, stvsr_config_output_dir(cfg.get()), "output directory");
  require_dir(input, "input directory");
  stvsr_kernel* kraw = nullptr;
  check(stvsr_config_kernel(cfg.get(), &kraw), "building kernel");
  Kernel kernel(kraw);

  Video hstr = read_video(input);
  stvsr_video* yraw = nullptr;
  check(stvsr_degrade(hstr.get(), cfg.get(), &yraw), "degrading");
  Video lstr(yraw);

  write_video(lstr.get(), output, stvsr_config_dump_trace(cfg.get()) != 0);
  const std::string kpath = (fs::path(output) / "kernel.k3").string();
  check(stvsr_kernel_write(kernel.get(), kpath.c_str()), "writing kernel");
  size_t t = 0, h = 0, w = 0, c = 0;
  stvsr_video_shape(lstr.get(), &t, &h, &w, &c);
  std::printf("degraded %s -> %s (%zux%zux%zux%zu), kernel written to %s\n", input.c_str(),
              output.c_str(), t, h, w, c, kpath.c_str());
  return kExitOk;
}

struct RestoreArgs {
  std::string config, kernel, input, output;
  bool dump_trace = false;
};

int run_restore(const RestoreArgs& a) {
  Config cfg = load_config(a.config);
  if (a.dump_trace) stvsr_config_set_dump_trace(cfg.get(), 1);
  const bool dump = stvsr_config_dump_trace(cfg.get()) != 0;
  const std::string input = pick(a.input, stvsr_config_input_dir(cfg.get()), "input directory");
  const std::string output = pick(a.output, stvsr_config_output_dir(cfg.get()), "output directory");
  require_dir(input, "input directory");
  stvsr_kernel* kraw = nullptr;
  check(stvsr_kernel_read(a.kernel.c_str(), &kraw), "reading kernel");
  Kernel kernel(kraw);

  Video lstr = read_video(input);
  stvsr_video* xraw = nullptr;
  stvsr_trace* traw = nullptr;
  check(stvsr_restore(lstr.get(), kernel.get(), cfg.get(), &xraw, dump ? &traw : nullptr),
        "restoring");
  Video restored(xraw);
  Trace trace(traw);

  write_video(restored.get(), output, dump);
  if (dump) {
    for (size_t k = 0; k < stvsr_trace_length(trace.get()); ++k) {
      stvsr_video *zraw = nullptr, *xkraw = nullptr;
      check(stvsr_trace_iterate(trace.get(), k, &zraw, &xkraw), "reading trace");
      Video z(zraw), x(xkraw);
      char name[32];
      std::snprintf(name, sizeof name, "iter_%02zu", k + 1);
      const fs::path base = fs::path(output) / "trace" / name;
      write_video(z.get(), (base / "z").string(), true);
      write_video(x.get(), (base / "x").string(), true);
      double alpha = 0, beta = 0;
      check(stvsr_trace_schedule(trace.get(), k, &alpha, &beta), "reading schedule");
      std::printf("iteration %zu: alpha = %.6g, beta = %.6g\n", k + 1, alpha, beta);
    }
  }
  size_t t = 0, h = 0, w = 0, c = 0;
  stvsr_video_shape(restored.get(), &t, &h, &w, &c);
  std::printf("restored %s -> %s (%zux%zux%zux%zu)\n", input.c_str(), output.c_str(), t, h, w, c);
  return kExitOk;
}

struct EvaluateArgs {
  std::string reference, test, report, color_space = "rgb";
  double peak = 1.0;
};

int run_evaluate(const EvaluateArgs& a) {
  require_dir(a.reference, "reference directory");
  require_dir(a.test, "test directory");
  const std::string report_path =
      a.report.empty() ? (fs::path(a.test) / "report.txt").string() : a.report;
  Video ref = read_video(a.reference);
  Video test = read_video(a.test);
  stvsr_report* rraw = nullptr;
  check(stvsr_evaluate(ref.get(), test.get(), a.color_space.c_str(), a.peak, &rraw), "evaluating");
  Report report(rraw);
  std::fputs(stvsr_report_text(report.get()), stdout);
  check(stvsr_report_write(report.get(), report_path.c_str()), "writing report");
  return kExitOk;
}

int run_oracle_check(std::uint64_t seed, std::size_t trials) {
  double deviation = 0.0;
  size_t instances = 0;
  check(stvsr_oracle_check(seed, trials, &deviation, &instances), "oracle check");
  const bool ok = deviation <= 1e-6;
  std::printf("instances = %zu\nmax_deviation = %.3e\nthreshold = 1e-06\nresult = %s\n", instances,
              deviation, ok ? "pass" : "FAIL");
  return ok ? kExitOk : kExitContract;
}

int run_bench(std::size_t repeats, bool dense) {
  stvsr_bench_result r{};
  check(stvsr_bench(repeats, dense ? 1 : 0, &r), "bench");
  std::printf("%10s %14s\n", "voxels", "fdt_seconds");
  for (size_t i = 0; i < r.points; ++i) std::printf("%10zu %14.6e\n", r.voxels[i], r.seconds[i]);
  std::printf("slope = %.4f (limit 1.15: %s)\n", r.slope, r.slope <= 1.15 ? "pass" : "FAIL");
  if (dense) {
    std::printf("dense_seconds = %.4f at %zu voxels\nspeedup = %.1fx (limit 100x: %s)\n",
                r.dense_seconds, r.voxels[0], r.speedup, r.speedup >= 100.0 ? "pass" : "FAIL");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time video super-resolution by half-quadratic splitting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", stvsr_version());

  DegradeArgs degrade;
  auto* deg = app.add_subcommand("degrade", "Simulate the low-resolution blurry observation");
  deg->add_option("-c,--config", degrade.config, "Experiment config file")->required();
  deg->add_option("-i,--input", degrade.input, "High-resolution frame directory");
  deg->add_option("-o,--output", degrade.output, "Output frame directory");

  RestoreArgs restore;
  auto* res = app.add_subcommand("restore", "Restore a high-resolution video");
  res->add_option("-c,--config", restore.config, "Experiment config file")->required();
  res->add_option("-k,--kernel", restore.kernel, "Blur kernel file (K3 format)")->required();
  res->add_option("-i,--input", restore.input, "Low-resolution frame directory");
  res->add_option("-o,--output", restore.output, "Output frame directory");
  res->add_flag("--dump-trace", restore.dump_trace, "Write per-iteration Z_k / X_k frames");

  EvaluateArgs evaluate;
  auto* ev = app.add_subcommand("evaluate", "PSNR / SSIM of a test sequence");
  ev->add_option("-r,--reference", evaluate.reference, "Ground-truth frame directory")->required();
  ev->add_option("-t,--test", evaluate.test, "Frame directory to score")->required();
  ev->add_option("--report", evaluate.report, "Report file (default: TEST/report.txt)");
  ev->add_option("--color-space", evaluate.color_space, "rgb or luma")
      ->check(CLI::IsMember({"rgb", "luma"}));
  ev->add_option("--peak", evaluate.peak, "Peak signal value")->check(CLI::PositiveNumber);

  std::uint64_t seed = 7;
  std::size_t trials = 200;
  auto* oc = app.add_subcommand("oracle-check", "Compare the FFT solver with the dense solver");
  oc->add_option("--seed", seed, "Random seed");
  oc->add_option("--trials", trials, "Number of randomized instances")->check(CLI::PositiveNumber);

  std::size_t repeats = 5;
  bool no_dense = false;
  auto* bench = app.add_subcommand("bench", "Runtime scaling of the FFT solver");
  bench->add_option("--repeats", repeats, "Timing repeats per size")->check(CLI::PositiveNumber);
  bench->add_flag("--no-dense", no_dense, "Skip the dense-solver comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitContract;
  }

  try {
    if (deg->parsed()) return run_degrade(degrade);
    if (res->parsed()) return run_restore(restore);
    if (ev->parsed()) return run_evaluate(evaluate);
    if (oc->parsed()) return run_oracle_check(seed, trials);
    if (bench->parsed()) return run_bench(repeats, !no_dense);
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitContract;
}
