#include "stvsr/stvsr.h"

#include <cmath>
#include <fstream>
#include <new>
#include <string>
#include <utility>

#include "stvsr/config.hpp"
#include "stvsr/degradation.hpp"
#include "stvsr/error.hpp"
#include "stvsr/experiments.hpp"
#include "stvsr/frame_io.hpp"
#include "stvsr/hqs.hpp"
#include "stvsr/metrics.hpp"

struct stvsr_video {
  stvsr::VideoTensor v;
};
struct stvsr_kernel {
  stvsr::Kernel3D k;
};
struct stvsr_config {
  stvsr::ExperimentConfig cfg;
};
struct stvsr_trace {
  stvsr::RestoreTrace trace;
};
struct stvsr_report {
  stvsr::MetricReport report;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

stvsr_status status_of(stvsr::ErrorKind kind) {
  switch (kind) {
    case stvsr::ErrorKind::contract: return STVSR_ERR_CONTRACT;
    case stvsr::ErrorKind::shape: return STVSR_ERR_SHAPE;
    case stvsr::ErrorKind::io: return STVSR_ERR_IO;
    case stvsr::ErrorKind::numeric: return STVSR_ERR_NUMERIC;
  }
  return STVSR_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes and the thread-local
// error message.
template <class F>
stvsr_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return STVSR_OK;
  } catch (const stvsr::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return STVSR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STVSR_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw stvsr::ContractError(std::string(what) + " must not be NULL");
}

stvsr_video* wrap(stvsr::VideoTensor v) { return new stvsr_video{std::move(v)}; }

}  // namespace

extern "C" {

const char* stvsr_version(void) { return "1.0.0"; }

const char* stvsr_last_error(void) { return g_last_error.c_str(); }

const char* stvsr_status_name(stvsr_status status) {
  switch (status) {
    case STVSR_OK: return "ok";
    case STVSR_ERR_CONTRACT: return "contract violation";
    case STVSR_ERR_SHAPE: return "shape mismatch";
    case STVSR_ERR_IO: return "I/O error";
    case STVSR_ERR_NUMERIC: return "numerical failure";
    case STVSR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- videos ----

stvsr_status stvsr_video_create(size_t frames, size_t height, size_t width, size_t channels,
                                stvsr_video** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(stvsr::VideoTensor(frames, height, width, channels));
  });
}

stvsr_status stvsr_video_from_data(size_t frames, size_t height, size_t width, size_t channels,
                                   const double* samples, stvsr_video** out) {
  return guarded([&] {
    require(out, "out");
    require(samples, "samples");
    const stvsr::Shape3 shape{frames, height, width};
    std::vector<double> data(samples, samples + shape.volume() * channels);
    stvsr::VideoTensor v(shape, channels, std::move(data));
    if (!v.all_finite()) throw stvsr::ContractError("video samples must be finite");
    *out = wrap(std::move(v));
  });
}

void stvsr_video_destroy(stvsr_video* video) { delete video; }

void stvsr_video_shape(const stvsr_video* video, size_t* frames, size_t* height, size_t* width,
                       size_t* channels) {
  if (video == nullptr) return;
  if (frames) *frames = video->v.frames();
  if (height) *height = video->v.height();
  if (width) *width = video->v.width();
  if (channels) *channels = video->v.channels();
}

const double* stvsr_video_data(const stvsr_video* video) {
  return video ? video->v.samples().data() : nullptr;
}

stvsr_status stvsr_video_read_frames(const char* dir, stvsr_video** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = wrap(stvsr::read_frames(dir));
  });
}

stvsr_status stvsr_video_write_frames(const stvsr_video* video, const char* dir, int dump_f32) {
  return guarded([&] {
    require(video, "video");
    require(dir, "dir");
    stvsr::write_frames(video->v, dir, dump_f32 != 0);
  });
}

stvsr_status stvsr_video_read_f32_frames(const char* dir, stvsr_video** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = wrap(stvsr::read_f32_frames(dir));
  });
}

// ---- kernels ----

stvsr_status stvsr_kernel_read(const char* path, stvsr_kernel** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new stvsr_kernel{stvsr::read_kernel_file(path)};
  });
}

stvsr_status stvsr_kernel_write(const stvsr_kernel* kernel, const char* path) {
  return guarded([&] {
    require(kernel, "kernel");
    require(path, "path");
    stvsr::write_kernel_file(path, kernel->k);
  });
}

stvsr_status stvsr_kernel_delta(stvsr_kernel** out) {
  return guarded([&] {
    require(out, "out");
    *out = new stvsr_kernel{stvsr::Kernel3D::delta()};
  });
}

stvsr_status stvsr_kernel_box_gaussian(size_t box, double spatial_sigma, size_t spatial_extent,
                                       stvsr_kernel** out) {
  return guarded([&] {
    require(out, "out");
    *out = new stvsr_kernel{stvsr::Kernel3D::compose(
        stvsr::exposure_box_kernel(box),
        stvsr::gaussian_spatial_kernel(spatial_sigma, spatial_extent, spatial_extent))};
  });
}

void stvsr_kernel_destroy(stvsr_kernel* kernel) { delete kernel; }

void stvsr_kernel_extent(const stvsr_kernel* kernel, size_t* t, size_t* h, size_t* w) {
  if (kernel == nullptr) return;
  if (t) *t = kernel->k.extent().t;
  if (h) *h = kernel->k.extent().h;
  if (w) *w = kernel->k.extent().w;
}

// ---- config ----

stvsr_status stvsr_config_default(stvsr_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new stvsr_config{};
  });
}

stvsr_status stvsr_config_load(const char* path, stvsr_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new stvsr_config{stvsr::load_config(path)};
  });
}

void stvsr_config_destroy(stvsr_config* config) { delete config; }

const char* stvsr_config_input_dir(const stvsr_config* config) {
  return config ? config->cfg.input_dir.c_str() : "";
}

const char* stvsr_config_output_dir(const stvsr_config* config) {
  return config ? config->cfg.output_dir.c_str() : "";
}

int stvsr_config_dump_trace(const stvsr_config* config) {
  return config && config->cfg.dump_trace ? 1 : 0;
}

void stvsr_config_set_dump_trace(stvsr_config* config, int enabled) {
  if (config) config->cfg.dump_trace = enabled != 0;
}

stvsr_status stvsr_config_set_color_space(stvsr_config* config, const char* name) {
  return guarded([&] {
    require(config, "config");
    require(name, "name");
    config->cfg.color = stvsr::parse_color_space(name);
  });
}

stvsr_status stvsr_config_kernel(const stvsr_config* config, stvsr_kernel** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new stvsr_kernel{stvsr::resolve_kernel(config->cfg).kernel};
  });
}

// ---- forward model and restoration ----

stvsr_status stvsr_degrade(const stvsr_video* hstr, const stvsr_config* config,
                           stvsr_video** out) {
  return guarded([&] {
    require(hstr, "hstr");
    require(config, "config");
    require(out, "out");
    const stvsr::ResolvedKernel kernel = stvsr::resolve_kernel(config->cfg);
    const stvsr::DegradationSpec spec{kernel.kernel, config->cfg.scale, config->cfg.noise_sigma,
                                      config->cfg.seed};
    *out = wrap(stvsr::degrade(stvsr::circular_shift(hstr->v, kernel.pre_shift), spec));
  });
}

stvsr_status stvsr_degrade_with_kernel(const stvsr_video* hstr, const stvsr_kernel* kernel,
                                       size_t scale_t, size_t scale_h, size_t scale_w,
                                       double noise_sigma, uint64_t seed, stvsr_video** out) {
  return guarded([&] {
    require(hstr, "hstr");
    require(kernel, "kernel");
    require(out, "out");
    const stvsr::DegradationSpec spec{kernel->k, stvsr::ScaleFactor(scale_t, scale_h, scale_w),
                                      noise_sigma, seed};
    *out = wrap(stvsr::degrade(hstr->v, spec));
  });
}

stvsr_status stvsr_restore(const stvsr_video* lstr, const stvsr_kernel* kernel,
                           const stvsr_config* config, stvsr_video** out, stvsr_trace** trace) {
  return guarded([&] {
    require(lstr, "lstr");
    require(kernel, "kernel");
    require(config, "config");
    require(out, "out");
    stvsr::RestoreResult result =
        stvsr::restore(lstr->v, kernel->k, config->cfg.scale, config->cfg.hqs);
    stvsr_video* video = wrap(std::move(result.video));
    if (trace) {
      try {
        *trace = new stvsr_trace{std::move(result.trace)};
      } catch (...) {
        delete video;
        throw;
      }
    }
    *out = video;
  });
}

size_t stvsr_trace_length(const stvsr_trace* trace) {
  return trace ? trace->trace.iterates.size() : 0;
}

stvsr_status stvsr_trace_iterate(const stvsr_trace* trace, size_t index, stvsr_video** z,
                                 stvsr_video** x) {
  return guarded([&] {
    require(trace, "trace");
    if (index >= trace->trace.iterates.size()) {
      throw stvsr::ContractError("trace index " + std::to_string(index) + " out of range");
    }
    const auto& it = trace->trace.iterates[index];
    stvsr_video* zc = z ? wrap(it.z) : nullptr;
    stvsr_video* xc = nullptr;
    try {
      xc = x ? wrap(it.x) : nullptr;
    } catch (...) {
      delete zc;
      throw;
    }
    if (z) *z = zc;
    if (x) *x = xc;
  });
}

stvsr_status stvsr_trace_schedule(const stvsr_trace* trace, size_t index, double* alpha,
                                  double* beta) {
  return guarded([&] {
    require(trace, "trace");
    const auto& s = trace->trace.schedule;
    if (index >= s.alphas.size()) {
      throw stvsr::ContractError("schedule index " + std::to_string(index) + " out of range");
    }
    if (alpha) *alpha = s.alphas[index];
    if (beta) *beta = s.betas[index];
  });
}

void stvsr_trace_destroy(stvsr_trace* trace) { delete trace; }

// ---- metrics ----

stvsr_status stvsr_evaluate(const stvsr_video* reference, const stvsr_video* test,
                            const char* color_space, double peak, stvsr_report** out) {
  return guarded([&] {
    require(reference, "reference");
    require(test, "test");
    require(out, "out");
    const stvsr::ColorSpace cs =
        color_space ? stvsr::parse_color_space(color_space) : stvsr::ColorSpace::rgb;
    stvsr::MetricReport report = stvsr::evaluate(reference->v, test->v, cs, peak);
    std::string text = stvsr::format_report(report);
    *out = new stvsr_report{std::move(report), std::move(text)};
  });
}

size_t stvsr_report_frames(const stvsr_report* report) {
  return report ? report->report.per_frame_psnr.size() : 0;
}

double stvsr_report_mean_psnr(const stvsr_report* report) {
  return report ? report->report.mean_psnr : NAN;
}

double stvsr_report_mean_ssim(const stvsr_report* report) {
  return report ? report->report.mean_ssim : NAN;
}

double stvsr_report_frame_psnr(const stvsr_report* report, size_t frame) {
  if (!report || frame >= report->report.per_frame_psnr.size()) return NAN;
  return report->report.per_frame_psnr[frame];
}

double stvsr_report_frame_ssim(const stvsr_report* report, size_t frame) {
  if (!report || frame >= report->report.per_frame_ssim.size()) return NAN;
  return report->report.per_frame_ssim[frame];
}

const char* stvsr_report_text(const stvsr_report* report) {
  return report ? report->text.c_str() : "";
}

stvsr_status stvsr_report_write(const stvsr_report* report, const char* path) {
  return guarded([&] {
    require(report, "report");
    require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw stvsr::IoError(std::string("cannot create report ") + path);
    out << report->text;
    if (!out) throw stvsr::IoError(std::string("failed writing report ") + path);
  });
}

void stvsr_report_destroy(stvsr_report* report) { delete report; }

// ---- verification ----

stvsr_status stvsr_oracle_check(uint64_t seed, size_t trials, double* max_deviation,
                                size_t* instances) {
  return guarded([&] {
    require(max_deviation, "max_deviation");
    if (trials == 0) throw stvsr::ContractError("oracle check needs at least one trial");
    const stvsr::OracleCheckResult r = stvsr::oracle_check(seed, trials);
    *max_deviation = r.max_deviation;
    if (instances) *instances = r.instances;
  });
}

stvsr_status stvsr_bench(size_t repeats, int with_dense, stvsr_bench_result* out) {
  return guarded([&] {
    require(out, "out");
    const stvsr::BenchResult r = stvsr::run_bench(repeats, with_dense != 0);
    stvsr_bench_result res{};
    res.points = r.fdt.size();
    for (std::size_t i = 0; i < r.fdt.size() && i < 3; ++i) {
      res.voxels[i] = r.fdt[i].shape.volume();
      res.seconds[i] = r.fdt[i].seconds;
    }
    res.slope = r.slope;
    res.dense_seconds = r.dense_seconds;
    res.speedup = r.speedup;
    *out = res;
  });
}

}  // extern "C"
