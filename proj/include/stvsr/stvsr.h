/*
 * stvsr C API: space-time video super-resolution by half-quadratic
 * splitting with a closed-form FFT data step.
 *
 * All objects are opaque handles created by stvsr_*_create/read/load calls
 * and released by the matching *_destroy call (destroy accepts NULL).
 * Functions returning stvsr_status leave their output untouched on failure;
 * stvsr_last_error() then describes the failure for the calling thread.
 */
#ifndef STVSR_STVSR_H
#define STVSR_STVSR_H

#include <stddef.h>
#include <stdint.h>

#if defined(STVSR_BUILDING_LIBRARY)
#define STVSR_API __attribute__((visibility("default")))
#else
#define STVSR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stvsr_status {
  STVSR_OK = 0,
  STVSR_ERR_CONTRACT = 1, /* invalid argument, config or precondition */
  STVSR_ERR_SHAPE = 2,    /* incompatible tensor shapes */
  STVSR_ERR_IO = 3,       /* file system or codec failure */
  STVSR_ERR_NUMERIC = 4,  /* non-finite result or failed factorization */
  STVSR_ERR_INTERNAL = 5
} stvsr_status;

typedef struct stvsr_video stvsr_video;
typedef struct stvsr_kernel stvsr_kernel;
typedef struct stvsr_config stvsr_config;
typedef struct stvsr_trace stvsr_trace;
typedef struct stvsr_report stvsr_report;

STVSR_API const char* stvsr_version(void);
/* Message of the last failed call on this thread ("" if none). */
STVSR_API const char* stvsr_last_error(void);
STVSR_API const char* stvsr_status_name(stvsr_status status);

/* ---- videos: T x H x W x C samples, (t, h, w, c) order, C in {1, 3} ---- */

STVSR_API stvsr_status stvsr_video_create(size_t frames, size_t height, size_t width,
                                          size_t channels, stvsr_video** out);
/* Copies frames*height*width*channels samples. */
STVSR_API stvsr_status stvsr_video_from_data(size_t frames, size_t height, size_t width,
                                             size_t channels, const double* samples,
                                             stvsr_video** out);
STVSR_API void stvsr_video_destroy(stvsr_video* video);
STVSR_API void stvsr_video_shape(const stvsr_video* video, size_t* frames, size_t* height,
                                 size_t* width, size_t* channels);
/* Borrowed pointer, valid until the video is destroyed. */
STVSR_API const double* stvsr_video_data(const stvsr_video* video);

/* Reads dir/frame_%06d.png (8-bit gray or RGB) into [0, 1] samples. */
STVSR_API stvsr_status stvsr_video_read_frames(const char* dir, stvsr_video** out);
/* Writes 8-bit PNGs; with dump_f32 also frame_%06d.f32 float sidecars. */
STVSR_API stvsr_status stvsr_video_write_frames(const stvsr_video* video, const char* dir,
                                                int dump_f32);
STVSR_API stvsr_status stvsr_video_read_f32_frames(const char* dir, stvsr_video** out);

/* ---- blur kernels ---- */

/* Text format: "K3 k_t k_h k_w c_t c_h c_w" then the taps in (t, h, w) order. */
STVSR_API stvsr_status stvsr_kernel_read(const char* path, stvsr_kernel** out);
STVSR_API stvsr_status stvsr_kernel_write(const stvsr_kernel* kernel, const char* path);
STVSR_API stvsr_status stvsr_kernel_delta(stvsr_kernel** out);
/* Temporal box of `box` taps times a sampled spatial Gaussian. */
STVSR_API stvsr_status stvsr_kernel_box_gaussian(size_t box, double spatial_sigma,
                                                 size_t spatial_extent, stvsr_kernel** out);
STVSR_API void stvsr_kernel_destroy(stvsr_kernel* kernel);
STVSR_API void stvsr_kernel_extent(const stvsr_kernel* kernel, size_t* t, size_t* h, size_t* w);

/* ---- experiment configuration ---- */

STVSR_API stvsr_status stvsr_config_default(stvsr_config** out);
STVSR_API stvsr_status stvsr_config_load(const char* path, stvsr_config** out);
STVSR_API void stvsr_config_destroy(stvsr_config* config);
/* Borrowed strings; "" when unset. */
STVSR_API const char* stvsr_config_input_dir(const stvsr_config* config);
STVSR_API const char* stvsr_config_output_dir(const stvsr_config* config);
STVSR_API int stvsr_config_dump_trace(const stvsr_config* config);
STVSR_API void stvsr_config_set_dump_trace(stvsr_config* config, int enabled);
/* "rgb" or "luma". */
STVSR_API stvsr_status stvsr_config_set_color_space(stvsr_config* config, const char* name);
/* Builds the blur kernel described by the [degradation] section. */
STVSR_API stvsr_status stvsr_config_kernel(const stvsr_config* config, stvsr_kernel** out);

/* ---- forward model and restoration ---- */

/* Y = downsample(shift(X) (*) K) + N using the [degradation] section. */
STVSR_API stvsr_status stvsr_degrade(const stvsr_video* hstr, const stvsr_config* config,
                                     stvsr_video** out);
/* Same forward model with an explicit kernel and parameters. */
STVSR_API stvsr_status stvsr_degrade_with_kernel(const stvsr_video* hstr,
                                                 const stvsr_kernel* kernel, size_t scale_t,
                                                 size_t scale_h, size_t scale_w,
                                                 double noise_sigma, uint64_t seed,
                                                 stvsr_video** out);
/* Runs the [hqs]/[denoiser] configured restoration with the scale factors of
 * the [degradation] section. `trace` may be NULL. */
STVSR_API stvsr_status stvsr_restore(const stvsr_video* lstr, const stvsr_kernel* kernel,
                                     const stvsr_config* config, stvsr_video** out,
                                     stvsr_trace** trace);

STVSR_API size_t stvsr_trace_length(const stvsr_trace* trace);
/* New handles holding copies of iterate `index` (0-based); either may be NULL. */
STVSR_API stvsr_status stvsr_trace_iterate(const stvsr_trace* trace, size_t index,
                                           stvsr_video** z, stvsr_video** x);
STVSR_API stvsr_status stvsr_trace_schedule(const stvsr_trace* trace, size_t index,
                                            double* alpha, double* beta);
STVSR_API void stvsr_trace_destroy(stvsr_trace* trace);

/* ---- metrics ---- */

/* color_space: "rgb" or "luma"; peak: 1.0 for [0, 1] data. */
STVSR_API stvsr_status stvsr_evaluate(const stvsr_video* reference, const stvsr_video* test,
                                      const char* color_space, double peak, stvsr_report** out);
STVSR_API size_t stvsr_report_frames(const stvsr_report* report);
/* +INFINITY for identical inputs. */
STVSR_API double stvsr_report_mean_psnr(const stvsr_report* report);
STVSR_API double stvsr_report_mean_ssim(const stvsr_report* report);
STVSR_API double stvsr_report_frame_psnr(const stvsr_report* report, size_t frame);
STVSR_API double stvsr_report_frame_ssim(const stvsr_report* report, size_t frame);
/* Table plus "[metrics]" key = value section; borrowed string. */
STVSR_API const char* stvsr_report_text(const stvsr_report* report);
STVSR_API stvsr_status stvsr_report_write(const stvsr_report* report, const char* path);
STVSR_API void stvsr_report_destroy(stvsr_report* report);

/* ---- verification ---- */

/* Compares the FFT solver against the dense normal-equation solver on
 * `trials` randomized small instances. */
STVSR_API stvsr_status stvsr_oracle_check(uint64_t seed, size_t trials, double* max_deviation,
                                          size_t* instances);

typedef struct stvsr_bench_result {
  size_t points;          /* number of timed sizes (3) */
  size_t voxels[3];
  double seconds[3];      /* best-of-repeats fdt solve time */
  double slope;           /* log-log slope of seconds vs voxels */
  double dense_seconds;   /* dense oracle at voxels[0], 0 if skipped */
  double speedup;         /* dense_seconds / seconds[0] */
} stvsr_bench_result;

STVSR_API stvsr_status stvsr_bench(size_t repeats, int with_dense, stvsr_bench_result* out);

#ifdef __cplusplus
}
#endif

#endif /* STVSR_STVSR_H */
