#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stvsr/config.hpp"
#include "stvsr/error.hpp"
#include "stvsr/frame_io.hpp"
#include "support.hpp"

using namespace stvsr;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = fs::temp_directory_path() / ("stvsr_io_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& sub = "") const { return (path / sub).string(); }
};

VideoTensor quantized_video(std::uint64_t seed, Shape3 shape, std::size_t channels) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  VideoTensor v(shape, channels);
  for (double& s : v.samples()) s = u(rng) / 255.0;
  return v;
}

std::string error_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig parse(const std::string& text, const std::string& base = ".") {
  std::istringstream in(text);
  return parse_config(in, base);
}

}  // namespace

TEST_CASE("frame names are zero padded") {
  CHECK(frame_name(0) == "frame_000000.png");
  CHECK(frame_name(123, ".f32") == "frame_000123.f32");
}

TEST_CASE("a black 2x2 frame reads back as zeros") {
  TempDir dir("black");
  write_frames(VideoTensor(1, 2, 2, 3), dir.str());
  const VideoTensor v = read_frames(dir.str());
  CHECK(v.shape() == Shape3{1, 2, 2});
  CHECK(v.channels() == 3);
  for (double s : v.samples()) CHECK(s == 0.0);
}

TEST_CASE("8-bit data survives a write/read round trip") {
  for (std::size_t channels : {1u, 3u}) {
    TempDir dir("roundtrip");
    const VideoTensor v = quantized_video(channels, {3, 5, 7}, channels);
    write_frames(v, dir.str());
    CHECK(read_frames(dir.str()) == v);
  }
}

TEST_CASE("quantization rounds halves away from zero and clamps") {
  CHECK(quantize(0.5) == 128);
  CHECK(quantize(1.5) == 255);
  CHECK(quantize(-0.2) == 0);
  CHECK(quantize(std::nan("")) == 0);
  CHECK(quantize(1.0 / 255.0) == 1);
  CHECK(quantize(0.5 / 255.0) == 1);

  TempDir dir("quant");
  VideoTensor v(1, 2, 2, 1, 0.5);
  v.at(0, 1, 1) = 1.5;
  write_frames(v, dir.str());
  const VideoTensor back = read_frames(dir.str());
  CHECK(back.at(0, 0, 0) == 128.0 / 255.0);
  CHECK(back.at(0, 1, 1) == 1.0);
}

TEST_CASE("a gap in frame numbering names the missing index") {
  TempDir dir("gap");
  write_frames(VideoTensor(3, 2, 2, 1), dir.str());
  fs::remove(dir.path / frame_name(1));
  const std::string msg = error_of([&] { read_frames(dir.str()); });
  CHECK(msg.find("frame_000001.png") != std::string::npos);
  CHECK(msg.find("index 1") != std::string::npos);
}

TEST_CASE("mixed frame dimensions name the offending file") {
  TempDir a("mixed_a");
  TempDir b("mixed_b");
  write_frames(VideoTensor(2, 2, 2, 1), a.str());
  write_frames(VideoTensor(1, 3, 2, 1), b.str());
  fs::copy_file(b.path / frame_name(0), a.path / frame_name(1), fs::copy_options::overwrite_existing);
  const std::string msg = error_of([&] { read_frames(a.str()); });
  CHECK(msg.find("frame_000001.png") != std::string::npos);
  CHECK(msg.find("3x2") != std::string::npos);
}

TEST_CASE("unreadable frames and missing directories are I/O errors") {
  TempDir dir("garbage");
  std::ofstream(dir.path / frame_name(0)) << "definitely not a png";
  const std::string msg = error_of([&] { read_frames(dir.str()); });
  CHECK(msg.find("unreadable") != std::string::npos);
  CHECK(msg.find("frame_000000.png") != std::string::npos);
  CHECK_THROWS_AS(read_frames(dir.str("nope")), IoError);
  TempDir empty("empty");
  CHECK_THROWS_AS(read_frames(empty.str()), IoError);
}

TEST_CASE("float sidecars are bit-exact") {
  TempDir dir("f32");
  VideoTensor v = stvsr::testing::random_video(9, {2, 3, 4}, 3, -2.0, 2.0);
  // Make every sample exactly representable as float so equality is exact.
  for (double& s : v.samples()) s = static_cast<float>(s);
  write_frames(v, dir.str(), true);
  CHECK(fs::exists(dir.path / frame_name(1, ".f32")));
  CHECK(read_f32_frames(dir.str()) == v);

  std::ifstream in(dir.path / frame_name(0, ".f32"), std::ios::binary);
  char header[20];
  in.read(header, sizeof header);
  CHECK(std::memcmp(header, kF32Magic.data(), 8) == 0);
  CHECK(static_cast<unsigned char>(header[8]) == 3);
  CHECK(static_cast<unsigned char>(header[12]) == 4);
  CHECK(static_cast<unsigned char>(header[16]) == 3);
  CHECK(fs::file_size(dir.path / frame_name(0, ".f32")) == 20 + 4 * 3 * 4 * 3);

  std::ofstream(dir.path / "bad.f32", std::ios::binary) << "VTF31xxxxxxxxxxxx";
  CHECK_THROWS_AS(read_f32_frame(dir.str("bad.f32")), IoError);
}

TEST_CASE("config defaults") {
  const ExperimentConfig cfg = parse("");
  CHECK(cfg.kernel.source == KernelSource::box_gaussian);
  CHECK(cfg.scale == ScaleFactor(2, 2, 2));
  CHECK(cfg.hqs.iterations == 3);
  CHECK(cfg.hqs.denoiser.kind == DenoiserKind::tv);
  CHECK(cfg.color == ColorSpace::rgb);
  CHECK_FALSE(cfg.dump_trace);
}

TEST_CASE("config parses every section") {
  const ExperimentConfig cfg = parse(
      "input_dir = frames\n"
      "output_dir = /abs/out\n"
      "; comment\n"
      "[degradation]\n"
      "kernel = file\n"
      "kernel_file = k/blur.k3\n"
      "scale = 1 2 3\n"
      "noise_sigma = 0.01\n"
      "seed = 42\n"
      "[hqs]\n"
      "iterations = 5\n"
      "sigma = 0.02\n"
      "lambda = 0.1\n"
      "mu_first = 0.1\n"
      "mu_last = 2\n"
      "init = nearest\n"
      "[denoiser]\n"
      "kind = gaussian\n"
      "multiplier = 2.5\n"
      "[metrics]\n"
      "color_space = luma\n"
      "peak = 255\n"
      "[output]\n"
      "dump_trace = true\n",
      "/base");
  CHECK(cfg.input_dir == "/base/frames");
  CHECK(cfg.output_dir == "/abs/out");
  CHECK(cfg.kernel.source == KernelSource::file);
  CHECK(cfg.kernel.file == "/base/k/blur.k3");
  CHECK(cfg.scale == ScaleFactor(1, 2, 3));
  CHECK(cfg.noise_sigma == 0.01);
  CHECK(cfg.seed == 42);
  CHECK(cfg.hqs.iterations == 5);
  CHECK(cfg.hqs.init == InitMode::nearest);
  CHECK(cfg.hqs.denoiser.kind == DenoiserKind::gaussian);
  CHECK(cfg.hqs.denoiser.multiplier == 2.5);
  CHECK(cfg.color == ColorSpace::luma);
  CHECK(cfg.peak == 255.0);
  CHECK(cfg.dump_trace);
}

TEST_CASE("config rejects unknown or malformed entries") {
  CHECK_THROWS_AS(parse("bogus = 1\n"), ContractError);
  CHECK_THROWS_AS(parse("[nope]\nx = 1\n"), ContractError);
  CHECK_THROWS_AS(parse("[hqs]\nfoo = 1\n"), ContractError);
  CHECK_THROWS_AS(parse("[hqs]\niterations = three\n"), ContractError);
  CHECK_THROWS_AS(parse("[hqs]\niterations = 0\n"), ContractError);
  CHECK_THROWS_AS(parse("[degradation]\nscale = 2 2\n"), ContractError);
  CHECK_THROWS_AS(parse("[degradation]\nscale = 0 1 1\n"), ContractError);
  CHECK_THROWS_AS(parse("[degradation]\nkernel = file\n"), ContractError);
  CHECK_THROWS_AS(parse("[degradation]\nspatial_extent = 4\n"), ContractError);
  CHECK_THROWS_AS(parse("[degradation]\nnoise_sigma = -1\n"), ContractError);
  CHECK_THROWS_AS(parse("[output]\ndump_trace = maybe\n"), ContractError);
  CHECK_THROWS_AS(parse("[metrics]\ncolor_space = hsv\n"), ContractError);
  CHECK_THROWS_AS(parse("[hqs\n"), ContractError);
  CHECK_THROWS_AS(load_config("/nonexistent/stvsr.ini"), IoError);
}

TEST_CASE("config file paths resolve against the file's directory") {
  TempDir dir("cfg");
  std::ofstream(dir.path / "exp.ini") << "input_dir = in\n[degradation]\nkernel = delta\n";
  const ExperimentConfig cfg = load_config(dir.str("exp.ini"));
  CHECK(cfg.input_dir == dir.str("in"));
  CHECK(resolve_kernel(cfg).kernel == Kernel3D::delta());
}

TEST_CASE("bicubic kernels carry their alignment shift") {
  const ExperimentConfig cfg = parse("[degradation]\nkernel = bicubic\nscale = 1 4 4\n");
  const ResolvedKernel rk = resolve_kernel(cfg);
  CHECK(rk.kernel.extent() == Shape3{1, 16, 16});
  CHECK(rk.pre_shift.h == -2);
  CHECK(rk.pre_shift.w == -2);
  CHECK_THROWS_AS(parse("[degradation]\nkernel = bicubic\nscale = 1 2 4\n"), ContractError);
}
