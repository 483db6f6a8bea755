// Runs the stvsr executable end to end in scratch directories.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "stvsr/experiments.hpp"
#include "stvsr/frame_io.hpp"

using namespace stvsr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("stvsr_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& sub) const { return (path / sub).string(); }
};

struct Run {
  int code;
  std::string output;
};

// Runs the CLI with `args`, capturing stdout and stderr.
Run cli(const std::string& args, const TempDir& scratch) {
  const std::string log = scratch.str("cli.log");
  const std::string cmd = std::string("'") + STVSR_CLI_PATH + "' " + args + " > '" + log + "' 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("degrade with a delta kernel at unit scale reproduces the input") {
  TempDir d;
  const VideoTensor v = synthetic_video(1, {3, 12, 12}, 3);
  write_frames(v, d.str("hr"));
  write_file(d.str("exp.ini"),
             "input_dir = hr\noutput_dir = lr\n[degradation]\nkernel = delta\nscale = 1 1 1\n");
  const Run r = cli("degrade --config " + d.str("exp.ini"), d);
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(read_frames(d.str("lr")) == read_frames(d.str("hr")));
  CHECK(fs::exists(d.path / "lr" / "kernel.k3"));
}

TEST_CASE("evaluate of a directory against itself") {
  TempDir d;
  write_frames(synthetic_video(2, {2, 16, 16}, 3), d.str("a"));
  const Run r = cli("evaluate --reference " + d.str("a") + " --test " + d.str("a") + " --report " +
                        d.str("report.txt"),
                    d);
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("mean_psnr_db = inf") != std::string::npos);
  CHECK(r.output.find("mean_ssim = 1.000000") != std::string::npos);
  std::ifstream in(d.str("report.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("[metrics]") != std::string::npos);

  const Run luma = cli("evaluate -r " + d.str("a") + " -t " + d.str("a") + " --color-space luma", d);
  CHECK(luma.code == 0);
  CHECK(fs::exists(d.path / "a" / "report.txt"));
}

TEST_CASE("oracle-check passes on a short run") {
  TempDir d;
  const Run r = cli("oracle-check --seed 7 --trials 20", d);
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("instances = 20") != std::string::npos);
  CHECK(r.output.find("result = pass") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  TempDir d;
  CHECK(cli("", d).code == 1);
  CHECK(cli("frobnicate", d).code == 1);
  CHECK(cli("degrade", d).code == 1);
  CHECK(cli("oracle-check --trials 0", d).code == 1);
  CHECK(cli("evaluate -r a -t b --color-space xyz", d).code == 1);
  CHECK(cli("bench --bogus", d).code == 1);
  CHECK(cli("--help", d).code == 0);
}

TEST_CASE("missing inputs exit with 2") {
  TempDir d;
  write_file(d.str("exp.ini"), "input_dir = missing\noutput_dir = out\n");
  const Run r = cli("degrade --config " + d.str("exp.ini"), d);
  CHECK(r.code == 2);
  CHECK(r.output.find("missing") != std::string::npos);
  CHECK_FALSE(fs::exists(d.path / "out"));
  CHECK(cli("degrade --config " + d.str("nothere.ini"), d).code == 2);
  CHECK(cli("evaluate -r " + d.str("x") + " -t " + d.str("y"), d).code == 2);
}

TEST_CASE("an invalid config exits with 1 before writing anything") {
  TempDir d;
  write_frames(synthetic_video(3, {2, 8, 8}, 1), d.str("hr"));
  write_file(d.str("bad.ini"), "input_dir = hr\noutput_dir = out\n[hqs]\niterations = 0\n");
  const Run r = cli("degrade --config " + d.str("bad.ini"), d);
  CHECK(r.code == 1);
  CHECK(r.output.find("iterations") != std::string::npos);
  CHECK_FALSE(fs::exists(d.path / "out"));

  write_file(d.str("typo.ini"), "input_dir = hr\noutput_dir = out\n[denoiser]\nstrength = 2\n");
  CHECK(cli("restore --config " + d.str("typo.ini") + " --kernel k.k3", d).code == 1);
  CHECK_FALSE(fs::exists(d.path / "out"));
}

TEST_CASE("degrade then restore with a dumped trace") {
  TempDir d;
  write_frames(synthetic_video(4, {4, 16, 16}, 3), d.str("hr"));
  write_file(d.str("exp.ini"), "input_dir = hr\noutput_dir = lr\n[degradation]\nnoise_sigma = 0.005\nseed = 3\n");
  REQUIRE(cli("degrade --config " + d.str("exp.ini"), d).code == 0);
  CHECK(read_frames(d.str("lr")).shape() == Shape3{2, 8, 8});

  const Run r = cli("restore --config " + d.str("exp.ini") + " --kernel " + d.str("lr/kernel.k3") +
                        " --input " + d.str("lr") + " --output " + d.str("sr") + " --dump-trace",
                    d);
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("iteration 3: alpha") != std::string::npos);
  const VideoTensor sr = read_frames(d.str("sr"));
  CHECK(sr.shape() == Shape3{4, 16, 16});
  for (const char* it : {"iter_01", "iter_02", "iter_03"}) {
    CHECK(fs::exists(d.path / "sr" / "trace" / it / "z" / "frame_000003.png"));
    CHECK(fs::exists(d.path / "sr" / "trace" / it / "x" / "frame_000003.f32"));
  }
  // The last X iterate is the restored output.
  CHECK(read_f32_frames(d.str("sr/trace/iter_03/x")) == read_f32_frames(d.str("sr")));

  CHECK(cli("restore --config " + d.str("exp.ini") + " --kernel " + d.str("none.k3") + " -i " +
                d.str("lr") + " -o " + d.str("sr2"),
            d)
            .code == 2);
}
