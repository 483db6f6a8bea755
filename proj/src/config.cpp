#include "stvsr/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "stvsr/error.hpp"

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace stvsr {

namespace {

KernelSource parse_kernel_source(const std::string& name) {
  if (name == "delta") return KernelSource::delta;
  if (name == "box_gaussian") return KernelSource::box_gaussian;
  if (name == "bicubic") return KernelSource::bicubic;
  if (name == "file") return KernelSource::file;
  throw ContractError("unknown kernel source '" + name +
                      "' (expected delta, box_gaussian, bicubic or file)");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ContractError(key + ": expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out)) {
    throw ContractError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (!v.empty() && v.front() != '-') out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ContractError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

ScaleFactor parse_scale(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  std::string a, b, c, extra;
  if (!(in >> a >> b >> c) || (in >> extra)) {
    throw ContractError(key + ": expected three integers 's_t s_h s_w', got '" + v + "'");
  }
  return ScaleFactor(parse_uint(key, a), parse_uint(key, b), parse_uint(key, c));
}

std::string resolve_path(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(noise_sigma >= 0.0)) throw ContractError("noise_sigma must be non-negative");
  if (!(peak > 0.0)) throw ContractError("metrics peak must be positive");
  if (kernel.source == KernelSource::file && kernel.file.empty()) {
    throw ContractError("kernel = file needs kernel_file");
  }
  if (kernel.source == KernelSource::box_gaussian) {
    if (kernel.temporal_box == 0) throw ContractError("temporal_box must be at least 1");
    if (!(kernel.spatial_sigma > 0.0)) throw ContractError("spatial_sigma must be positive");
    if (kernel.spatial_extent % 2 == 0) throw ContractError("spatial_extent must be odd");
  }
  if (kernel.source == KernelSource::bicubic && scale.h() != scale.w()) {
    throw ContractError("bicubic kernel needs equal spatial scale factors");
  }
  hqs.validate();
}

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ContractError(std::string("config: ") + e.what());
  }

  ExperimentConfig cfg;
  const std::set<std::string> sections = {"degradation", "hqs", "denoiser", "metrics", "output"};
  for (const auto& [name, node] : tree) {
    const std::string value = node.get_value<std::string>();
    if (node.empty() && !sections.contains(name)) {
      // Top-level key.
      if (name == "input_dir") cfg.input_dir = resolve_path(base_dir, value);
      else if (name == "output_dir") cfg.output_dir = resolve_path(base_dir, value);
      else throw ContractError("config: unknown key '" + name + "'");
      continue;
    }
    if (!sections.contains(name)) throw ContractError("config: unknown section [" + name + "]");
    for (const auto& [key, child] : node) {
      const std::string v = child.get_value<std::string>();
      const std::string full = name + "." + key;
      if (name == "degradation") {
        if (key == "kernel") cfg.kernel.source = parse_kernel_source(v);
        else if (key == "kernel_file") cfg.kernel.file = resolve_path(base_dir, v);
        else if (key == "temporal_box") cfg.kernel.temporal_box = parse_uint(full, v);
        else if (key == "spatial_sigma") cfg.kernel.spatial_sigma = parse_double(full, v);
        else if (key == "spatial_extent") cfg.kernel.spatial_extent = parse_uint(full, v);
        else if (key == "scale") cfg.scale = parse_scale(full, v);
        else if (key == "noise_sigma") cfg.noise_sigma = parse_double(full, v);
        else if (key == "seed") cfg.seed = parse_uint(full, v);
        else throw ContractError("config: unknown key '" + full + "'");
      } else if (name == "hqs") {
        if (key == "iterations") cfg.hqs.iterations = parse_uint(full, v);
        else if (key == "sigma") cfg.hqs.sigma = parse_double(full, v);
        else if (key == "lambda") cfg.hqs.lambda = parse_double(full, v);
        else if (key == "mu_first") cfg.hqs.mu_first = parse_double(full, v);
        else if (key == "mu_last") cfg.hqs.mu_last = parse_double(full, v);
        else if (key == "init") cfg.hqs.init = parse_init_mode(v);
        else throw ContractError("config: unknown key '" + full + "'");
      } else if (name == "denoiser") {
        if (key == "kind") cfg.hqs.denoiser.kind = parse_denoiser_kind(v);
        else if (key == "multiplier") cfg.hqs.denoiser.multiplier = parse_double(full, v);
        else if (key == "iterations") cfg.hqs.denoiser.iterations = parse_uint(full, v);
        else if (key == "step") cfg.hqs.denoiser.step = parse_double(full, v);
        else throw ContractError("config: unknown key '" + full + "'");
      } else if (name == "metrics") {
        if (key == "color_space") cfg.color = parse_color_space(v);
        else if (key == "peak") cfg.peak = parse_double(full, v);
        else throw ContractError("config: unknown key '" + full + "'");
      } else if (name == "output") {
        if (key == "dump_trace") cfg.dump_trace = parse_bool(full, v);
        else throw ContractError("config: unknown key '" + full + "'");
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  const std::string base = fs::path(path).parent_path().string();
  try {
    return parse_config(in, base.empty() ? "." : base);
  } catch (const ContractError& e) {
    throw ContractError(path + ": " + e.what());
  }
}

ResolvedKernel resolve_kernel(const ExperimentConfig& cfg) {
  switch (cfg.kernel.source) {
    case KernelSource::delta:
      return {Kernel3D::delta(), {}};
    case KernelSource::box_gaussian:
      return {Kernel3D::compose(exposure_box_kernel(cfg.kernel.temporal_box),
                                gaussian_spatial_kernel(cfg.kernel.spatial_sigma,
                                                        cfg.kernel.spatial_extent,
                                                        cfg.kernel.spatial_extent)),
              {}};
    case KernelSource::bicubic: {
      BicubicKernel b = bicubic_kernel(cfg.scale.h());
      return {std::move(b.kernel), b.pre_shift};
    }
    case KernelSource::file:
      return {read_kernel_file(cfg.kernel.file), {}};
  }
  throw ContractError("unknown kernel source");
}

DegradationSpec degradation_spec(const ExperimentConfig& cfg) {
  return {resolve_kernel(cfg).kernel, cfg.scale, cfg.noise_sigma, cfg.seed};
}

}  // namespace stvsr
