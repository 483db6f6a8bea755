#include "stvsr/frame_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include "stvsr/error.hpp"

namespace fs = std::filesystem;

namespace stvsr {

std::string frame_name(std::size_t index, const char* extension) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu", index);
  return std::string(buf) + extension;
}

namespace {

struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<std::uint8_t> pixels;
};

Image read_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("unreadable frame " + path.string() + ": " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image out;
  out.height = image.height;
  out.width = image.width;
  out.channels = color ? 3 : 1;
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("unreadable frame " + path.string() + ": " + message);
  }
  return out;
}

void write_png(const fs::path& path, const Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
    throw IoError("cannot write frame " + path.string() + ": " + image.message);
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

// Sorted indices of files named frame_NNNNNN<ext> in dir; verifies they run
// 0, 1, 2, ... without gaps.
std::vector<std::size_t> frame_indices(const std::string& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw IoError("frame directory " + dir + " does not exist");
  const std::regex pattern("frame_([0-9]{6})" + std::regex_replace(ext, std::regex("\\."), "\\."));
  std::set<std::size_t> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) found.insert(std::stoul(m[1].str()));
  }
  if (found.empty()) throw IoError("no frame_%06d" + ext + " files in " + dir);
  std::vector<std::size_t> indices(found.begin(), found.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] != i) {
      throw IoError("frame sequence in " + dir + " is missing " +
                    (fs::path(dir) / frame_name(i, ext.c_str())).string() + " (index " +
                    std::to_string(i) + ")");
    }
  }
  return indices;
}

}  // namespace

VideoTensor read_frames(const std::string& dir) {
  const auto indices = frame_indices(dir, ".png");
  std::vector<Image> images;
  images.reserve(indices.size());
  for (std::size_t i : indices) {
    const fs::path path = fs::path(dir) / frame_name(i);
    images.push_back(read_png(path));
    const Image& first = images.front();
    const Image& cur = images.back();
    if (cur.height != first.height || cur.width != first.width || cur.channels != first.channels) {
      throw IoError("frame " + path.string() + " is " + std::to_string(cur.height) + "x" +
                    std::to_string(cur.width) + "x" + std::to_string(cur.channels) +
                    ", expected " + std::to_string(first.height) + "x" +
                    std::to_string(first.width) + "x" + std::to_string(first.channels));
    }
  }
  const Image& first = images.front();
  VideoTensor v(Shape3{images.size(), first.height, first.width}, first.channels);
  std::size_t k = 0;
  for (const Image& img : images)
    for (std::uint8_t p : img.pixels) v.samples()[k++] = static_cast<double>(p) / 255.0;
  return v;
}

std::uint8_t quantize(double x) {
  if (!(x > 0.0)) return 0;  // also maps NaN to 0
  if (x >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::round(x * 255.0));
}

void write_f32_frame(const VideoTensor& v, std::size_t frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create sidecar " + path);
  out.write(kF32Magic.data(), kF32Magic.size());
  put_u32(out, static_cast<std::uint32_t>(v.height()));
  put_u32(out, static_cast<std::uint32_t>(v.width()));
  put_u32(out, static_cast<std::uint32_t>(v.channels()));
  const std::size_t per_frame = v.height() * v.width() * v.channels();
  for (std::size_t i = frame * per_frame; i < (frame + 1) * per_frame; ++i) {
    const float f = static_cast<float>(v.samples()[i]);
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    put_u32(out, bits);
  }
  if (!out) throw IoError("failed writing sidecar " + path);
}

VideoTensor read_f32_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open sidecar " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kF32Magic) throw IoError("sidecar " + path + " has no VTF32 magic");
  const std::uint32_t h = get_u32(in), w = get_u32(in), c = get_u32(in);
  if (!in) throw IoError("sidecar " + path + " has a truncated header");
  if (h == 0 || w == 0 || (c != 1 && c != 3)) {
    throw IoError("sidecar " + path + " declares invalid dimensions");
  }
  VideoTensor v(Shape3{1, h, w}, c);
  for (double& s : v.samples()) {
    const std::uint32_t bits = get_u32(in);
    float f;
    std::memcpy(&f, &bits, sizeof f);
    s = f;
  }
  if (!in) throw IoError("sidecar " + path + " is truncated");
  return v;
}

VideoTensor read_f32_frames(const std::string& dir) {
  const auto indices = frame_indices(dir, ".f32");
  std::vector<VideoTensor> frames;
  for (std::size_t i : indices) {
    const std::string path = (fs::path(dir) / frame_name(i, ".f32")).string();
    frames.push_back(read_f32_frame(path));
    if (!(frames.back().height() == frames.front().height() &&
          frames.back().width() == frames.front().width() &&
          frames.back().channels() == frames.front().channels())) {
      throw IoError("sidecar " + path + " dimensions differ from the first frame");
    }
  }
  const VideoTensor& first = frames.front();
  VideoTensor v(Shape3{frames.size(), first.height(), first.width()}, first.channels());
  std::size_t k = 0;
  for (const auto& f : frames)
    for (double s : f.samples()) v.samples()[k++] = s;
  return v;
}

void write_frames(const VideoTensor& v, const std::string& dir, bool dump_f32) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const std::size_t per_frame = v.height() * v.width() * v.channels();
  for (std::size_t t = 0; t < v.frames(); ++t) {
    Image img{v.height(), v.width(), v.channels(), std::vector<std::uint8_t>(per_frame)};
    for (std::size_t i = 0; i < per_frame; ++i) img.pixels[i] = quantize(v.samples()[t * per_frame + i]);
    write_png(fs::path(dir) / frame_name(t), img);
    if (dump_f32) write_f32_frame(v, t, (fs::path(dir) / frame_name(t, ".f32")).string());
  }
}

}  // namespace stvsr
