#pragma once

// Frame-sequence I/O: directories of frame_%06d.png plus optional raw float
// sidecars frame_%06d.f32.
//
// Sidecar layout (little-endian): 8-byte magic "VTF32\0\0\0", uint32 height,
// uint32 width, uint32 channels, then height*width*channels float32 samples
// in (h, w, c) order.

#include <array>
#include <cstdint>
#include <string>

#include "stvsr/tensor.hpp"

namespace stvsr {

inline constexpr std::array<char, 8> kF32Magic = {'V', 'T', 'F', '3', '2', '\0', '\0', '\0'};

std::string frame_name(std::size_t index, const char* extension = ".png");

/// Loads frame_000000.png, frame_000001.png, ... into a [0, 1] tensor. All
/// frames must share dimensions and channel layout (grayscale or RGB).
VideoTensor read_frames(const std::string& dir);

/// 8-bit quantization used for PNG output: round(clamp(x, 0, 1) * 255),
/// halves rounded away from zero.
std::uint8_t quantize(double x);

/// Writes one PNG per frame (creating `dir`), and when `dump_f32` is set a
/// float sidecar per frame holding the pre-quantization samples.
void write_frames(const VideoTensor& v, const std::string& dir, bool dump_f32 = false);

void write_f32_frame(const VideoTensor& v, std::size_t frame, const std::string& path);
/// Reads one sidecar as a single-frame tensor.
VideoTensor read_f32_frame(const std::string& path);
/// Reads frame_%06d.f32 sidecars of a directory as a tensor.
VideoTensor read_f32_frames(const std::string& dir);

}  // namespace stvsr
