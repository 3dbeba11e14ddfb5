#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tryon/raster.hpp"

namespace tryon {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// IUV convention: 8-bit RGB, R = part index (0..24), G = round(u*255),
// B = round(v*255). Background pixels encode as (0,0,0).
std::vector<uint8_t> encode_iuv_png(const IuvMap& map);
IuvMap decode_iuv_png(const std::vector<uint8_t>& bytes);

// Parse convention: 8-bit grayscale, pixel value = label id 0..7.
std::vector<uint8_t> encode_parse_png(const ParseMap& map);
ParseMap decode_parse_png(const std::vector<uint8_t>& bytes);

// Plain images: 8-bit gray or RGB, intensities quantized with round(v*255).
std::vector<uint8_t> encode_image_png(const ImageBuffer& img);
ImageBuffer decode_image_png(const std::vector<uint8_t>& bytes);

// Masks: 8-bit grayscale, 0 or 255.
std::vector<uint8_t> encode_mask_png(const BinaryMask& mask);
BinaryMask decode_mask_png(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace tryon
