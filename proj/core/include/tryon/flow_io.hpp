#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tryon/raster.hpp"

namespace tryon {

// .dwfl flow binary: magic "DWFL", version u16, width u32, height u32
// (little-endian), then height*width (src_x, src_y) float32 pairs, then a
// validity plane of height*width bytes (0/1).
constexpr uint16_t kFlowFormatVersion = 1;

std::vector<uint8_t> encode_flow(const FlowField& flow);
FlowField decode_flow(const std::vector<uint8_t>& bytes);

void write_flow(const std::string& path, const FlowField& flow);
FlowField read_flow(const std::string& path);

}  // namespace tryon
