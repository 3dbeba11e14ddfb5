#include "tryon/flow_io.hpp"

#include <cstring>

#include "tryon/png_io.hpp"

namespace tryon {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}
void put_f32(std::vector<uint8_t>& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

struct Cursor {
  const std::vector<uint8_t>& bytes;
  size_t pos = 0;
  uint8_t u8() {
    if (pos >= bytes.size()) throw FormatError("dwfl: truncated");
    return bytes[pos++];
  }
  uint16_t u16() { return static_cast<uint16_t>(u8() | (u8() << 8)); }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
    return v;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

}  // namespace

std::vector<uint8_t> encode_flow(const FlowField& flow) {
  std::vector<uint8_t> out;
  out.reserve(14 + static_cast<size_t>(flow.width()) * flow.height() * 9);
  out.insert(out.end(), {'D', 'W', 'F', 'L'});
  put_u16(out, kFlowFormatVersion);
  put_u32(out, static_cast<uint32_t>(flow.width()));
  put_u32(out, static_cast<uint32_t>(flow.height()));
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      put_f32(out, flow.src_x(x, y));
      put_f32(out, flow.src_y(x, y));
    }
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x)
      out.push_back(flow.valid(x, y) ? 1 : 0);
  return out;
}

FlowField decode_flow(const std::vector<uint8_t>& bytes) {
  Cursor c{bytes};
  if (bytes.size() < 14 || bytes[0] != 'D' || bytes[1] != 'W' || bytes[2] != 'F' || bytes[3] != 'L')
    throw FormatError("dwfl: bad magic");
  c.pos = 4;
  const uint16_t version = c.u16();
  if (version != kFlowFormatVersion)
    throw FormatError("dwfl: unsupported version " + std::to_string(version));
  const uint32_t w = c.u32(), h = c.u32();
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
    throw FormatError("dwfl: bad dimensions");
  const size_t n = static_cast<size_t>(w) * h;
  if (bytes.size() != 14 + n * 9) throw FormatError("dwfl: size mismatch");
  FlowField flow(static_cast<int>(w), static_cast<int>(h));
  std::vector<float> sx(n), sy(n);
  for (size_t i = 0; i < n; ++i) {
    sx[i] = c.f32();
    sy[i] = c.f32();
  }
  for (size_t i = 0; i < n; ++i) {
    const bool valid = c.u8() != 0;
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    if (valid) flow.set(x, y, sx[i], sy[i]);
  }
  return flow;
}

void write_flow(const std::string& path, const FlowField& flow) {
  write_file(path, encode_flow(flow));
}

FlowField read_flow(const std::string& path) { return decode_flow(read_file(path)); }

}  // namespace tryon
