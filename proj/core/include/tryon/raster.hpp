#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tryon {

// Row-major rasters, origin top-left, x rightward, y downward.

class ImageBuffer {
public:
  ImageBuffer(int width, int height, int channels, float fill = 0.0f)
      : width_(width), height_(height), channels_(channels),
        data_(static_cast<size_t>(check_dims(width, height, channels)) * channels, fill) {
    if (fill < 0.0f || fill > 1.0f)
      throw std::invalid_argument("ImageBuffer: fill outside [0,1]");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  float at(int x, int y, int c = 0) const { return data_[idx(x, y, c)]; }
  void set(int x, int y, int c, float v) {
    if (v < 0.0f || v > 1.0f) throw std::invalid_argument("ImageBuffer: value outside [0,1]");
    data_[idx(x, y, c)] = v;
  }
  // Unchecked store for inner loops; caller guarantees v in [0,1].
  void set_raw(int x, int y, int c, float v) { data_[idx(x, y, c)] = v; }

  const std::vector<float>& data() const { return data_; }

  bool same_dims(const ImageBuffer& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }
  bool operator==(const ImageBuffer& o) const {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_ && data_ == o.data_;
  }

private:
  static size_t check_dims(int w, int h, int c) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("ImageBuffer: zero-sized raster");
    if (c != 1 && c != 3) throw std::invalid_argument("ImageBuffer: channels must be 1 or 3");
    return static_cast<size_t>(w) * h;
  }
  size_t idx(int x, int y, int c) const {
    return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
  }
  int width_, height_, channels_;
  std::vector<float> data_;
};

// Per-pixel DensePose record: part chart index in {0..24} (0 = background)
// and chart coordinates (u, v) in [0,1]. Background carries u = v = 0.
class IuvMap {
public:
  static constexpr int kNumParts = 24;

  IuvMap(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("IuvMap: zero-sized raster");
    const size_t n = static_cast<size_t>(width) * height;
    part_.assign(n, 0);
    u_.assign(n, 0.0f);
    v_.assign(n, 0.0f);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  uint8_t part(int x, int y) const { return part_[idx(x, y)]; }
  float u(int x, int y) const { return u_[idx(x, y)]; }
  float v(int x, int y) const { return v_[idx(x, y)]; }

  void set(int x, int y, int part, float u, float v) {
    if (part < 0 || part > kNumParts) throw std::invalid_argument("IuvMap: part outside 0..24");
    if (u < 0.0f || u > 1.0f || v < 0.0f || v > 1.0f)
      throw std::invalid_argument("IuvMap: uv outside [0,1]");
    if (part == 0 && (u != 0.0f || v != 0.0f))
      throw std::invalid_argument("IuvMap: background pixel must carry u = v = 0");
    const size_t i = idx(x, y);
    part_[i] = static_cast<uint8_t>(part);
    u_[i] = u;
    v_[i] = v;
  }

  bool same_dims(const IuvMap& o) const { return width_ == o.width_ && height_ == o.height_; }
  bool operator==(const IuvMap& o) const {
    return width_ == o.width_ && height_ == o.height_ && part_ == o.part_ && u_ == o.u_ && v_ == o.v_;
  }

private:
  size_t idx(int x, int y) const { return static_cast<size_t>(y) * width_ + x; }
  int width_, height_;
  std::vector<uint8_t> part_;
  std::vector<float> u_, v_;
};

enum class ParseLabel : uint8_t {
  kBackground = 0,
  kTop = 1,
  kHair = 2,
  kPants = 3,
  kSkirt = 4,
  kFace = 5,
  kArms = 6,
  kLegs = 7,
};
constexpr int kNumParseLabels = 8;

class ParseMap {
public:
  ParseMap(int width, int height, ParseLabel fill = ParseLabel::kBackground)
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("ParseMap: zero-sized raster");
    labels_.assign(static_cast<size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  ParseLabel at(int x, int y) const { return labels_[idx(x, y)]; }
  void set(int x, int y, ParseLabel l) { labels_[idx(x, y)] = l; }

  bool same_dims(const ParseMap& o) const { return width_ == o.width_ && height_ == o.height_; }
  bool operator==(const ParseMap& o) const {
    return width_ == o.width_ && height_ == o.height_ && labels_ == o.labels_;
  }

private:
  size_t idx(int x, int y) const { return static_cast<size_t>(y) * width_ + x; }
  int width_, height_;
  std::vector<ParseLabel> labels_;
};

class BinaryMask {
public:
  BinaryMask(int width, int height, bool fill = false) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("BinaryMask: zero-sized raster");
    bits_.assign(static_cast<size_t>(width) * height, fill ? 1 : 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int x, int y) const { return bits_[idx(x, y)] != 0; }
  void set(int x, int y, bool v) { bits_[idx(x, y)] = v ? 1 : 0; }

  size_t count() const {
    size_t n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
  }

  bool same_dims(const BinaryMask& o) const { return width_ == o.width_ && height_ == o.height_; }
  bool operator==(const BinaryMask& o) const {
    return width_ == o.width_ && height_ == o.height_ && bits_ == o.bits_;
  }

private:
  size_t idx(int x, int y) const { return static_cast<size_t>(y) * width_ + x; }
  int width_, height_;
  std::vector<uint8_t> bits_;
};

// Backward sampling field: each target pixel names a continuous source
// coordinate in pixel units, or is invalid (sentinel -1).
class FlowField {
public:
  static constexpr float kInvalid = -1.0f;

  FlowField(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("FlowField: zero-sized raster");
    const size_t n = static_cast<size_t>(width) * height;
    src_x_.assign(n, kInvalid);
    src_y_.assign(n, kInvalid);
    valid_.assign(n, 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool valid(int x, int y) const { return valid_[idx(x, y)] != 0; }
  float src_x(int x, int y) const { return src_x_[idx(x, y)]; }
  float src_y(int x, int y) const { return src_y_[idx(x, y)]; }

  void set(int x, int y, float sx, float sy) {
    const size_t i = idx(x, y);
    src_x_[i] = sx;
    src_y_[i] = sy;
    valid_[i] = 1;
  }
  void invalidate(int x, int y) {
    const size_t i = idx(x, y);
    src_x_[i] = kInvalid;
    src_y_[i] = kInvalid;
    valid_[i] = 0;
  }

  size_t valid_count() const {
    size_t n = 0;
    for (uint8_t b : valid_) n += b;
    return n;
  }

  bool same_dims(const FlowField& o) const { return width_ == o.width_ && height_ == o.height_; }
  bool operator==(const FlowField& o) const {
    return width_ == o.width_ && height_ == o.height_ && src_x_ == o.src_x_ &&
           src_y_ == o.src_y_ && valid_ == o.valid_;
  }

private:
  size_t idx(int x, int y) const { return static_cast<size_t>(y) * width_ + x; }
  int width_, height_;
  std::vector<float> src_x_, src_y_;
  std::vector<uint8_t> valid_;
};

}  // namespace tryon
