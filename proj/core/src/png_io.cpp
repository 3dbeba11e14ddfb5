#include "tryon/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>

namespace tryon {

namespace {

struct PngBytes {
  std::vector<uint8_t>* out;
};

void write_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* b = static_cast<PngBytes*>(png_get_io_ptr(png));
  b->out->insert(b->out->end(), data, data + len);
}
void flush_cb(png_structp) {}

struct ReadCursor {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void read_cb(png_structp png, png_bytep out, png_size_t len) {
  auto* c = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (c->pos + len > c->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, c->data + c->pos, len);
  c->pos += len;
}

// channels: 1 (gray) or 3 (rgb), 8-bit.
std::vector<uint8_t> encode_png(const std::vector<uint8_t>& pixels, int w, int h, int channels) {
  std::vector<uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("png_io: write struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw FormatError("png_io: info struct allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("png_io: libpng write error");
  }
  PngBytes sink{&out};
  png_set_write_fn(png, &sink, write_cb, flush_cb);
  png_set_IHDR(png, info, w, h, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(pixels.data() + static_cast<size_t>(y) * w * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

struct DecodedPng {
  int width = 0, height = 0, channels = 0;
  std::vector<uint8_t> pixels;
};

DecodedPng decode_png(const std::vector<uint8_t>& bytes, int want_channels) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw FormatError("png_io: not a PNG stream");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("png_io: read struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw FormatError("png_io: info struct allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("png_io: malformed PNG");
  }
  ReadCursor cur{bytes.data(), bytes.size(), 0};
  png_set_read_fn(png, &cur, read_cb);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_packing(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (want_channels == 3)
    png_set_gray_to_rgb(png);
  else
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  DecodedPng d;
  d.width = static_cast<int>(png_get_image_width(png, info));
  d.height = static_cast<int>(png_get_image_height(png, info));
  d.channels = want_channels;
  if (d.width <= 0 || d.height <= 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("png_io: zero-sized PNG");
  }
  d.pixels.resize(static_cast<size_t>(d.width) * d.height * want_channels);
  std::vector<png_bytep> rows(d.height);
  for (int y = 0; y < d.height; ++y)
    rows[y] = d.pixels.data() + static_cast<size_t>(y) * d.width * want_channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return d;
}

uint8_t quantize(float v) { return static_cast<uint8_t>(std::lround(v * 255.0f)); }

}  // namespace

std::vector<uint8_t> encode_iuv_png(const IuvMap& map) {
  const int w = map.width(), h = map.height();
  std::vector<uint8_t> px(static_cast<size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const size_t i = (static_cast<size_t>(y) * w + x) * 3;
      px[i] = map.part(x, y);
      px[i + 1] = quantize(map.u(x, y));
      px[i + 2] = quantize(map.v(x, y));
    }
  return encode_png(px, w, h, 3);
}

IuvMap decode_iuv_png(const std::vector<uint8_t>& bytes) {
  DecodedPng d = decode_png(bytes, 3);
  IuvMap map(d.width, d.height);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      const size_t i = (static_cast<size_t>(y) * d.width + x) * 3;
      const int part = d.pixels[i];
      if (part > IuvMap::kNumParts)
        throw FormatError("decode_iuv_png: part index " + std::to_string(part) + " > 24");
      if (part == 0)
        map.set(x, y, 0, 0.0f, 0.0f);
      else
        map.set(x, y, part, d.pixels[i + 1] / 255.0f, d.pixels[i + 2] / 255.0f);
    }
  return map;
}

std::vector<uint8_t> encode_parse_png(const ParseMap& map) {
  const int w = map.width(), h = map.height();
  std::vector<uint8_t> px(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      px[static_cast<size_t>(y) * w + x] = static_cast<uint8_t>(map.at(x, y));
  return encode_png(px, w, h, 1);
}

ParseMap decode_parse_png(const std::vector<uint8_t>& bytes) {
  DecodedPng d = decode_png(bytes, 1);
  ParseMap map(d.width, d.height);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      const uint8_t l = d.pixels[static_cast<size_t>(y) * d.width + x];
      if (l >= kNumParseLabels)
        throw FormatError("decode_parse_png: label id " + std::to_string(l) + " > 7");
      map.set(x, y, static_cast<ParseLabel>(l));
    }
  return map;
}

std::vector<uint8_t> encode_image_png(const ImageBuffer& img) {
  const int w = img.width(), h = img.height(), c = img.channels();
  std::vector<uint8_t> px(static_cast<size_t>(w) * h * c);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch)
        px[(static_cast<size_t>(y) * w + x) * c + ch] = quantize(img.at(x, y, ch));
  return encode_png(px, w, h, c);
}

ImageBuffer decode_image_png(const std::vector<uint8_t>& bytes) {
  // Peek the color type to keep grayscale files single-channel.
  int channels = 3;
  {
    if (bytes.size() < 26) throw FormatError("png_io: truncated PNG header");
    // IHDR color type lives at fixed offset 25 in a well-formed stream.
    const uint8_t color_type = bytes[25];
    if (color_type == 0) channels = 1;
  }
  DecodedPng d = decode_png(bytes, channels);
  ImageBuffer img(d.width, d.height, channels);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      for (int ch = 0; ch < channels; ++ch)
        img.set_raw(x, y, ch, d.pixels[(static_cast<size_t>(y) * d.width + x) * channels + ch] / 255.0f);
  return img;
}

std::vector<uint8_t> encode_mask_png(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  std::vector<uint8_t> px(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      px[static_cast<size_t>(y) * w + x] = mask.at(x, y) ? 255 : 0;
  return encode_png(px, w, h, 1);
}

BinaryMask decode_mask_png(const std::vector<uint8_t>& bytes) {
  DecodedPng d = decode_png(bytes, 1);
  BinaryMask mask(d.width, d.height);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      mask.set(x, y, d.pixels[static_cast<size_t>(y) * d.width + x] >= 128);
  return mask;
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace tryon
