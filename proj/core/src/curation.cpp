#include "tryon/curation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tryon/png_io.hpp"

namespace tryon {

FilterDecision stage1_filter(const CurationRecord& r) {
  if (!r.viewpoint || !r.zoom || !r.occlusion || !r.source)
    return {false, "missing_annotation"};
  if (*r.viewpoint != "frontal") return {false, "viewpoint"};
  if (*r.zoom != "none") return {false, "zoom"};
  if (*r.occlusion != "slight") return {false, "occlusion"};
  if (*r.source == "customer") return {false, "customer_source"};
  return {true, ""};
}

GeometryDecision stage2_geometry(const CurationRecord& r) {
  if (!r.bbox) return {std::nullopt, "no_detection"};
  const BBox& b = *r.bbox;
  if (b.w <= 0 || b.h <= 0 || r.image_width <= 0 || r.image_height <= 0)
    return {std::nullopt, "degenerate"};
  if (b.x < 0 || b.y < 0 || b.x + b.w > r.image_width || b.y + b.h > r.image_height)
    return {std::nullopt, "degenerate"};
  if (b.w > b.h) return {std::nullopt, "horizontal"};
  // Strict 5:8 bound: reject only when w/h > 5/8, i.e. 8w > 5h.
  if (8 * b.w > 5 * b.h) return {std::nullopt, "aspect"};

  // Padded window in exact 5:8 units. s = ceil(h/8) already guarantees
  // 5s >= w because 8w <= 5h.
  int s = (b.h + 7) / 8;
  s = std::min({s, r.image_width / 5, r.image_height / 8});
  if (s <= 0) return {std::nullopt, "degenerate"};
  const int cw = 5 * s, ch = 8 * s;

  // Center on the bbox, pad width first then height, shifting any
  // border-clipped deficit to the opposite side.
  const auto place = [](int lo, int extent, int window, int limit) {
    int p = lo + (extent - window) / 2;  // symmetric pad (window >= extent here may flip sign)
    return std::clamp(p, 0, limit - window);
  };
  const int px = place(b.x, b.w, cw, r.image_width);
  const int py = place(b.y, b.h, ch, r.image_height);
  return {CropSpec{{px, py, cw, ch}}, ""};
}

ImageBuffer apply_crop(const ImageBuffer& image, const CropSpec& spec) {
  const BBox& p = spec.padded;
  if (p.w <= 0 || p.h <= 0 || p.x < 0 || p.y < 0 || p.x + p.w > image.width() ||
      p.y + p.h > image.height())
    throw std::invalid_argument("apply_crop: spec outside image");
  const int tw = spec.target_width, th = spec.target_height;
  ImageBuffer out(tw, th, image.channels());
  const double sx_scale = static_cast<double>(p.w) / tw;
  const double sy_scale = static_cast<double>(p.h) / th;
  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x) {
      // Pixel-center mapping, clamped to the crop window.
      double sx = p.x + (x + 0.5) * sx_scale - 0.5;
      double sy = p.y + (y + 0.5) * sy_scale - 0.5;
      sx = std::clamp(sx, static_cast<double>(p.x), static_cast<double>(p.x + p.w - 1));
      sy = std::clamp(sy, static_cast<double>(p.y), static_cast<double>(p.y + p.h - 1));
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, p.x + p.w - 1);
      const int y1 = std::min(y0 + 1, p.y + p.h - 1);
      const double fx = sx - x0, fy = sy - y0;
      for (int c = 0; c < image.channels(); ++c) {
        if (fx == 0.0 && fy == 0.0) {
          out.set_raw(x, y, c, image.at(x0, y0, c));
          continue;
        }
        const double v = (1 - fy) * ((1 - fx) * image.at(x0, y0, c) + fx * image.at(x1, y0, c)) +
                         fy * ((1 - fx) * image.at(x0, y1, c) + fx * image.at(x1, y1, c));
        out.set_raw(x, y, c, static_cast<float>(std::clamp(v, 0.0, 1.0)));
      }
    }
  return out;
}

std::vector<TestTuple> make_test_tuples(const std::vector<std::string>& person_ids,
                                        const std::string& category, uint64_t seed) {
  const size_t n = person_ids.size();
  if (n < 2) throw std::invalid_argument("make_test_tuples: need at least 2 ids");
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;

  std::mt19937_64 eng(seed);
  bool deranged = false;
  for (int attempt = 0; attempt < 100 && !deranged; ++attempt) {
    // Fisher-Yates with an engine-independent index draw.
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(eng() % (i + 1));
      std::swap(perm[i], perm[j]);
    }
    deranged = true;
    for (size_t i = 0; i < n; ++i)
      if (perm[i] == i) {
        deranged = false;
        break;
      }
  }
  if (!deranged) {
    // Deterministic fallback: rotate by one.
    for (size_t i = 0; i < n; ++i) perm[i] = (i + 1) % n;
  }

  std::vector<TestTuple> tuples;
  tuples.reserve(n);
  for (size_t i = 0; i < n; ++i)
    tuples.push_back({person_ids[i], person_ids[perm[i]], category});
  return tuples;
}

std::vector<ManifestEntry> curate(const std::vector<CurationRecord>& records) {
  std::vector<ManifestEntry> out;
  out.reserve(records.size());
  for (const CurationRecord& r : records) {
    ManifestEntry e;
    e.id = r.id;
    const FilterDecision s1 = stage1_filter(r);
    if (!s1.keep) {
      e.keep = false;
      e.reason = s1.reason;
    } else {
      const GeometryDecision s2 = stage2_geometry(r);
      if (s2.crop) {
        e.keep = true;
        e.crop = s2.crop;
      } else {
        e.keep = false;
        e.reason = s2.reason;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> split_kv(const std::string& line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw FormatError("curation: malformed token '" + tok + "'");
    out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return out;
}

BBox parse_bbox(const std::string& s) {
  BBox b;
  char c1, c2, c3;
  std::istringstream ss(s);
  if (!(ss >> b.x >> c1 >> b.y >> c2 >> b.w >> c3 >> b.h) || c1 != ',' || c2 != ',' || c3 != ',')
    throw FormatError("curation: malformed bbox '" + s + "'");
  return b;
}

}  // namespace

std::vector<CurationRecord> parse_records(const std::string& text) {
  std::vector<CurationRecord> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    CurationRecord r;
    for (const auto& [key, value] : split_kv(line)) {
      if (key == "id") r.id = value;
      else if (key == "viewpoint") r.viewpoint = value;
      else if (key == "zoom") r.zoom = value;
      else if (key == "occlusion") r.occlusion = value;
      else if (key == "source") r.source = value;
      else if (key == "bbox") r.bbox = parse_bbox(value);
      else if (key == "width") r.image_width = std::stoi(value);
      else if (key == "height") r.image_height = std::stoi(value);
      else throw FormatError("curation: unknown record key '" + key + "'");
    }
    if (r.id.empty()) throw FormatError("curation: record without id");
    out.push_back(std::move(r));
  }
  return out;
}

std::string manifest_to_text(const std::vector<ManifestEntry>& entries) {
  std::ostringstream ss;
  for (const ManifestEntry& e : entries) {
    ss << "id=" << e.id << " decision=" << (e.keep ? "keep" : "reject");
    if (!e.keep) ss << " reason=" << e.reason;
    if (e.crop)
      ss << " crop=" << e.crop->padded.x << ',' << e.crop->padded.y << ',' << e.crop->padded.w
         << ',' << e.crop->padded.h << " target=" << e.crop->target_width << 'x'
         << e.crop->target_height;
    ss << '\n';
  }
  return ss.str();
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  std::vector<ManifestEntry> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    ManifestEntry e;
    for (const auto& [key, value] : split_kv(line)) {
      if (key == "id") e.id = value;
      else if (key == "decision") e.keep = (value == "keep");
      else if (key == "reason") e.reason = value;
      else if (key == "crop") {
        CropSpec spec = e.crop.value_or(CropSpec{});
        spec.padded = parse_bbox(value);
        e.crop = spec;
      } else if (key == "target") {
        CropSpec spec = e.crop.value_or(CropSpec{});
        const auto x = value.find('x');
        if (x == std::string::npos) throw FormatError("curation: malformed target '" + value + "'");
        spec.target_width = std::stoi(value.substr(0, x));
        spec.target_height = std::stoi(value.substr(x + 1));
        e.crop = spec;
      } else {
        throw FormatError("curation: unknown manifest key '" + key + "'");
      }
    }
    if (e.id.empty()) throw FormatError("curation: manifest line without id");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace tryon
