#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tryon/raster.hpp"

namespace tryon {

struct BBox {
  int x = 0, y = 0, w = 0, h = 0;
};

struct CurationRecord {
  std::string id;
  std::optional<std::string> viewpoint;  // frontal | side | back
  std::optional<std::string> zoom;       // none | medium | large
  std::optional<std::string> occlusion;  // slight | medium | heavy
  std::optional<std::string> source;     // shop | customer
  std::optional<BBox> bbox;
  int image_width = 0, image_height = 0;
};

constexpr int kCropTargetWidth = 320;
constexpr int kCropTargetHeight = 512;

// Padded source window with exact 5:8 (w:h) aspect, resized to 320x512.
struct CropSpec {
  BBox padded;  // inside the image, padded.w * 8 == padded.h * 5
  int target_width = kCropTargetWidth;
  int target_height = kCropTargetHeight;
};

struct FilterDecision {
  bool keep = false;
  std::string reason;  // empty when kept
};

// Keep iff viewpoint=frontal, zoom=none, occlusion=slight, source!=customer.
// Missing annotations reject with reason "missing_annotation".
FilterDecision stage1_filter(const CurationRecord& record);

struct GeometryDecision {
  std::optional<CropSpec> crop;
  std::string reason;  // no_detection | horizontal | aspect | degenerate
};

// Rejects absent bboxes, horizontal people (w > h), and aspect w/h > 5/8;
// otherwise pads the bbox symmetrically to exact 5:8 (clipped at image
// borders with the deficit shifted to the opposite side).
GeometryDecision stage2_geometry(const CurationRecord& record);

// Bilinear resize of the padded crop window to 320x512.
ImageBuffer apply_crop(const ImageBuffer& image, const CropSpec& spec);

struct TestTuple {
  std::string person_id;
  std::string garment_id;
  std::string category;  // top | dress
};

// Seed-deterministic derangement: each person paired with another list
// member's garment, no self-pairs. Throws on fewer than 2 ids.
std::vector<TestTuple> make_test_tuples(const std::vector<std::string>& person_ids,
                                        const std::string& category, uint64_t seed);

struct ManifestEntry {
  std::string id;
  bool keep = false;
  std::string reason;
  std::optional<CropSpec> crop;
};

// Runs stage1 then stage2 over each record.
std::vector<ManifestEntry> curate(const std::vector<CurationRecord>& records);

// Line-delimited key=value text forms (schema in the README).
std::vector<CurationRecord> parse_records(const std::string& text);
std::string manifest_to_text(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> parse_manifest(const std::string& text);

}  // namespace tryon
