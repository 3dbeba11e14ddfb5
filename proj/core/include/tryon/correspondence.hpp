#pragma once

#include <optional>
#include <vector>

#include "tryon/raster.hpp"

namespace tryon {

struct CorrespondenceConfig {
  double epsilon = 1.0 / 64.0;  // UV grid cell size
  double tau = 0.05;            // max Euclidean UV match distance
  bool fill_holes = true;
};

// One indexed garment pixel: image position and its UV coordinate.
struct UvEntry {
  int x, y;
  float u, v;
};

struct UvMatch {
  int x, y;
  double uv_distance;
};

// Per-part uniform grid over [0,1]^2. Read-only after build; queries return
// the exact nearest indexed pixel of the same part within tau, ties broken
// by smallest (y, x).
class UvIndex {
public:
  UvIndex(const IuvMap& garment, const BinaryMask* region, double epsilon);

  std::optional<UvMatch> query_nearest(int part, double u, double v, double tau) const;

  bool empty() const { return entry_count_ == 0; }
  size_t entry_count() const { return entry_count_; }
  double epsilon() const { return epsilon_; }

private:
  const std::vector<UvEntry>& cell(int part, int cu, int cv) const {
    return cells_[(static_cast<size_t>(part - 1) * grid_ + cv) * grid_ + cu];
  }
  int cell_of(double t) const;

  double epsilon_;
  int grid_;
  size_t entry_count_ = 0;
  std::vector<std::vector<UvEntry>> cells_;  // [part-1][cv][cu]
  std::vector<bool> part_present_;
};

inline UvIndex build_uv_index(const IuvMap& garment, const BinaryMask* region = nullptr,
                              double epsilon = 1.0 / 64.0) {
  return UvIndex(garment, region, epsilon);
}

struct NaiveFlowResult {
  FlowField flow;
  bool index_empty = false;  // garment had no indexable pixels
};

// Backward flow from person pixels to garment pixels via UV correspondence.
// Unmatched or background person pixels are invalid; with config.fill_holes,
// invalid pixels inside the person's non-background region copy the flow of
// their nearest valid pixel.
NaiveFlowResult naive_flow(const IuvMap& garment, const IuvMap& person,
                           const CorrespondenceConfig& config = {},
                           const BinaryMask* garment_region = nullptr);

NaiveFlowResult naive_flow(const UvIndex& index, const IuvMap& person,
                           const CorrespondenceConfig& config = {});

// Copies each invalid region pixel from its nearest valid pixel (exact
// Euclidean image distance, ties by smallest (y, x)). Valid pixels and
// pixels outside region are unchanged. Throws if the flow has no valid pixel.
FlowField fill_holes(const FlowField& flow, const BinaryMask& region);

}  // namespace tryon
