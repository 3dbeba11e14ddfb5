#pragma once

#include <utility>

#include "tryon/raster.hpp"

namespace tryon {

// Affine transform about the raster center: scale and shear, then rotation,
// then translation (fractions of width/height).
struct AffineParams {
  double rotation_deg = 0.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  double scale = 1.0;
  double shear_x_deg = 0.0;
  double shear_y_deg = 0.0;

  bool is_identity() const {
    return rotation_deg == 0.0 && translate_x == 0.0 && translate_y == 0.0 && scale == 1.0 &&
           shear_x_deg == 0.0 && shear_y_deg == 0.0;
  }
  AffineParams inverse() const;
};

struct WarpResult {
  ImageBuffer image;
  BinaryMask mask;
};

// Backward bilinear warp: each valid flow pixel samples src at its source
// coordinate. Sample positions within half a pixel outside src are clamped,
// farther ones invalidate the pixel. Invalid pixels output 0.
WarpResult warp_bilinear(const ImageBuffer& src, const FlowField& flow);

// Nearest-neighbor warp for label rasters; invalid pixels get background.
ParseMap warp_nearest(const ParseMap& src, const FlowField& flow);
IuvMap warp_nearest(const IuvMap& src, const FlowField& flow);
BinaryMask warp_nearest(const BinaryMask& src, const FlowField& flow);

// Backward flow realizing the affine map on a width x height raster. Pixels
// whose preimage falls outside the source are invalid.
FlowField affine_to_flow(const AffineParams& params, int width, int height);

// Backward flow realizing the exact inverse of params (matrix inverse, not
// the parameter-wise negation of AffineParams::inverse()).
FlowField affine_inverse_flow(const AffineParams& params, int width, int height);

// result(p) = inner sampled bilinearly at outer(p); invalid if either hop is
// invalid or any of the 4 inner neighbors is invalid.
FlowField compose_flows(const FlowField& outer, const FlowField& inner);

FlowField identity_flow(int width, int height);

}  // namespace tryon
