#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tryon/perturb.hpp"
#include "tryon/raster.hpp"

namespace tryon {

// Feature rasters may be signed (gradient planes), so they are not
// ImageBuffers.
struct FeaturePlane {
  int width = 0, height = 0;
  std::vector<float> values;  // row-major
};

// Seam for the perceptual term: maps an image to feature rasters at one or
// more scales. Implementations must be deterministic.
class FeatureExtractor {
public:
  virtual ~FeatureExtractor() = default;
  virtual std::vector<FeaturePlane> extract(const ImageBuffer& image) const = 0;
};

// Default dependency-free extractor: a 3-level half-resolution pyramid of
// intensity plus horizontal/vertical first-difference gradient planes.
class PyramidFeatureExtractor : public FeatureExtractor {
public:
  explicit PyramidFeatureExtractor(int levels = 3) : levels_(levels) {}
  std::vector<FeaturePlane> extract(const ImageBuffer& image) const override;

private:
  int levels_;
};

struct LossReport {
  double tv = 0;
  double l1 = 0;
  double perceptual = 0;
  double total = 0;
};

// Mean over valid adjacent pixel pairs of |dsrc_x| + |dsrc_y|; pairs spanning
// an invalid pixel are excluded. No valid pairs -> 0, flagged via no_pairs.
double tv_loss(const FlowField& flow, bool* no_pairs = nullptr);

// Mean absolute difference over region (default: all pixels).
double l1_recon(const ImageBuffer& a, const ImageBuffer& b,
                const BinaryMask* region = nullptr);

// Sum over feature planes of mean absolute feature difference.
double perceptual_loss(const ImageBuffer& a, const ImageBuffer& b,
                       const FeatureExtractor& extractor);

// Three-term objective: tv over corrected_flow, l1 and perceptual between the
// target image and warp_bilinear(perturbed image, corrected_flow) on the
// warp's valid region. Unit term weights.
LossReport corrector_objective(const TrainingExample& example, const FlowField& corrected_flow,
                               const FeatureExtractor& extractor);

// Mean local SSIM, 11x11 Gaussian window sigma 1.5, C1=0.01^2, C2=0.03^2 on
// the [0,1] range; 3-channel inputs are converted to gray by channel mean.
// Throws if either dimension is smaller than the window.
double ssim(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace tryon
