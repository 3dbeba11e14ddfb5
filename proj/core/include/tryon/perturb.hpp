#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "tryon/raster.hpp"
#include "tryon/warp.hpp"

namespace tryon {

// Per-part sinusoidal UV displacement coefficients:
//   u' = u + k1*cos(alpha1*u + beta1), v' = v + k2*cos(alpha2*v + beta2)
struct CosinePerturbParams {
  struct Part {
    double k1 = 0, alpha1 = 0, beta1 = 0;
    double k2 = 0, alpha2 = 0, beta2 = 0;
  };
  std::array<Part, IuvMap::kNumParts> parts{};  // index 0 = part 1
};

struct PerturbConfig {
  double k_min = 0.0, k_max = 0.05;
  double alpha_min = 0.0, alpha_max = 4.0 * 3.14159265358979323846;
  double beta_min = 0.0, beta_max = 2.0 * 3.14159265358979323846;
  double rotation_max_deg = 15.0;          // sampled in [-max, max]
  double translate_max = 0.05;             // fraction of width/height
  double scale_min = 0.9, scale_max = 1.1;
  double shear_max_deg = 10.0;
  int stroke_count_min = 1, stroke_count_max = 4;
  int stroke_vertices_min = 4, stroke_vertices_max = 12;
  double brush_width_min = 0.03, brush_width_max = 0.10;  // fraction of min(W,H)
};

struct TrainingExample {
  ImageBuffer perturbed_image;   // I~_H
  IuvMap perturbed_iuv;          // P~_H
  ParseMap perturbed_parse;
  FlowField flow;                // naive flow P~_H -> P_H
  ImageBuffer target_image;      // I_H
  IuvMap target_iuv;             // P_H
  ParseMap target_parse;         // M_H
  CosinePerturbParams cosine;
  AffineParams affine;
};

IuvMap cosine_perturb(const IuvMap& iuv, const CosinePerturbParams& params);

std::pair<CosinePerturbParams, AffineParams> sample_perturb_params(uint64_t seed,
                                                                   const PerturbConfig& config);

// Union of random brush strokes: random start, per-vertex random turn and
// segment length, stamped with a disc of the sampled brush width.
BinaryMask free_form_mask(uint64_t seed, int width, int height, const PerturbConfig& config);

// Stamps a filled disc (pixels with (x-cx)^2 + (y-cy)^2 <= r^2) into mask.
void stamp_disc(BinaryMask& mask, double cx, double cy, double radius);

struct SegmentAugmentResult {
  ImageBuffer image;
  BinaryMask segment;
};

// Moves the masked segment by the affine; pixels outside the moved segment
// keep the original image content.
SegmentAugmentResult augment_segment(const ImageBuffer& image, const BinaryMask& segment,
                                     const AffineParams& params);

TrainingExample synth_corrector_example(const ImageBuffer& image, const IuvMap& iuv,
                                        const ParseMap& parse, uint64_t seed,
                                        const PerturbConfig& config);

// Directory bundle: PNGs + naive_flow.dwfl + key=value params manifest.
void save_training_example(const TrainingExample& example, const std::string& dir);
TrainingExample load_training_example(const std::string& dir);

// Derives the per-example seed for batch synthesis (seed mixing).
uint64_t mix_seed(uint64_t base_seed, uint64_t index);

}  // namespace tryon
