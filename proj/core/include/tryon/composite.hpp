#pragma once

#include <string>
#include <variant>

#include "tryon/raster.hpp"

namespace tryon {

// Diffusion-inpainter prompt strings and sampler defaults for exported jobs.
inline constexpr const char* kSkinInpaintPrompt = "a person in a black+ strapless++ bra++++";
inline constexpr const char* kSkinInpaintNegativePrompt =
    "art, clothes, garments, long-sleeves, sleeves, cloak, loose, thick clothes, loose clothes, "
    "pants, shirts, skirts, dresses, long jackets, jackets, cloth between legs, cloth around the "
    "body, cloth around arms";
inline constexpr const char* kRefineNegativePrompt =
    "blurry, cracks on skins, poor shirts, poor pants, strange holes, bad legs, missing legs, bad "
    "arms, missing arms, bad anatomy, poorly drawn face, bad face, fused face, cloned face, worst "
    "face, three crus, extra crus, fused crus, worst feet, three feet, fused feet, fused thigh, "
    "three thighs, fused thigh, extra thigh, worst thigh, missing fingers, extra fingers, ugly "
    "fingers, long fingers, horn, extra eyes, huge eyes, 2girl, amputation, disconnected limbs, "
    "cartoon, cg, 3d, unreal, animate";
inline constexpr double kInpaintGuidanceScale = 7.5;
inline constexpr int kInpaintSteps = 20;

// Morphological erosion with a disc structuring element (offsets with
// dx^2 + dy^2 <= radius^2). Radius 0 is the identity.
BinaryMask erode(const BinaryMask& mask, int radius);

struct CompositeResult {
  ImageBuffer composite;        // I^_T; boundary band zero-filled
  BinaryMask refine_mask;       // band for the inpainter to fill
  BinaryMask garment_coverage;  // pixels taken from the warped garment
};

// I^_T = undressed (.) e[1 - garment_mask] + warped_garment (.) e[garment_mask];
// the band in neither eroded set is zero-filled and returned as refine_mask.
CompositeResult composite_tryon(const ImageBuffer& undressed, const ImageBuffer& warped_garment,
                                const BinaryMask& garment_mask, int radius);

// Copies pixels labeled face in parse verbatim from original into result.
ImageBuffer preserve_face(const ImageBuffer& result, const ImageBuffer& original,
                          const ParseMap& parse);

using InpaintCondition = std::variant<IuvMap, ParseMap>;

struct InpaintJob {
  std::string dir;
  bool noop = false;  // empty inpaint mask
};

// Bundle layout: image.png, mask.png, condition.png, meta.txt (key=value:
// prompt, negative_prompt, condition_kind, guidance_scale, steps, noop).
InpaintJob export_inpaint_job(const ImageBuffer& image, const BinaryMask& inpaint_mask,
                              const InpaintCondition& condition, const std::string& prompt,
                              const std::string& negative_prompt, const std::string& out_dir);

}  // namespace tryon
