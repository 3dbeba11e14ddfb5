#include "tryon/composite.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "tryon/png_io.hpp"

namespace tryon {

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius < 0) throw std::invalid_argument("erode: negative radius");
  if (radius == 0) return mask;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);

  const int w = mask.width(), h = mask.height();
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      bool all = true;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        // Off-raster neighbors count as background, so erosion shrinks from
        // the image border as well.
        if (nx < 0 || nx >= w || ny < 0 || ny >= h || !mask.at(nx, ny)) {
          all = false;
          break;
        }
      }
      out.set(x, y, all);
    }
  return out;
}

CompositeResult composite_tryon(const ImageBuffer& undressed, const ImageBuffer& warped_garment,
                                const BinaryMask& garment_mask, int radius) {
  if (!undressed.same_dims(warped_garment) || undressed.width() != garment_mask.width() ||
      undressed.height() != garment_mask.height())
    throw std::invalid_argument("composite_tryon: dimensions mismatch");
  const int w = garment_mask.width(), h = garment_mask.height();

  BinaryMask complement(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) complement.set(x, y, !garment_mask.at(x, y));
  const BinaryMask garment_in = erode(garment_mask, radius);
  const BinaryMask person_in = erode(complement, radius);

  ImageBuffer composite(w, h, undressed.channels());
  BinaryMask refine(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (garment_in.at(x, y)) {
        for (int c = 0; c < undressed.channels(); ++c)
          composite.set_raw(x, y, c, warped_garment.at(x, y, c));
      } else if (person_in.at(x, y)) {
        for (int c = 0; c < undressed.channels(); ++c)
          composite.set_raw(x, y, c, undressed.at(x, y, c));
      } else {
        refine.set(x, y, true);  // band stays zero-filled for the inpainter
      }
    }
  return {std::move(composite), std::move(refine), garment_in};
}

ImageBuffer preserve_face(const ImageBuffer& result, const ImageBuffer& original,
                          const ParseMap& parse) {
  if (!result.same_dims(original) || result.width() != parse.width() ||
      result.height() != parse.height())
    throw std::invalid_argument("preserve_face: dimensions mismatch");
  ImageBuffer out = result;
  for (int y = 0; y < parse.height(); ++y)
    for (int x = 0; x < parse.width(); ++x)
      if (parse.at(x, y) == ParseLabel::kFace)
        for (int c = 0; c < result.channels(); ++c)
          out.set_raw(x, y, c, original.at(x, y, c));
  return out;
}

InpaintJob export_inpaint_job(const ImageBuffer& image, const BinaryMask& inpaint_mask,
                              const InpaintCondition& condition, const std::string& prompt,
                              const std::string& negative_prompt, const std::string& out_dir) {
  if (image.width() != inpaint_mask.width() || image.height() != inpaint_mask.height())
    throw std::invalid_argument("export_inpaint_job: dimensions mismatch");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("export_inpaint_job: cannot create " + out_dir);
  const fs::path d(out_dir);

  write_file((d / "image.png").string(), encode_image_png(image));
  write_file((d / "mask.png").string(), encode_mask_png(inpaint_mask));
  std::string kind;
  if (const auto* iuv = std::get_if<IuvMap>(&condition)) {
    if (iuv->width() != image.width() || iuv->height() != image.height())
      throw std::invalid_argument("export_inpaint_job: condition dimensions mismatch");
    write_file((d / "condition.png").string(), encode_iuv_png(*iuv));
    kind = "iuv";
  } else {
    const auto& parse = std::get<ParseMap>(condition);
    if (parse.width() != image.width() || parse.height() != image.height())
      throw std::invalid_argument("export_inpaint_job: condition dimensions mismatch");
    write_file((d / "condition.png").string(), encode_parse_png(parse));
    kind = "parse";
  }

  const bool noop = inpaint_mask.count() == 0;
  std::ofstream meta(d / "meta.txt");
  if (!meta) throw std::runtime_error("export_inpaint_job: cannot write meta.txt in " + out_dir);
  meta << "prompt=" << prompt << "\n"
       << "negative_prompt=" << negative_prompt << "\n"
       << "condition_kind=" << kind << "\n"
       << "guidance_scale=" << kInpaintGuidanceScale << "\n"
       << "steps=" << kInpaintSteps << "\n"
       << "noop=" << (noop ? "true" : "false") << "\n";
  return {out_dir, noop};
}

}  // namespace tryon
