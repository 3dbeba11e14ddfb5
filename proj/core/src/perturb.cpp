#include "tryon/perturb.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "tryon/correspondence.hpp"
#include "tryon/flow_io.hpp"
#include "tryon/png_io.hpp"

namespace tryon {

namespace {

namespace fs = std::filesystem;

// Engine-independent uniform mapping so seeded draws are reproducible across
// standard library implementations.
struct Rng {
  explicit Rng(uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) {
    const double t = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * t;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng() % static_cast<uint64_t>(hi - lo + 1));
  }
  std::mt19937_64 eng;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

IuvMap cosine_perturb(const IuvMap& iuv, const CosinePerturbParams& params) {
  IuvMap out(iuv.width(), iuv.height());
  for (int y = 0; y < iuv.height(); ++y)
    for (int x = 0; x < iuv.width(); ++x) {
      const int part = iuv.part(x, y);
      if (part == 0) continue;
      const auto& p = params.parts[part - 1];
      if (p.k1 == 0.0 && p.k2 == 0.0) {
        out.set(x, y, part, iuv.u(x, y), iuv.v(x, y));  // bitwise identity
        continue;
      }
      const double u = iuv.u(x, y), v = iuv.v(x, y);
      const double nu = clamp01(u + p.k1 * std::cos(p.alpha1 * u + p.beta1));
      const double nv = clamp01(v + p.k2 * std::cos(p.alpha2 * v + p.beta2));
      out.set(x, y, part, static_cast<float>(nu), static_cast<float>(nv));
    }
  return out;
}

std::pair<CosinePerturbParams, AffineParams> sample_perturb_params(uint64_t seed,
                                                                   const PerturbConfig& config) {
  Rng rng(seed);
  CosinePerturbParams cos;
  for (auto& p : cos.parts) {
    p.k1 = rng.uniform(config.k_min, config.k_max);
    p.alpha1 = rng.uniform(config.alpha_min, config.alpha_max);
    p.beta1 = rng.uniform(config.beta_min, config.beta_max);
    p.k2 = rng.uniform(config.k_min, config.k_max);
    p.alpha2 = rng.uniform(config.alpha_min, config.alpha_max);
    p.beta2 = rng.uniform(config.beta_min, config.beta_max);
  }
  AffineParams aff;
  aff.rotation_deg = rng.uniform(-config.rotation_max_deg, config.rotation_max_deg);
  aff.translate_x = rng.uniform(-config.translate_max, config.translate_max);
  aff.translate_y = rng.uniform(-config.translate_max, config.translate_max);
  aff.scale = rng.uniform(config.scale_min, config.scale_max);
  aff.shear_x_deg = rng.uniform(-config.shear_max_deg, config.shear_max_deg);
  aff.shear_y_deg = rng.uniform(-config.shear_max_deg, config.shear_max_deg);
  return {cos, aff};
}

void stamp_disc(BinaryMask& mask, double cx, double cy, double radius) {
  const double r2 = radius * radius;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(cx + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(cy + radius)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r2) mask.set(x, y, true);
    }
}

BinaryMask free_form_mask(uint64_t seed, int width, int height, const PerturbConfig& config) {
  constexpr double kPi = 3.14159265358979323846;
  Rng rng(seed);
  BinaryMask mask(width, height);
  const double dim = std::min(width, height);
  const int strokes = rng.uniform_int(config.stroke_count_min, config.stroke_count_max);
  for (int s = 0; s < strokes; ++s) {
    double x = rng.uniform(0, width - 1);
    double y = rng.uniform(0, height - 1);
    const double radius = rng.uniform(config.brush_width_min, config.brush_width_max) * dim / 2.0;
    const int vertices = rng.uniform_int(config.stroke_vertices_min, config.stroke_vertices_max);
    double angle = rng.uniform(0, 2.0 * kPi);
    stamp_disc(mask, x, y, radius);
    for (int v = 1; v < vertices; ++v) {
      angle += rng.uniform(-kPi / 2.0, kPi / 2.0);
      const double len = rng.uniform(dim / 16.0, dim / 4.0);
      const double nx = x + len * std::cos(angle);
      const double ny = y + len * std::sin(angle);
      // Thick line as discs stamped along the segment.
      const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
      for (int i = 1; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        stamp_disc(mask, x + t * (nx - x), y + t * (ny - y), radius);
      }
      x = nx;
      y = ny;
    }
  }
  return mask;
}

SegmentAugmentResult augment_segment(const ImageBuffer& image, const BinaryMask& segment,
                                     const AffineParams& params) {
  if (image.width() != segment.width() || image.height() != segment.height())
    throw std::invalid_argument("augment_segment: dimensions mismatch");
  if (params.is_identity() || segment.count() == 0) return {image, segment};
  const FlowField flow = affine_to_flow(params, image.width(), image.height());
  const WarpResult warped = warp_bilinear(image, flow);
  const BinaryMask moved = warp_nearest(segment, flow);
  ImageBuffer out = image;
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      if (moved.at(x, y))
        for (int c = 0; c < image.channels(); ++c)
          out.set_raw(x, y, c, warped.image.at(x, y, c));
  return {std::move(out), std::move(moved)};
}

TrainingExample synth_corrector_example(const ImageBuffer& image, const IuvMap& iuv,
                                        const ParseMap& parse, uint64_t seed,
                                        const PerturbConfig& config) {
  if (image.width() != iuv.width() || image.height() != iuv.height() ||
      image.width() != parse.width() || image.height() != parse.height())
    throw std::invalid_argument("synth_corrector_example: dimensions mismatch");
  auto [cos_params, aff_params] = sample_perturb_params(seed, config);

  const IuvMap cos_iuv = cosine_perturb(iuv, cos_params);
  IuvMap perturbed_iuv = cos_iuv;
  ImageBuffer perturbed_image = image;
  ParseMap perturbed_parse = parse;
  if (!aff_params.is_identity()) {
    const FlowField aff = affine_to_flow(aff_params, image.width(), image.height());
    perturbed_iuv = warp_nearest(cos_iuv, aff);
    perturbed_image = warp_bilinear(image, aff).image;
    perturbed_parse = warp_nearest(parse, aff);
  }

  NaiveFlowResult nf = naive_flow(perturbed_iuv, iuv);
  if (nf.index_empty || nf.flow.valid_count() == 0)
    throw std::runtime_error("synth_corrector_example: degenerate inputs, empty naive flow");

  return TrainingExample{std::move(perturbed_image),
                         std::move(perturbed_iuv),
                         std::move(perturbed_parse),
                         std::move(nf.flow),
                         image,
                         iuv,
                         parse,
                         cos_params,
                         aff_params};
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_training_example(const TrainingExample& ex, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path d(dir);
  write_file((d / "perturbed_image.png").string(), encode_image_png(ex.perturbed_image));
  write_file((d / "perturbed_iuv.png").string(), encode_iuv_png(ex.perturbed_iuv));
  write_file((d / "perturbed_parse.png").string(), encode_parse_png(ex.perturbed_parse));
  write_flow((d / "naive_flow.dwfl").string(), ex.flow);
  write_file((d / "target_image.png").string(), encode_image_png(ex.target_image));
  write_file((d / "target_iuv.png").string(), encode_iuv_png(ex.target_iuv));
  write_file((d / "target_parse.png").string(), encode_parse_png(ex.target_parse));

  std::ofstream manifest(d / "params.txt");
  if (!manifest) throw std::runtime_error("cannot write params manifest in " + dir);
  manifest << "affine.rotation_deg=" << fmt_double(ex.affine.rotation_deg) << "\n"
           << "affine.translate_x=" << fmt_double(ex.affine.translate_x) << "\n"
           << "affine.translate_y=" << fmt_double(ex.affine.translate_y) << "\n"
           << "affine.scale=" << fmt_double(ex.affine.scale) << "\n"
           << "affine.shear_x_deg=" << fmt_double(ex.affine.shear_x_deg) << "\n"
           << "affine.shear_y_deg=" << fmt_double(ex.affine.shear_y_deg) << "\n";
  for (int i = 0; i < IuvMap::kNumParts; ++i) {
    const auto& p = ex.cosine.parts[i];
    const std::string key = "cosine.part" + std::to_string(i + 1) + ".";
    manifest << key << "k1=" << fmt_double(p.k1) << "\n"
             << key << "alpha1=" << fmt_double(p.alpha1) << "\n"
             << key << "beta1=" << fmt_double(p.beta1) << "\n"
             << key << "k2=" << fmt_double(p.k2) << "\n"
             << key << "alpha2=" << fmt_double(p.alpha2) << "\n"
             << key << "beta2=" << fmt_double(p.beta2) << "\n";
  }
}

TrainingExample load_training_example(const std::string& dir) {
  const fs::path d(dir);
  std::map<std::string, double> kv;
  {
    std::ifstream manifest(d / "params.txt");
    if (!manifest) throw std::runtime_error("cannot read params manifest in " + dir);
    std::string line;
    while (std::getline(manifest, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    }
  }
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("params manifest missing key " + key);
    return it->second;
  };
  AffineParams aff{get("affine.rotation_deg"), get("affine.translate_x"),
                   get("affine.translate_y"), get("affine.scale"),
                   get("affine.shear_x_deg"), get("affine.shear_y_deg")};
  CosinePerturbParams cos;
  for (int i = 0; i < IuvMap::kNumParts; ++i) {
    const std::string key = "cosine.part" + std::to_string(i + 1) + ".";
    auto& p = cos.parts[i];
    p.k1 = get(key + "k1");
    p.alpha1 = get(key + "alpha1");
    p.beta1 = get(key + "beta1");
    p.k2 = get(key + "k2");
    p.alpha2 = get(key + "alpha2");
    p.beta2 = get(key + "beta2");
  }
  return TrainingExample{
      decode_image_png(read_file((d / "perturbed_image.png").string())),
      decode_iuv_png(read_file((d / "perturbed_iuv.png").string())),
      decode_parse_png(read_file((d / "perturbed_parse.png").string())),
      read_flow((d / "naive_flow.dwfl").string()),
      decode_image_png(read_file((d / "target_image.png").string())),
      decode_iuv_png(read_file((d / "target_iuv.png").string())),
      decode_parse_png(read_file((d / "target_parse.png").string())),
      cos,
      aff};
}

uint64_t mix_seed(uint64_t base_seed, uint64_t index) {
  // splitmix64 finalizer over the combined value
  uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tryon
