#pragma once

// Brute-force reference implementations and synthetic fixtures used by the
// unit and acceptance suites. Everything here is independent of the indexed
// paths it checks.

#include <cmath>
#include <optional>
#include <random>

#include "tryon/correspondence.hpp"
#include "tryon/raster.hpp"

namespace tryon::testing {

struct BruteMatch {
  int x, y;
  double d2;
};

// Exhaustive nearest-UV scan over same-part garment pixels, ties by smallest
// (y, x). Same distance arithmetic as the indexed path (double over floats).
inline std::optional<BruteMatch> brute_query(const IuvMap& garment, const BinaryMask* region,
                                             int part, double u, double v, double tau) {
  std::optional<BruteMatch> best;
  for (int y = 0; y < garment.height(); ++y)
    for (int x = 0; x < garment.width(); ++x) {
      if (garment.part(x, y) != part || part == 0) continue;
      if (region && !region->at(x, y)) continue;
      const double du = static_cast<double>(garment.u(x, y)) - u;
      const double dv = static_cast<double>(garment.v(x, y)) - v;
      const double d2 = du * du + dv * dv;
      if (!best || d2 < best->d2) best = BruteMatch{x, y, d2};
    }
  if (!best || best->d2 > tau * tau) return std::nullopt;
  return best;
}

// Per-pixel exhaustive naive flow (no hole filling).
inline FlowField brute_naive_flow(const IuvMap& garment, const IuvMap& person, double tau,
                                  const BinaryMask* region = nullptr) {
  FlowField flow(person.width(), person.height());
  for (int y = 0; y < person.height(); ++y)
    for (int x = 0; x < person.width(); ++x) {
      const int part = person.part(x, y);
      if (part == 0) continue;
      if (auto m = brute_query(garment, region, part, person.u(x, y), person.v(x, y), tau))
        flow.set(x, y, static_cast<float>(m->x), static_cast<float>(m->y));
    }
  return flow;
}

// Exhaustive nearest-valid-pixel hole fill (squared Euclidean, ties by
// smallest (y, x)).
inline FlowField brute_fill_holes(const FlowField& flow, const BinaryMask& region) {
  FlowField out = flow;
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      if (flow.valid(x, y) || !region.at(x, y)) continue;
      long best_d2 = -1;
      int bx = -1, by = -1;
      for (int sy = 0; sy < flow.height(); ++sy)
        for (int sx = 0; sx < flow.width(); ++sx) {
          if (!flow.valid(sx, sy)) continue;
          const long dx = sx - x, dy = sy - y;
          const long d2 = dx * dx + dy * dy;
          if (best_d2 < 0 || d2 < best_d2) {
            best_d2 = d2;
            bx = sx;
            by = sy;
          }
        }
      if (best_d2 >= 0) out.set(x, y, flow.src_x(bx, by), flow.src_y(bx, by));
    }
  return out;
}

// Random IUV map: up to max_parts parts, random UV fields, roughly
// `background` fraction of background pixels.
inline IuvMap random_iuv(std::mt19937_64& rng, int width, int height, int max_parts,
                         double background = 0.3) {
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  IuvMap map(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      if (unit() < background) continue;
      const int part = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_parts));
      map.set(x, y, part, static_cast<float>(unit()), static_cast<float>(unit()));
    }
  return map;
}

// Synthetic figure: an elliptical multi-part body with a smooth UV chart per
// part and a sinusoid texture image. Each pixel's (part, u, v) is unique
// within the figure, and nearby pixels have nearby UV.
struct SyntheticFigure {
  IuvMap iuv;
  ImageBuffer image;
  ParseMap parse;
};

inline SyntheticFigure synthetic_figure(int width, int height, int parts, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  IuvMap iuv(width, height);
  ImageBuffer image(width, height, 3);
  ParseMap parse(width, height);
  const double cx = width / 2.0, cy = height / 2.0;
  const double rx = width * 0.38, ry = height * 0.42;
  const double phase1 = unit() * 6.28, phase2 = unit() * 6.28;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double ex = (x - cx) / rx, ey = (y - cy) / ry;
      if (ex * ex + ey * ey > 1.0) continue;
      // Horizontal bands of parts; UV is the smooth within-band position.
      const double band = (ey + 1.0) / 2.0 * parts;
      const int part = std::min(parts, 1 + static_cast<int>(band));
      const double v = band - (part - 1);
      const double u = (ex + 1.0) / 2.0;
      iuv.set(x, y, part, static_cast<float>(std::clamp(u, 0.0, 1.0)),
              static_cast<float>(std::clamp(v, 0.0, 1.0)));
      parse.set(x, y, part % 2 == 0 ? ParseLabel::kTop : ParseLabel::kPants);
      image.set_raw(x, y, 0, static_cast<float>(0.5 + 0.5 * std::sin(12.0 * u + phase1)) * 0.98f);
      image.set_raw(x, y, 1, static_cast<float>(0.5 + 0.5 * std::cos(9.0 * v + phase2)) * 0.98f);
      image.set_raw(x, y, 2, static_cast<float>(0.5 + 0.45 * std::sin(7.0 * (u + v))));
    }
  return {std::move(iuv), std::move(image), std::move(parse)};
}

}  // namespace tryon::testing
