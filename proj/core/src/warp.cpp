#include "tryon/warp.hpp"

#include <cmath>
#include <stdexcept>

namespace tryon {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Mat23 {
  // p' = (a*x + b*y + tx, c*x + d*y + ty)
  double a = 1, b = 0, c = 0, d = 1, tx = 0, ty = 0;

  Mat23 mul(const Mat23& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d,
            a * o.tx + b * o.ty + tx, c * o.tx + d * o.ty + ty};
  }
  Mat23 inverted() const {
    const double det = a * d - b * c;
    if (det == 0.0) throw std::invalid_argument("affine: singular transform");
    const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;
    return {ia, ib, ic, id, -(ia * tx + ib * ty), -(ic * tx + id * ty)};
  }
  void apply(double x, double y, double& ox, double& oy) const {
    ox = a * x + b * y + tx;
    oy = c * x + d * y + ty;
  }
};

// Forward pixel-coordinate map: scale/shear, rotation, then translation,
// pivoted at the raster center.
Mat23 forward_matrix(const AffineParams& p, int width, int height) {
  if (p.scale <= 0.0) throw std::invalid_argument("affine: scale must be positive");
  const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
  const double th = p.rotation_deg * kPi / 180.0;
  const Mat23 to_center{1, 0, 0, 1, -cx, -cy};
  const Mat23 scale{p.scale, 0, 0, p.scale, 0, 0};
  const Mat23 shear{1, std::tan(p.shear_x_deg * kPi / 180.0),
                    std::tan(p.shear_y_deg * kPi / 180.0), 1, 0, 0};
  const Mat23 rot{std::cos(th), -std::sin(th), std::sin(th), std::cos(th), 0, 0};
  const Mat23 back{1, 0, 0, 1, cx + p.translate_x * width, cy + p.translate_y * height};
  return back.mul(rot).mul(shear).mul(scale).mul(to_center);
}

FlowField flow_from_backward_map(const Mat23& inv, int width, int height) {
  FlowField flow(width, height);
  const double max_x = width - 1, max_y = height - 1;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double sx, sy;
      inv.apply(x, y, sx, sy);
      if (sx < -0.5 || sx > max_x + 0.5 || sy < -0.5 || sy > max_y + 0.5) continue;
      sx = std::clamp(sx, 0.0, max_x);
      sy = std::clamp(sy, 0.0, max_y);
      flow.set(x, y, static_cast<float>(sx), static_cast<float>(sy));
    }
  return flow;
}

struct SamplePos {
  int x0, y0, x1, y1;
  double fx, fy;
  bool ok;
};

SamplePos locate(double sx, double sy, int sw, int sh) {
  SamplePos s{};
  if (sx < -0.5 || sx > sw - 1 + 0.5 || sy < -0.5 || sy > sh - 1 + 0.5) {
    s.ok = false;
    return s;
  }
  sx = std::clamp(sx, 0.0, static_cast<double>(sw - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(sh - 1));
  s.x0 = static_cast<int>(std::floor(sx));
  s.y0 = static_cast<int>(std::floor(sy));
  s.fx = sx - s.x0;
  s.fy = sy - s.y0;
  s.x1 = std::min(s.x0 + 1, sw - 1);
  s.y1 = std::min(s.y0 + 1, sh - 1);
  s.ok = true;
  return s;
}

}  // namespace

AffineParams AffineParams::inverse() const {
  return {-rotation_deg, -translate_x, -translate_y, 1.0 / scale, -shear_x_deg, -shear_y_deg};
}

WarpResult warp_bilinear(const ImageBuffer& src, const FlowField& flow) {
  ImageBuffer out(flow.width(), flow.height(), src.channels());
  BinaryMask mask(flow.width(), flow.height());
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      if (!flow.valid(x, y)) continue;
      const SamplePos s = locate(flow.src_x(x, y), flow.src_y(x, y), src.width(), src.height());
      if (!s.ok) continue;
      mask.set(x, y, true);
      for (int c = 0; c < src.channels(); ++c) {
        if (s.fx == 0.0 && s.fy == 0.0) {
          // Integer sample position: copy, bitwise-exact.
          out.set_raw(x, y, c, src.at(s.x0, s.y0, c));
          continue;
        }
        const double v00 = src.at(s.x0, s.y0, c), v10 = src.at(s.x1, s.y0, c);
        const double v01 = src.at(s.x0, s.y1, c), v11 = src.at(s.x1, s.y1, c);
        const double v = (1 - s.fy) * ((1 - s.fx) * v00 + s.fx * v10) +
                         s.fy * ((1 - s.fx) * v01 + s.fx * v11);
        out.set_raw(x, y, c, static_cast<float>(std::clamp(v, 0.0, 1.0)));
      }
    }
  return {std::move(out), std::move(mask)};
}

namespace {

template <typename Raster, typename Copy>
void warp_nearest_impl(const Raster& src, const FlowField& flow, Copy copy) {
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      if (!flow.valid(x, y)) continue;
      const double sx = flow.src_x(x, y), sy = flow.src_y(x, y);
      if (sx < -0.5 || sx > src.width() - 0.5 || sy < -0.5 || sy > src.height() - 0.5) continue;
      const int ix = std::clamp(static_cast<int>(std::lround(sx)), 0, src.width() - 1);
      const int iy = std::clamp(static_cast<int>(std::lround(sy)), 0, src.height() - 1);
      copy(x, y, ix, iy);
    }
}

}  // namespace

ParseMap warp_nearest(const ParseMap& src, const FlowField& flow) {
  ParseMap out(flow.width(), flow.height());
  warp_nearest_impl(src, flow,
                    [&](int x, int y, int sx, int sy) { out.set(x, y, src.at(sx, sy)); });
  return out;
}

IuvMap warp_nearest(const IuvMap& src, const FlowField& flow) {
  IuvMap out(flow.width(), flow.height());
  warp_nearest_impl(src, flow, [&](int x, int y, int sx, int sy) {
    out.set(x, y, src.part(sx, sy), src.u(sx, sy), src.v(sx, sy));
  });
  return out;
}

BinaryMask warp_nearest(const BinaryMask& src, const FlowField& flow) {
  BinaryMask out(flow.width(), flow.height());
  warp_nearest_impl(src, flow,
                    [&](int x, int y, int sx, int sy) { out.set(x, y, src.at(sx, sy)); });
  return out;
}

FlowField affine_to_flow(const AffineParams& params, int width, int height) {
  return flow_from_backward_map(forward_matrix(params, width, height).inverted(), width, height);
}

FlowField affine_inverse_flow(const AffineParams& params, int width, int height) {
  return flow_from_backward_map(forward_matrix(params, width, height), width, height);
}

FlowField compose_flows(const FlowField& outer, const FlowField& inner) {
  FlowField out(outer.width(), outer.height());
  for (int y = 0; y < outer.height(); ++y)
    for (int x = 0; x < outer.width(); ++x) {
      if (!outer.valid(x, y)) continue;
      const SamplePos s =
          locate(outer.src_x(x, y), outer.src_y(x, y), inner.width(), inner.height());
      if (!s.ok) continue;
      // Never interpolate across validity discontinuities. Corners with zero
      // weight are not sampled, so integer hits need only their own pixel.
      const bool need_x1 = s.fx > 0.0, need_y1 = s.fy > 0.0;
      if (!inner.valid(s.x0, s.y0) || (need_x1 && !inner.valid(s.x1, s.y0)) ||
          (need_y1 && !inner.valid(s.x0, s.y1)) ||
          (need_x1 && need_y1 && !inner.valid(s.x1, s.y1)))
        continue;
      const auto lerp2 = [&](auto get) {
        return (1 - s.fy) * ((1 - s.fx) * get(s.x0, s.y0) + s.fx * get(s.x1, s.y0)) +
               s.fy * ((1 - s.fx) * get(s.x0, s.y1) + s.fx * get(s.x1, s.y1));
      };
      const double sx = lerp2([&](int i, int j) { return static_cast<double>(inner.src_x(i, j)); });
      const double sy = lerp2([&](int i, int j) { return static_cast<double>(inner.src_y(i, j)); });
      out.set(x, y, static_cast<float>(sx), static_cast<float>(sy));
    }
  return out;
}

FlowField identity_flow(int width, int height) {
  FlowField flow(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      flow.set(x, y, static_cast<float>(x), static_cast<float>(y));
  return flow;
}

}  // namespace tryon
