#include "tryon/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tryon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

UvIndex::UvIndex(const IuvMap& garment, const BinaryMask* region, double epsilon)
    : epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("UvIndex: epsilon must be in (0,1]");
  if (region && (region->width() != garment.width() || region->height() != garment.height()))
    throw std::invalid_argument("UvIndex: region dimensions mismatch");
  grid_ = static_cast<int>(std::ceil(1.0 / epsilon));
  cells_.resize(static_cast<size_t>(IuvMap::kNumParts) * grid_ * grid_);
  part_present_.assign(IuvMap::kNumParts + 1, false);
  // Scan order (y, x) ascending keeps each cell sorted by the tie-break key.
  for (int y = 0; y < garment.height(); ++y)
    for (int x = 0; x < garment.width(); ++x) {
      const int part = garment.part(x, y);
      if (part == 0) continue;
      if (region && !region->at(x, y)) continue;
      const float u = garment.u(x, y), v = garment.v(x, y);
      const int cu = cell_of(u), cv = cell_of(v);
      cells_[(static_cast<size_t>(part - 1) * grid_ + cv) * grid_ + cu].push_back({x, y, u, v});
      part_present_[part] = true;
      ++entry_count_;
    }
}

int UvIndex::cell_of(double t) const {
  int c = static_cast<int>(t / epsilon_);
  return std::clamp(c, 0, grid_ - 1);
}

std::optional<UvMatch> UvIndex::query_nearest(int part, double u, double v, double tau) const {
  if (part < 1 || part > IuvMap::kNumParts || !part_present_[part]) return std::nullopt;
  const int cu = cell_of(u), cv = cell_of(v);

  double best_d2 = kInf;
  const UvEntry* best = nullptr;
  const double tau2 = tau * tau;

  auto consider = [&](const UvEntry& e) {
    const double du = static_cast<double>(e.u) - u;
    const double dv = static_cast<double>(e.v) - v;
    const double d2 = du * du + dv * dv;
    if (d2 < best_d2 ||
        (d2 == best_d2 && best && (e.y < best->y || (e.y == best->y && e.x < best->x))))
      best_d2 = d2, best = &e;
  };

  const int max_ring = grid_;  // degenerates to a full scan in the worst case
  for (int r = 0; r <= max_ring; ++r) {
    // Any point in a ring-r cell is at least (r-1)*epsilon away from the
    // query, so once that bound exceeds min(best, tau) the search is exact.
    const double ring_lb = std::max(0, r - 1) * epsilon_;
    if (ring_lb * ring_lb > std::min(best_d2, tau2)) break;
    const int lo_u = cu - r, hi_u = cu + r, lo_v = cv - r, hi_v = cv + r;
    for (int j = std::max(0, lo_v); j <= std::min(grid_ - 1, hi_v); ++j) {
      const bool edge_row = (j == lo_v || j == hi_v);
      for (int i = std::max(0, lo_u); i <= std::min(grid_ - 1, hi_u); ++i) {
        if (!edge_row && i != lo_u && i != hi_u) continue;
        for (const UvEntry& e : cell(part, i, j)) consider(e);
      }
    }
  }

  if (!best || best_d2 > tau2) return std::nullopt;
  return UvMatch{best->x, best->y, std::sqrt(best_d2)};
}

NaiveFlowResult naive_flow(const UvIndex& index, const IuvMap& person,
                           const CorrespondenceConfig& config) {
  FlowField flow(person.width(), person.height());
  if (index.empty()) return {std::move(flow), true};

  for (int y = 0; y < person.height(); ++y)
    for (int x = 0; x < person.width(); ++x) {
      const int part = person.part(x, y);
      if (part == 0) continue;
      if (auto m = index.query_nearest(part, person.u(x, y), person.v(x, y), config.tau))
        flow.set(x, y, static_cast<float>(m->x), static_cast<float>(m->y));
    }

  if (config.fill_holes && flow.valid_count() > 0) {
    BinaryMask body(person.width(), person.height());
    for (int y = 0; y < person.height(); ++y)
      for (int x = 0; x < person.width(); ++x)
        if (person.part(x, y) != 0) body.set(x, y, true);
    flow = fill_holes(flow, body);
  }
  return {std::move(flow), false};
}

NaiveFlowResult naive_flow(const IuvMap& garment, const IuvMap& person,
                           const CorrespondenceConfig& config, const BinaryMask* garment_region) {
  return naive_flow(UvIndex(garment, garment_region, config.epsilon), person, config);
}

namespace {

// "No site" sentinel; finite so the parabola envelope stays well-defined.
// Any reachable squared distance is far below it.
constexpr double kNoSite = 1e12;

// Felzenszwalb-Huttenlocher 1D squared distance transform.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n) {
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

FlowField fill_holes(const FlowField& flow, const BinaryMask& region) {
  if (flow.width() != region.width() || flow.height() != region.height())
    throw std::invalid_argument("fill_holes: dimensions mismatch");
  if (flow.valid_count() == 0)
    throw std::runtime_error("fill_holes: flow has no valid pixel");

  const int w = flow.width(), h = flow.height();

  // Exact squared Euclidean distance to the nearest valid pixel.
  std::vector<double> dist(static_cast<size_t>(w) * h);
  {
    std::vector<double> col(h), dcol(h);
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) col[y] = flow.valid(x, y) ? 0.0 : kNoSite;
      edt_1d(col, dcol, h);
      for (int y = 0; y < h; ++y) dist[static_cast<size_t>(y) * w + x] = dcol[y];
    }
    std::vector<double> row(w), drow(w);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) row[x] = dist[static_cast<size_t>(y) * w + x];
      edt_1d(row, drow, w);
      for (int x = 0; x < w; ++x) dist[static_cast<size_t>(y) * w + x] = drow[x];
    }
  }

  FlowField out = flow;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (flow.valid(x, y) || !region.at(x, y)) continue;
      const double d2 = dist[static_cast<size_t>(y) * w + x];
      const int r = static_cast<int>(std::ceil(std::sqrt(d2)));
      // Enumerate lattice offsets at exactly d2 in (site_y, site_x) order:
      // dy ascending, then dx = -s before +s. The first valid hit is the
      // tie-break winner.
      bool done = false;
      for (int dy = -r; dy <= r && !done; ++dy) {
        const int sy = y + dy;
        if (sy < 0 || sy >= h) continue;
        const double rem = d2 - static_cast<double>(dy) * dy;
        if (rem < 0) continue;
        const int s = static_cast<int>(std::lround(std::sqrt(rem)));
        if (static_cast<double>(s) * s != rem) continue;
        for (const int dx : {-s, s}) {
          const int sx = x + dx;
          if (sx < 0 || sx >= w || !flow.valid(sx, sy)) continue;
          out.set(x, y, flow.src_x(sx, sy), flow.src_y(sx, sy));
          done = true;
          break;
        }
      }
      if (!done) throw std::logic_error("fill_holes: distance transform inconsistency");
    }
  return out;
}

}  // namespace tryon
