// Indexed vs exhaustive UV-correspondence flow at benchmark resolution.

#include <benchmark/benchmark.h>

#include <random>

#include "tryon/correspondence.hpp"
#include "tryon/raster.hpp"

namespace {

tryon::IuvMap random_iuv(std::mt19937_64& rng, int w, int h, int parts) {
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  tryon::IuvMap map(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (unit() < 0.1) continue;
      map.set(x, y, 1 + static_cast<int>(rng() % static_cast<uint64_t>(parts)),
              static_cast<float>(unit()), static_cast<float>(unit()));
    }
  return map;
}

// Per-pixel exhaustive scan, mirroring the test oracle.
tryon::FlowField brute_flow(const tryon::IuvMap& garment, const tryon::IuvMap& person,
                            double tau) {
  tryon::FlowField flow(person.width(), person.height());
  for (int y = 0; y < person.height(); ++y)
    for (int x = 0; x < person.width(); ++x) {
      const int part = person.part(x, y);
      if (part == 0) continue;
      double best_d2 = tau * tau;
      int bx = -1, by = -1;
      for (int sy = 0; sy < garment.height(); ++sy)
        for (int sx = 0; sx < garment.width(); ++sx) {
          if (garment.part(sx, sy) != part) continue;
          const double du = static_cast<double>(garment.u(sx, sy)) - person.u(x, y);
          const double dv = static_cast<double>(garment.v(sx, sy)) - person.v(x, y);
          const double d2 = du * du + dv * dv;
          if (d2 < best_d2) {
            best_d2 = d2;
            bx = sx;
            by = sy;
          }
        }
      if (bx >= 0) flow.set(x, y, static_cast<float>(bx), static_cast<float>(by));
    }
  return flow;
}

void BM_IndexedFlow(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int w = static_cast<int>(state.range(0));
  const int h = static_cast<int>(state.range(1));
  const auto garment = random_iuv(rng, w, h, 24);
  const auto person = random_iuv(rng, w, h, 24);
  tryon::CorrespondenceConfig cfg;
  cfg.fill_holes = false;
  for (auto _ : state) {
    auto r = tryon::naive_flow(garment, person, cfg);
    benchmark::DoNotOptimize(r.flow.valid_count());
  }
}
BENCHMARK(BM_IndexedFlow)->Args({64, 64})->Args({192, 256})->Unit(benchmark::kMillisecond);

void BM_BruteFlow(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int w = static_cast<int>(state.range(0));
  const int h = static_cast<int>(state.range(1));
  const auto garment = random_iuv(rng, w, h, 24);
  const auto person = random_iuv(rng, w, h, 24);
  for (auto _ : state) {
    auto f = brute_flow(garment, person, 0.05);
    benchmark::DoNotOptimize(f.valid_count());
  }
}
BENCHMARK(BM_BruteFlow)->Args({64, 64})->Args({192, 256})->Unit(benchmark::kMillisecond);

void BM_IndexBuild(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto garment = random_iuv(rng, 192, 256, 24);
  for (auto _ : state) {
    tryon::UvIndex index(garment, nullptr, 1.0 / 64.0);
    benchmark::DoNotOptimize(index.empty());
  }
}
BENCHMARK(BM_IndexBuild)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
