#include "tryon/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "tryon/warp.hpp"

namespace tryon {

namespace {

FeaturePlane grayscale(const ImageBuffer& img) {
  FeaturePlane p{img.width(), img.height(), {}};
  p.values.resize(static_cast<size_t>(img.width()) * img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      float v = 0;
      for (int c = 0; c < img.channels(); ++c) v += img.at(x, y, c);
      p.values[static_cast<size_t>(y) * img.width() + x] = v / img.channels();
    }
  return p;
}

FeaturePlane downsample2(const FeaturePlane& p) {
  const int w = std::max(1, p.width / 2), h = std::max(1, p.height / 2);
  FeaturePlane out{w, h, std::vector<float>(static_cast<size_t>(w) * h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int x0 = 2 * x, y0 = 2 * y;
      const int x1 = std::min(x0 + 1, p.width - 1), y1 = std::min(y0 + 1, p.height - 1);
      const float s = p.values[static_cast<size_t>(y0) * p.width + x0] +
                      p.values[static_cast<size_t>(y0) * p.width + x1] +
                      p.values[static_cast<size_t>(y1) * p.width + x0] +
                      p.values[static_cast<size_t>(y1) * p.width + x1];
      out.values[static_cast<size_t>(y) * w + x] = s / 4.0f;
    }
  return out;
}

FeaturePlane grad_x(const FeaturePlane& p) {
  FeaturePlane out{p.width, p.height, std::vector<float>(p.values.size(), 0.0f)};
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x + 1 < p.width; ++x) {
      const size_t i = static_cast<size_t>(y) * p.width + x;
      out.values[i] = p.values[i + 1] - p.values[i];
    }
  return out;
}

FeaturePlane grad_y(const FeaturePlane& p) {
  FeaturePlane out{p.width, p.height, std::vector<float>(p.values.size(), 0.0f)};
  for (int y = 0; y + 1 < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      const size_t i = static_cast<size_t>(y) * p.width + x;
      out.values[i] = p.values[i + p.width] - p.values[i];
    }
  return out;
}

}  // namespace

std::vector<FeaturePlane> PyramidFeatureExtractor::extract(const ImageBuffer& image) const {
  std::vector<FeaturePlane> out;
  FeaturePlane level = grayscale(image);
  for (int l = 0; l < levels_; ++l) {
    out.push_back(level);
    out.push_back(grad_x(level));
    out.push_back(grad_y(level));
    if (l + 1 < levels_) level = downsample2(level);
  }
  return out;
}

double tv_loss(const FlowField& flow, bool* no_pairs) {
  // Smoothness is measured on the displacement field (src minus pixel
  // position), so an identity flow costs nothing.
  const auto dx = [&](int x, int y) { return static_cast<double>(flow.src_x(x, y)) - x; };
  const auto dy = [&](int x, int y) { return static_cast<double>(flow.src_y(x, y)) - y; };
  double sum = 0;
  size_t pairs = 0;
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      if (!flow.valid(x, y)) continue;
      if (x + 1 < flow.width() && flow.valid(x + 1, y)) {
        sum += std::abs(dx(x + 1, y) - dx(x, y)) + std::abs(dy(x + 1, y) - dy(x, y));
        ++pairs;
      }
      if (y + 1 < flow.height() && flow.valid(x, y + 1)) {
        sum += std::abs(dx(x, y + 1) - dx(x, y)) + std::abs(dy(x, y + 1) - dy(x, y));
        ++pairs;
      }
    }
  if (no_pairs) *no_pairs = (pairs == 0);
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

double l1_recon(const ImageBuffer& a, const ImageBuffer& b, const BinaryMask* region) {
  if (!a.same_dims(b)) throw std::invalid_argument("l1_recon: dimensions mismatch");
  if (region && (region->width() != a.width() || region->height() != a.height()))
    throw std::invalid_argument("l1_recon: region dimensions mismatch");
  double sum = 0;
  size_t n = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) {
      if (region && !region->at(x, y)) continue;
      for (int c = 0; c < a.channels(); ++c)
        sum += std::abs(static_cast<double>(a.at(x, y, c)) - b.at(x, y, c));
      n += a.channels();
    }
  if (n == 0) throw std::invalid_argument("l1_recon: empty region");
  return sum / static_cast<double>(n);
}

double perceptual_loss(const ImageBuffer& a, const ImageBuffer& b,
                       const FeatureExtractor& extractor) {
  if (!a.same_dims(b)) throw std::invalid_argument("perceptual_loss: dimensions mismatch");
  const auto fa = extractor.extract(a);
  const auto fb = extractor.extract(b);
  if (fa.size() != fb.size()) throw std::logic_error("perceptual_loss: extractor plane mismatch");
  double total = 0;
  for (size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].values.size() != fb[i].values.size())
      throw std::logic_error("perceptual_loss: extractor shape mismatch");
    double sum = 0;
    for (size_t j = 0; j < fa[i].values.size(); ++j)
      sum += std::abs(static_cast<double>(fa[i].values[j]) - fb[i].values[j]);
    total += sum / static_cast<double>(fa[i].values.size());
  }
  return total;
}

LossReport corrector_objective(const TrainingExample& example, const FlowField& corrected_flow,
                               const FeatureExtractor& extractor) {
  LossReport r;
  r.tv = tv_loss(corrected_flow);
  const WarpResult warped = warp_bilinear(example.perturbed_image, corrected_flow);
  r.l1 = l1_recon(example.target_image, warped.image, &warped.mask);
  // The perceptual term sees both images masked to the warp's valid region.
  ImageBuffer ma = example.target_image;
  ImageBuffer mb = warped.image;
  for (int y = 0; y < ma.height(); ++y)
    for (int x = 0; x < ma.width(); ++x)
      if (!warped.mask.at(x, y))
        for (int c = 0; c < ma.channels(); ++c) {
          ma.set_raw(x, y, c, 0.0f);
          mb.set_raw(x, y, c, 0.0f);
        }
  r.perceptual = perceptual_loss(ma, mb, extractor);
  r.total = r.tv + r.l1 + r.perceptual;
  return r;
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_dims(b)) throw std::invalid_argument("ssim: dimensions mismatch");
  constexpr int kWin = 11;
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  if (a.width() < kWin || a.height() < kWin)
    throw std::invalid_argument("ssim: image smaller than 11x11 window");

  const FeaturePlane ga = grayscale(a), gb = grayscale(b);
  const int w = ga.width, h = ga.height;

  double window[kWin][kWin];
  {
    double norm = 0;
    for (int i = 0; i < kWin; ++i)
      for (int j = 0; j < kWin; ++j) {
        const double dy = i - kWin / 2, dx = j - kWin / 2;
        window[i][j] = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
        norm += window[i][j];
      }
    for (int i = 0; i < kWin; ++i)
      for (int j = 0; j < kWin; ++j) window[i][j] /= norm;
  }

  double accum = 0;
  size_t count = 0;
  for (int y = 0; y + kWin <= h; ++y)
    for (int x = 0; x + kWin <= w; ++x) {
      double mu1 = 0, mu2 = 0, s11 = 0, s22 = 0, s12 = 0;
      for (int i = 0; i < kWin; ++i)
        for (int j = 0; j < kWin; ++j) {
          const double wgt = window[i][j];
          const double v1 = ga.values[static_cast<size_t>(y + i) * w + (x + j)];
          const double v2 = gb.values[static_cast<size_t>(y + i) * w + (x + j)];
          mu1 += wgt * v1;
          mu2 += wgt * v2;
          s11 += wgt * v1 * v1;
          s22 += wgt * v2 * v2;
          s12 += wgt * v1 * v2;
        }
      const double var1 = s11 - mu1 * mu1;
      const double var2 = s22 - mu2 * mu2;
      const double cov = s12 - mu1 * mu2;
      const double num = (2.0 * mu1 * mu2 + kC1) * (2.0 * cov + kC2);
      const double den = (mu1 * mu1 + mu2 * mu2 + kC1) * (var1 + var2 + kC2);
      accum += num / den;
      ++count;
    }
  return accum / static_cast<double>(count);
}

}  // namespace tryon
