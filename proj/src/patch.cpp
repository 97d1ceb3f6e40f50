#include "ocx/patch.hpp"

#include <algorithm>
#include <random>

#include "ocx/errors.hpp"
#include "ocx/explain.hpp"
#include "ocx/measures.hpp"
#include "ocx/rng.hpp"
#include "ocx/util.hpp"

namespace ocx {

namespace {

void validate_config(const Image& image, const PatchConfig& cfg) {
  if (cfg.patch < 1 || cfg.stride < 1 || cfg.subsample < 1) {
    throw ParameterError("patch, stride and subsample must be at least 1");
  }
  if (image.height < cfg.patch || image.width < cfg.patch) {
    throw ShapeError("image is smaller than the patch size");
  }
  if (cfg.channels != 0 && cfg.channels != image.channels) {
    throw ShapeError("configured channel count does not match the image");
  }
}

}  // namespace

PatchSet extract_patches(const Image& image, const PatchConfig& cfg) {
  validate_config(image, cfg);
  const std::size_t p = cfg.patch, c = image.channels;
  PatchSet set;
  std::vector<double> buffer(p * p * c);
  for (std::size_t y = 0; y + p <= image.height; y += cfg.stride) {
    for (std::size_t x = 0; x + p <= image.width; x += cfg.stride) {
      std::size_t k = 0;
      for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t col = 0; col < p; ++col) {
          for (std::size_t ch = 0; ch < c; ++ch) {
            buffer[k++] = image.at(y + r, x + col, ch);
          }
        }
      }
      set.vectors.push_row(buffer);
      set.positions.emplace_back(y, x);
    }
  }
  return set;
}

OneClassModel fit_image_model(std::span<const Image> images, const PatchConfig& cfg,
                              KernelSpec kernel, double nu,
                              const ImageFitOptions& options) {
  if (images.empty()) throw ParameterError("no images given");
  Matrix all;
  for (const Image& image : images) {
    PatchSet set = extract_patches(image, cfg);
    for (std::size_t r = 0; r < set.vectors.rows(); ++r) {
      all.push_row(set.vectors.row(r));
    }
  }
  if (all.rows() < 2) throw ParameterError("need at least two training patches");

  Matrix training;
  if (all.rows() > cfg.subsample) {
    std::mt19937_64 gen(cfg.seed);
    auto perm = rng::permutation(all.rows(), gen);
    perm.resize(cfg.subsample);
    std::sort(perm.begin(), perm.end());
    for (std::size_t idx : perm) training.push_row(all.row(idx));
  } else {
    training = std::move(all);
  }

  if (options.auto_sigma) {
    if (kernel.family != KernelFamily::kExponential) {
      throw ParameterError("automatic bandwidth applies to exponential kernels only");
    }
    kernel.sigma = bandwidth_heuristic(training, options.sigma_quantile);
  }
  return train(training, kernel, nu, options.train);
}

double image_outlierness(const OneClassModel& model, const Image& image,
                         const PatchConfig& cfg) {
  const PatchSet set = extract_patches(image, cfg);
  double total = 0.0;
  for (std::size_t t = 0; t < set.vectors.rows(); ++t) {
    total += outlierness(model, set.vectors.row(t));
  }
  return total;
}

ImageHeatmap image_relevance(const OneClassModel& model, const Image& image,
                             const PatchConfig& cfg, unsigned threads) {
  const PatchSet set = extract_patches(image, cfg);
  const std::size_t count = set.vectors.rows();
  const std::size_t p = cfg.patch, c = image.channels;

  // Each patch map is computed independently, then merged in patch order so
  // the result does not depend on the thread count.
  std::vector<Heatmap> maps(count);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      maps[t] = input_relevance(model, set.vectors.row(t));
    }
  });

  ImageHeatmap out;
  out.height = image.height;
  out.width = image.width;
  out.channels = c;
  out.grid.assign(image.size(), 0.0);
  for (std::size_t t = 0; t < count; ++t) {
    const auto [y, x] = set.positions[t];
    std::size_t k = 0;
    for (std::size_t r = 0; r < p; ++r) {
      for (std::size_t col = 0; col < p; ++col) {
        for (std::size_t ch = 0; ch < c; ++ch) {
          out.grid[((y + r) * image.width + (x + col)) * c + ch] += maps[t].r[k++];
        }
      }
    }
  }
  for (double v : out.grid) out.total += v;
  return out;
}

}  // namespace ocx
