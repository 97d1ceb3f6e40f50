#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ocx/heatmap.hpp"
#include "ocx/image.hpp"
#include "ocx/model.hpp"
#include "ocx/trainer.hpp"

namespace ocx {

struct PatchConfig {
  std::size_t patch = 7;        // side length in pixels
  std::size_t stride = 1;
  std::size_t channels = 0;     // 0 = take from the image
  std::size_t subsample = 30000;  // cap on training patches
  std::uint64_t seed = 0;
};

// Flattened patch vectors (channel-last) with their top-left positions,
// windows enumerated row-major.
struct PatchSet {
  Matrix vectors;
  std::vector<std::pair<std::size_t, std::size_t>> positions;  // (row, col)
};

PatchSet extract_patches(const Image& image, const PatchConfig& cfg);

struct ImageFitOptions {
  bool auto_sigma = false;      // bandwidth from nearest-neighbour distances
  double sigma_quantile = 0.1;
  TrainOptions train;
};

// Trains a one-class model on (subsampled) patch vectors drawn from the
// given images. Subsampling is without replacement with the config seed.
OneClassModel fit_image_model(std::span<const Image> images, const PatchConfig& cfg,
                              KernelSpec kernel, double nu,
                              const ImageFitOptions& options = {});

// Sum of per-patch outlier scores.
double image_outlierness(const OneClassModel& model, const Image& image,
                         const PatchConfig& cfg);

// Pixel grid of accumulated relevance; overlapping patches add up.
struct ImageHeatmap {
  std::size_t height = 0, width = 0, channels = 1;
  std::vector<double> grid;
  double total = 0.0;

  Heatmap flatten() const {
    Heatmap map;
    map.r = grid;
    map.total = total;
    map.shape = {{height, width, channels}};
    return map;
  }
};

// Redistributes each patch's outlier score onto its pixels and accumulates
// the per-patch maps into the global grid. Patch explanations may run on
// several threads; accumulation order is fixed.
ImageHeatmap image_relevance(const OneClassModel& model, const Image& image,
                             const PatchConfig& cfg, unsigned threads = 1);

}  // namespace ocx
