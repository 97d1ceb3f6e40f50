#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "ocx/heatmap.hpp"

namespace ocx {

// 8-bit image held as doubles in 0..255, row-major with channel-last layout.
struct Image {
  std::size_t height = 0, width = 0, channels = 1;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t c, double value = 0.0)
      : height(h), width(w), channels(c), pixels(h * w * c, value) {}

  double& at(std::size_t y, std::size_t x, std::size_t c) {
    return pixels[(y * width + x) * channels + c];
  }
  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels[(y * width + x) * channels + c];
  }
  std::size_t size() const { return pixels.size(); }
};

// Reads binary PGM (P5, grayscale) or PPM (P6, RGB), 8-bit.
Image read_pnm(const std::filesystem::path& path);

// Writes a single-channel image as binary PGM with maxval 255.
void write_pgm(const Image& image, const std::filesystem::path& path);

// Maps a relevance grid to an 8-bit grayscale image, min-max scaled per
// image. Multi-channel relevance is summed per pixel first.
Image render_relevance(const Heatmap& map, std::size_t height, std::size_t width,
                       std::size_t channels);

}  // namespace ocx
