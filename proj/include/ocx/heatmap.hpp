#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

namespace ocx {

// Per-input-variable relevance scores with their total. `shape` is set when
// the variables form an H x W x C grid (channel-last flattening).
struct Heatmap {
  std::vector<double> r;
  double total = 0.0;
  std::optional<std::array<std::size_t, 3>> shape;
};

// CSV rows "index,relevance", one per variable, no header.
void write_heatmap_csv(const Heatmap& map, const std::filesystem::path& path);
Heatmap read_heatmap_csv(const std::filesystem::path& path);

}  // namespace ocx
