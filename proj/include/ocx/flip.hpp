#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ocx/heatmap.hpp"
#include "ocx/model.hpp"

namespace ocx {

// Outlier score after zeroing 0..d rows of the difference feature matrix
// Psi(x), whose columns are x - u_j.
struct FlipCurve {
  std::vector<double> scores;        // length d + 1
  std::vector<std::size_t> order;    // flip order over input variables
  std::string method;
};

// Zeroes rows of Psi(x) in the given order, recomputing the outlier score
// after each step from g(Psi) = sum_j alpha_j k(||Psi_:,j||). After the last
// flip no deviation from any support vector remains.
FlipCurve flip_curve(const OneClassModel& model, std::span<const double> x,
                     std::vector<std::size_t> order, std::string method = "");

// Trapezoidal area under score vs fraction flipped, normalised by the
// starting score. Throws UndefinedAucError when scores[0] is zero.
double flip_auc(const FlipCurve& curve);

// Descending relevance; ties keep the lower index first.
std::vector<std::size_t> order_from_heatmap(const Heatmap& map);

// Draws one panel vector per call.
struct PanelGenerator {
  std::size_t dim = 0;
  std::function<void(std::mt19937_64&, std::span<double>)> sample;
};

// Axis-aligned Gaussian blob around `center`.
PanelGenerator gaussian_blob(std::vector<double> center, double stddev);

// Two horizontally concatenated panels:
//   inlier  = (A, blank)    type I = (A, B)    type II = (B, B')
struct TwoPanelData {
  Matrix inlier, type1, type2;
  std::size_t split = 0;  // index where the right panel starts
};

TwoPanelData gen_two_panel(std::size_t n, const PanelGenerator& gen_a,
                           const PanelGenerator& gen_b, std::uint64_t seed);

// Relevance mass on each side of the split.
std::pair<double, double> panel_shares(const Heatmap& map, std::size_t split_index);

// CSV rows "k,fraction_flipped,score", no header.
void write_flip_curve_csv(const FlipCurve& curve, const std::filesystem::path& path);

}  // namespace ocx
