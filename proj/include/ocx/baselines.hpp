#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ocx/heatmap.hpp"
#include "ocx/image.hpp"
#include "ocx/model.hpp"

namespace ocx {

// Squared locally evaluated partial derivatives of the outlier score.
Heatmap sensitivity(const OneClassModel& model, std::span<const double> x);

// Elementwise squared difference to the nearest support vector (lowest index
// wins ties).
Heatmap nn_map(const OneClassModel& model, std::span<const double> x);

// Elementwise squared difference to the coefficient-weighted mean support
// vector.
Heatmap ev_map(const OneClassModel& model, std::span<const double> x);

// Sobel gradient magnitude with replicate padding; RGB input is reduced to
// grayscale by the unweighted channel mean. One relevance entry per pixel.
Heatmap sobel_map(const Image& image);

// Uniform random permutation of 0..d-1 from a seeded generator.
std::vector<std::size_t> random_order(std::size_t d, std::uint64_t seed);

// Diagonal multivariate normal fitted by maximum likelihood; each variance
// carries the regularizer lambda.
struct MvnModel {
  std::vector<double> mu;
  std::vector<double> var;
  double lambda = 0.0;
};

MvnModel mvn_fit(const Matrix& data, double lambda);

// Relevance R_i = (x_i - mu_i)^2 / (2 var_i); sums to NLL(x) - NLL(mu).
Heatmap mvn_decompose(const MvnModel& mvn, std::span<const double> x);

// The non-decomposable zero-order term NLL(mu).
double mvn_zero_order(const MvnModel& mvn);

}  // namespace ocx
