#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocx/kernels.hpp"
#include "ocx/matrix.hpp"

namespace ocx {

// Trained one-class model: a mixture of radial basis functions centred at
// support vectors. Coefficients are positive and sum to one.
struct OneClassModel {
  Matrix support_vectors;       // m x d
  std::vector<double> alphas;   // length m
  KernelSpec kernel;
  double nu = 0.5;
  double rho = 0.0;             // decision offset
  std::size_t n_train = 0;      // size of the training set (not serialized)

  std::size_t sv_count() const { return support_vectors.rows(); }
  std::size_t dim() const { return support_vectors.cols(); }
};

enum class Decision { kInlier, kOutlier };

// g(x) = sum_j alpha_j k(||x - u_j||). Large for typical points.
double discriminant(const OneClassModel& model, std::span<const double> x);

// Inlier iff g(x) >= rho.
Decision decide(const OneClassModel& model, std::span<const double> x);

std::string model_to_json(const OneClassModel& model);
OneClassModel model_from_json(std::string_view text);

void save_model(const OneClassModel& model, const std::filesystem::path& path);
OneClassModel load_model(const std::filesystem::path& path);

}  // namespace ocx
