#pragma once

#include <span>
#include <vector>

#include "ocx/heatmap.hpp"
#include "ocx/measures.hpp"
#include "ocx/model.hpp"

namespace ocx {

// Relevance of each support vector for one prediction, together with the
// decomposable part that flows on to the input variables.
//
// t-Student:    R_j = h_j c_j, where c_j keeps units that win the min-pool.
// exponential:  R_j = (h_j + eps_j) p_j with softmin weights p_j.
// Sum_j r = o (conservation); delta_j = r_j - max(0, D_j) >= 0.
struct SvRelevance {
  std::vector<double> r;
  std::vector<double> delta;
  double o = 0.0;
  KernelFamily family = KernelFamily::kExponential;
  std::vector<double> c;    // t-Student localization factors
  std::vector<double> p;    // exponential softmin weights
  std::vector<double> eps;  // exponential pooling offsets
};

// c_j = (1/m) H((h_j'/h_j)_j')^2; invariant under rescaling of h.
std::vector<double> student_localization(std::span<const double> h);

struct SoftminFactors {
  std::vector<double> p;
  std::vector<double> eps;
};

// p_j = exp(-h_j)/sum exp(-h_j'), eps_j = -LSE(-(h_j'-h_j)_j'); both are
// invariant under adding a constant to every activation.
SoftminFactors softmin_factors(std::span<const double> h);

// Redistributes the inlier score onto support vectors: r_j = alpha_j k_j.
SvRelevance explain_inlier(const OneClassModel& model, std::span<const double> x);

// Redistributes the outlier score onto support vectors.
SvRelevance sv_relevance(const OneClassModel& model, std::span<const double> x);

// The nonnegative part of each support vector's relevance that admits a
// root point, i.e. what reaches the input layer.
std::vector<double> decomposable_relevance(const OneClassModel& model,
                                           std::span<const double> x);

// Closed-form redistribution onto input variables:
//   R = sum_j [(x-u_j)/||x-u_j||]^2 (elementwise) * delta_j,
// with zero contribution from support vectors at zero distance.
Heatmap input_relevance(const OneClassModel& model, std::span<const double> x);

// Analytic gradient of the outlier score. Throws SingularPointError within
// 1e-12 of a support vector when q < 2.
std::vector<double> sa_gradient(const OneClassModel& model, std::span<const double> x);

}  // namespace ocx
