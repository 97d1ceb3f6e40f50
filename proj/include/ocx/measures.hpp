#pragma once

#include <span>

#include "ocx/model.hpp"

namespace ocx {

// Floor applied to the discriminant before logs and divisions so scores stay
// finite and ordering-preserving.
inline constexpr double kScoreFloor = 1e-300;

// First-layer effective distances and the pooled output of the two-layer
// network equivalent of the outlierness measure.
//   t-Student:    h_j = (a + ||x-u_j||^q) / alpha_j,   o = harmonic mean of h
//   exponential:  h_j = -log(alpha_j) + ||x-u_j||^q / (q sigma^q),
//                 o = -LSE(-h)
struct Activations {
  std::vector<double> h;
  double o = 0.0;
  KernelFamily family = KernelFamily::kExponential;
};

// i(x) = g(x): bounded by k(0), decays to zero away from the data.
double inlierness(const OneClassModel& model, std::span<const double> x);

// o(x) = -log g(x) (exponential) or m / g(x) (t-Student), with g floored.
double outlierness(const OneClassModel& model, std::span<const double> x);

Activations detection_activations(const OneClassModel& model, std::span<const double> x);

// m / sum(1/v). Entries must be positive.
double harmonic_mean(std::span<const double> v);

// -log sum exp(-h_j), stabilised around min(h).
double neg_lse_pool(std::span<const double> h);

// Pools the activations with the family's soft min-pooling.
double pool_activations(const Activations& acts);

// Computes outlierness through the detection + pooling composition. Agrees
// with outlierness() up to floating error, and stays accurate far from the
// data where the direct discriminant underflows.
double outlierness_via_network(const OneClassModel& model, std::span<const double> x);

}  // namespace ocx
