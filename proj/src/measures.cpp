#include "ocx/measures.hpp"

#include <algorithm>
#include <cmath>

#include "ocx/errors.hpp"

namespace ocx {

double inlierness(const OneClassModel& model, std::span<const double> x) {
  return discriminant(model, x);
}

double outlierness(const OneClassModel& model, std::span<const double> x) {
  const double g = std::max(discriminant(model, x), kScoreFloor);
  if (model.kernel.family == KernelFamily::kExponential) return -std::log(g);
  return static_cast<double>(model.sv_count()) / g;
}

Activations detection_activations(const OneClassModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw ShapeError("input dimension does not match the model");
  }
  const std::size_t m = model.sv_count();
  Activations acts;
  acts.family = model.kernel.family;
  acts.h.resize(m);
  if (model.kernel.family == KernelFamily::kExponential) {
    const double scale = model.kernel.q * std::pow(model.kernel.sigma, model.kernel.q);
    for (std::size_t j = 0; j < m; ++j) {
      if (!(model.alphas[j] > 0.0)) {
        throw DomainError("effective distances need positive coefficients");
      }
      const double dq = pow_distance(x, model.support_vectors.row(j), model.kernel.q);
      acts.h[j] = -std::log(model.alphas[j]) + dq / scale;
    }
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(model.alphas[j] > 0.0)) {
        throw DomainError("effective distances need positive coefficients");
      }
      const double dq = pow_distance(x, model.support_vectors.row(j), model.kernel.q);
      acts.h[j] = (model.kernel.a + dq) / model.alphas[j];
    }
  }
  acts.o = pool_activations(acts);
  return acts;
}

double harmonic_mean(std::span<const double> v) {
  if (v.empty()) throw DomainError("harmonic mean of an empty vector");
  double inv_sum = 0.0;
  for (double value : v) {
    if (!(value > 0.0)) throw DomainError("harmonic mean needs positive entries");
    inv_sum += 1.0 / value;
  }
  return static_cast<double>(v.size()) / std::max(inv_sum, kScoreFloor);
}

double neg_lse_pool(std::span<const double> h) {
  if (h.empty()) throw DomainError("pooling an empty vector");
  const double h_min = *std::min_element(h.begin(), h.end());
  double sum = 0.0;
  for (double value : h) sum += std::exp(-(value - h_min));
  return h_min - std::log(sum);
}

double pool_activations(const Activations& acts) {
  if (acts.family == KernelFamily::kExponential) return neg_lse_pool(acts.h);
  return harmonic_mean(acts.h);
}

double outlierness_via_network(const OneClassModel& model, std::span<const double> x) {
  return detection_activations(model, x).o;
}

}  // namespace ocx
