#include "ocx/explain.hpp"

#include <algorithm>
#include <cmath>

#include "ocx/errors.hpp"

namespace ocx {

std::vector<double> student_localization(std::span<const double> h) {
  const auto m = static_cast<double>(h.size());
  double inv_sum = 0.0;
  for (double value : h) {
    if (!(value > 0.0)) throw DomainError("effective distances must be positive");
    inv_sum += 1.0 / value;
  }
  std::vector<double> c(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double t = h[j] * inv_sum;
    c[j] = m / (t * t);
  }
  return c;
}

SoftminFactors softmin_factors(std::span<const double> h) {
  if (h.empty()) throw DomainError("softmin of an empty vector");
  const std::size_t m = h.size();
  const auto min_it = std::min_element(h.begin(), h.end());
  const double h_min = *min_it;
  double w_sum = 0.0;
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    w[j] = std::exp(-(h[j] - h_min));
    w_sum += w[j];
  }
  SoftminFactors f;
  f.p.resize(m);
  f.eps.resize(m);
  const double log_w = std::log(w_sum);
  for (std::size_t j = 0; j < m; ++j) {
    f.p[j] = w[j] / w_sum;
    f.eps[j] = (h_min - h[j]) - log_w;
  }
  // The pool-dominating unit has eps in [-log m, 0] analytically.
  const auto lead = static_cast<std::size_t>(min_it - h.begin());
  f.eps[lead] = std::clamp(f.eps[lead], -std::log(static_cast<double>(m)), 0.0);
  return f;
}

SvRelevance explain_inlier(const OneClassModel& model, std::span<const double> x) {
  const std::size_t m = model.sv_count();
  SvRelevance rel;
  rel.family = model.kernel.family;
  rel.r.resize(m);
  rel.delta.assign(m, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double dq = pow_distance(x, model.support_vectors.row(j), model.kernel.q);
    rel.r[j] = model.alphas[j] * eval_kernel_powdist(model.kernel, dq);
    total += rel.r[j];
  }
  rel.o = total;
  return rel;
}

namespace {

// Everything sv_relevance, decomposable_relevance and input_relevance share:
// powered distances, activations, family factors, relevances and deltas.
struct RelevanceParts {
  SvRelevance rel;
  std::vector<double> dq;  // ||x - u_j||^q
};

RelevanceParts relevance_parts(const OneClassModel& model, std::span<const double> x) {
  const Activations acts = detection_activations(model, x);
  const std::size_t m = acts.h.size();

  RelevanceParts parts;
  parts.dq.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    parts.dq[j] = pow_distance(x, model.support_vectors.row(j), model.kernel.q);
  }

  SvRelevance& rel = parts.rel;
  rel.family = acts.family;
  rel.o = acts.o;
  rel.r.resize(m);
  rel.delta.resize(m);

  if (acts.family == KernelFamily::kTStudent) {
    rel.c = student_localization(acts.h);
    double inv_sum = 0.0;
    for (double value : acts.h) inv_sum += 1.0 / value;
    for (std::size_t j = 0; j < m; ++j) {
      rel.r[j] = acts.h[j] * rel.c[j];
      const double soft = (1.0 / acts.h[j]) / std::max(inv_sum, kScoreFloor);
      rel.delta[j] = soft * (parts.dq[j] / (model.kernel.a + parts.dq[j])) * acts.o;
    }
  } else {
    auto factors = softmin_factors(acts.h);
    rel.p = std::move(factors.p);
    rel.eps = std::move(factors.eps);
    const double scale = model.kernel.q * std::pow(model.kernel.sigma, model.kernel.q);
    // Keep the total consistent with the floored direct measure; the lower
    // clamp only folds away negative rounding dust near perfect inliers.
    const double o_capped = std::clamp(acts.o, 0.0, -std::log(kScoreFloor));
    for (std::size_t j = 0; j < m; ++j) {
      rel.r[j] = (acts.h[j] + rel.eps[j]) * rel.p[j];
      rel.delta[j] = rel.p[j] * std::min(o_capped, parts.dq[j] / scale);
    }
  }
  return parts;
}

}  // namespace

SvRelevance sv_relevance(const OneClassModel& model, std::span<const double> x) {
  return relevance_parts(model, x).rel;
}

std::vector<double> decomposable_relevance(const OneClassModel& model,
                                           std::span<const double> x) {
  return relevance_parts(model, x).rel.delta;
}

Heatmap input_relevance(const OneClassModel& model, std::span<const double> x) {
  const RelevanceParts parts = relevance_parts(model, x);
  const std::size_t m = model.sv_count();
  const std::size_t d = x.size();

  Heatmap map;
  map.r.assign(d, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto u = model.support_vectors.row(j);
    const double sq = squared_distance(x, u);
    if (sq == 0.0) continue;  // delta_j is zero there as well
    const double weight = parts.rel.delta[j] / sq;
    for (std::size_t i = 0; i < d; ++i) {
      const double z = x[i] - u[i];
      map.r[i] += weight * z * z;
    }
  }
  for (double value : map.r) map.total += value;
  return map;
}

std::vector<double> sa_gradient(const OneClassModel& model, std::span<const double> x) {
  const Activations acts = detection_activations(model, x);
  const std::size_t m = acts.h.size();
  const std::size_t d = x.size();
  const double q = model.kernel.q;

  // Per-unit scalar factors: grad = sum_j coeff_j (x - u_j).
  std::vector<double> coeff(m);
  std::vector<double> dist(m);
  for (std::size_t j = 0; j < m; ++j) {
    dist[j] = std::sqrt(squared_distance(x, model.support_vectors.row(j)));
    if (q < 2.0 && dist[j] < 1e-12) {
      throw SingularPointError("gradient is singular at a support vector for q < 2");
    }
  }
  if (model.kernel.family == KernelFamily::kExponential) {
    const auto factors = softmin_factors(acts.h);
    const double sigma_q = std::pow(model.kernel.sigma, q);
    for (std::size_t j = 0; j < m; ++j) {
      coeff[j] = factors.p[j] * std::pow(dist[j], q - 2.0) / sigma_q;
    }
  } else {
    const auto c = student_localization(acts.h);
    for (std::size_t j = 0; j < m; ++j) {
      coeff[j] = c[j] * q * std::pow(dist[j], q - 2.0) / model.alphas[j];
    }
  }

  std::vector<double> grad(d, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto u = model.support_vectors.row(j);
    for (std::size_t i = 0; i < d; ++i) grad[i] += coeff[j] * (x[i] - u[i]);
  }
  return grad;
}

}  // namespace ocx
