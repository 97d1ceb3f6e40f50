#pragma once

// Independent reference computations used to pin expected test values. These
// stay deliberately separate from the library code paths they check: naive
// summation orders, extended precision, brute-force search and numerical
// integration instead of closed forms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "ocx/model.hpp"

namespace oracle {

// Discriminant re-summed in extended precision with Neumaier compensation.
inline double discriminant_highprec(const ocx::OneClassModel& model,
                                    std::span<const double> x) {
  long double sum = 0.0L, comp = 0.0L;
  for (std::size_t j = 0; j < model.sv_count(); ++j) {
    const auto u = model.support_vectors.row(j);
    long double sq = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double z = static_cast<long double>(x[i]) - u[i];
      sq += z * z;
    }
    const long double dist = sqrtl(sq);
    long double k;
    if (model.kernel.family == ocx::KernelFamily::kExponential) {
      k = expl(-powl(dist, model.kernel.q) /
               (static_cast<long double>(model.kernel.q) *
                powl(model.kernel.sigma, model.kernel.q)));
    } else {
      k = 1.0L / (static_cast<long double>(model.kernel.a) + powl(dist, model.kernel.q));
    }
    const long double term = static_cast<long double>(model.alphas[j]) * k;
    const long double t = sum + term;
    comp += (fabsl(sum) >= fabsl(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return static_cast<double>(sum + comp);
}

// Central finite differences of a scalar function.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    double step = 1e-5) {
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = point[i];
    point[i] = keep + step;
    const double hi = f(point);
    point[i] = keep - step;
    const double lo = f(point);
    point[i] = keep;
    grad[i] = (hi - lo) / (2.0 * step);
  }
  return grad;
}

// Brute-force minimiser of 1/2 a'Ka over the simplex with a box bound, for
// two variables: a = (t, 1-t).
inline std::vector<double> simplex_grid_minimum_2(const std::vector<std::vector<double>>& K,
                                                  double bound, std::size_t steps = 200001) {
  double best_obj = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) / static_cast<double>(steps - 1);
    const double u = 1.0 - t;
    if (t > bound || u > bound) continue;
    const double obj =
        0.5 * (t * t * K[0][0] + 2.0 * t * u * K[0][1] + u * u * K[1][1]);
    if (obj < best_obj) {
      best_obj = obj;
      best_t = t;
    }
  }
  return {best_t, 1.0 - best_t};
}

// Per-unit relevance modelled as an affine function of the powered distance,
// R_j(x) = C_j ||x-u_j||^q + D_j, with the multiplicative factors treated as
// constants. Reconstructed here from first principles in long double.
struct AffineUnit {
  long double C = 0.0L;
  long double D = 0.0L;
};

inline std::vector<AffineUnit> affine_units(const ocx::OneClassModel& model,
                                            std::span<const double> x) {
  const std::size_t m = model.sv_count();
  std::vector<long double> dq(m), h(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto u = model.support_vectors.row(j);
    long double sq = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double z = static_cast<long double>(x[i]) - u[i];
      sq += z * z;
    }
    dq[j] = powl(sqrtl(sq), model.kernel.q);
  }

  std::vector<AffineUnit> units(m);
  if (model.kernel.family == ocx::KernelFamily::kTStudent) {
    for (std::size_t j = 0; j < m; ++j) {
      h[j] = (static_cast<long double>(model.kernel.a) + dq[j]) / model.alphas[j];
    }
    long double inv_sum = 0.0L;
    for (std::size_t j = 0; j < m; ++j) inv_sum += 1.0L / h[j];
    for (std::size_t j = 0; j < m; ++j) {
      const long double c =
          static_cast<long double>(m) / ((h[j] * inv_sum) * (h[j] * inv_sum));
      units[j].C = c / model.alphas[j];
      units[j].D = c * model.kernel.a / model.alphas[j];
    }
  } else {
    const long double scale = static_cast<long double>(model.kernel.q) *
                              powl(model.kernel.sigma, model.kernel.q);
    for (std::size_t j = 0; j < m; ++j) {
      h[j] = -logl(static_cast<long double>(model.alphas[j])) + dq[j] / scale;
    }
    const long double h_min = *std::min_element(h.begin(), h.end());
    long double w_sum = 0.0L;
    for (std::size_t j = 0; j < m; ++j) w_sum += expl(-(h[j] - h_min));
    const long double o = h_min - logl(w_sum);
    for (std::size_t j = 0; j < m; ++j) {
      const long double p = expl(-(h[j] - h_min)) / w_sum;
      const long double eps = o - h[j];
      units[j].C = p / scale;
      // R_j = p (d_j + eps - log alpha) with d_j = dq/scale
      units[j].D = p * (eps - logl(static_cast<long double>(model.alphas[j])));
    }
  }
  return units;
}

// Relevance on the inputs by trapezoid integration of each unit's gradient
// along the segment from its root (or minimum) point to x.
inline std::vector<double> integrated_gradients_numeric(const ocx::OneClassModel& model,
                                                        std::span<const double> x,
                                                        std::size_t steps = 100000) {
  const std::size_t m = model.sv_count();
  const std::size_t d = x.size();
  const long double q = model.kernel.q;
  const auto units = affine_units(model, x);

  std::vector<double> total(d, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto u = model.support_vectors.row(j);
    std::vector<long double> z(d);
    long double sq = 0.0L;
    for (std::size_t i = 0; i < d; ++i) {
      z[i] = static_cast<long double>(x[i]) - u[i];
      sq += z[i] * z[i];
    }
    const long double norm = sqrtl(sq);
    if (norm == 0.0L) continue;

    // Root of C||z||^q + D on the segment when D < 0, else the minimum at u.
    long double r = 0.0L;
    if (units[j].D < 0.0L) {
      const long double rq = (-units[j].D / units[j].C) / powl(norm, q);
      r = powl(std::min(rq, 1.0L), 1.0L / q);
    }

    // grad R_j at s(t) = (r + t(1-r))||z|| along the fixed direction z/||z||:
    // C q s^{q-1} zhat. Trapezoid over t in [0,1], then times (x - root)_i.
    long double profile = 0.0L;
    for (std::size_t s = 0; s <= steps; ++s) {
      const long double t = static_cast<long double>(s) / steps;
      const long double dist = (r + t * (1.0L - r)) * norm;
      const long double value = units[j].C * q * powl(dist, q - 1.0L);
      profile += (s == 0 || s == steps) ? 0.5L * value : value;
    }
    profile /= static_cast<long double>(steps);
    for (std::size_t i = 0; i < d; ++i) {
      const long double zhat = z[i] / norm;
      total[i] += static_cast<double>((1.0L - r) * z[i] * profile * zhat);
    }
  }
  return total;
}

// Score sequence recomputed from scratch: rebuild the masked difference
// matrix at every step and evaluate the outlier measure directly.
inline std::vector<double> flip_scores_naive(const ocx::OneClassModel& model,
                                             std::span<const double> x,
                                             const std::vector<std::size_t>& order) {
  const std::size_t d = x.size();
  const std::size_t m = model.sv_count();
  std::vector<bool> zeroed(d, false);
  std::vector<double> scores;
  for (std::size_t k = 0; k <= d; ++k) {
    double g = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto u = model.support_vectors.row(j);
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        if (zeroed[i]) continue;
        const double z = x[i] - u[i];
        sq += z * z;
      }
      const double dq = std::pow(std::sqrt(sq), model.kernel.q);
      if (model.kernel.family == ocx::KernelFamily::kExponential) {
        g += model.alphas[j] *
             std::exp(-dq / (model.kernel.q * std::pow(model.kernel.sigma, model.kernel.q)));
      } else {
        g += model.alphas[j] / (model.kernel.a + dq);
      }
    }
    g = std::max(g, 1e-300);
    scores.push_back(model.kernel.family == ocx::KernelFamily::kExponential
                         ? -std::log(g)
                         : static_cast<double>(m) / g);
    if (k < d) zeroed[order[k]] = true;
  }
  return scores;
}

}  // namespace oracle
