#include "ocx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ocx/errors.hpp"

namespace ocx {

void KernelSpec::validate() const {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw ParameterError("kernel exponent q must be a finite real >= 1");
  }
  if (family == KernelFamily::kExponential) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ParameterError("exponential kernel bandwidth sigma must be positive");
    }
  } else {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ParameterError("t-Student kernel offset a must be positive");
    }
  }
}

double eval_kernel_powdist(const KernelSpec& spec, double powdist) {
  spec.validate();
  if (!(powdist >= 0.0)) throw DomainError("powered distance must be nonnegative");
  if (spec.family == KernelFamily::kExponential) {
    return std::exp(-powdist / (spec.q * std::pow(spec.sigma, spec.q)));
  }
  return 1.0 / (spec.a + powdist);
}

double eval_kernel(const KernelSpec& spec, double dist) {
  if (!(dist >= 0.0)) throw DomainError("kernel distance must be nonnegative");
  return eval_kernel_powdist(spec, std::pow(dist, spec.q));
}

double squared_distance(std::span<const double> x, std::span<const double> u) {
  if (x.size() != u.size()) {
    throw ShapeError("vectors must have the same dimension");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - u[i];
    sq += z * z;
  }
  return sq;
}

double pow_distance(std::span<const double> x, std::span<const double> u, double q) {
  return std::pow(squared_distance(x, u), 0.5 * q);
}

double bandwidth_heuristic(const Matrix& data, double quantile) {
  const std::size_t n = data.rows();
  if (n < 2) throw ParameterError("nearest-neighbour heuristic needs at least two rows");
  if (!(quantile > 0.0) || !(quantile <= 1.0)) {
    throw ParameterError("quantile must lie in (0, 1]");
  }

  std::vector<double> nn(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, squared_distance(data.row(i), data.row(j)));
    }
    nn[i] = std::sqrt(best);
  }
  std::sort(nn.begin(), nn.end());

  const double pos = quantile * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  const double value = nn[lo] + frac * (nn[hi] - nn[lo]);

  if (value <= 0.0) {
    throw DegenerateBandwidthError(
        "all nearest-neighbour distances are zero at the requested quantile");
  }
  return value;
}

}  // namespace ocx
