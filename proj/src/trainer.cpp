#include "ocx/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ocx {

KernelRowCache::KernelRowCache(const Matrix& data, const KernelSpec& kernel,
                               std::size_t max_rows)
    : data_(data), kernel_(kernel), max_rows_(std::max<std::size_t>(max_rows, 2)) {
  kernel_.validate();
}

std::span<const double> KernelRowCache::row(std::size_t i) {
  if (auto it = index_.find(i); it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
  }
  ++misses_;
  if (lru_.size() >= max_rows_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  const std::size_t n = data_.rows();
  std::vector<double> values(n);
  const auto xi = data_.row(i);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = eval_kernel_powdist(kernel_, pow_distance(xi, data_.row(j), kernel_.q));
  }
  lru_.emplace_front(i, std::move(values));
  index_[i] = lru_.begin();
  return lru_.front().second;
}

namespace {

OneClassModel build_model(const Matrix& data, const KernelSpec& kernel, double nu,
                          double rho, const std::vector<double>& alpha) {
  constexpr double kPrune = 1e-12;

  OneClassModel model;
  model.kernel = kernel;
  model.nu = nu;
  model.rho = rho;
  model.n_train = data.rows();

  // Merge exact duplicate rows so support vectors are distinct; the
  // discriminant is unchanged because the kernel only sees the row value.
  // Rows keep their first-appearance order.
  std::map<std::vector<double>, std::size_t> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= kPrune) continue;
    const auto r = data.row(i);
    std::vector<double> row(r.begin(), r.end());
    if (auto it = seen.find(row); it != seen.end()) {
      model.alphas[it->second] += alpha[i];
    } else {
      seen.emplace(std::move(row), model.alphas.size());
      model.support_vectors.push_row(r);
      model.alphas.push_back(alpha[i]);
    }
    total += alpha[i];
  }
  for (double& a : model.alphas) a /= total;
  // absorb rounding into the largest coefficient so the sum is exactly one
  double sum = 0.0;
  for (double a : model.alphas) sum += a;
  *std::max_element(model.alphas.begin(), model.alphas.end()) -= sum - 1.0;
  return model;
}

}  // namespace

OneClassModel train(const Matrix& data, const KernelSpec& kernel, double nu,
                    const TrainOptions& options, TrainReport* report) {
  kernel.validate();
  const std::size_t n = data.rows();
  if (n < 2) throw ParameterError("training needs at least two samples");
  if (!(nu > 0.0) || !(nu <= 1.0)) throw ParameterError("nu must lie in (0, 1]");
  if (!(options.tol > 0.0)) throw ParameterError("tol must be positive");
  const double nf = nu * static_cast<double>(n);
  if (nf < 1.0) {
    throw ParameterError("nu * n must be at least 1; the box bound would exceed 1");
  }
  const double bound = 1.0 / nf;

  // Feasible start: the first floor(nu n) coefficients sit at the bound, one
  // carries the fractional remainder, the rest are zero.
  std::vector<double> alpha(n, 0.0);
  const auto whole = static_cast<std::size_t>(nf);
  for (std::size_t i = 0; i < whole && i < n; ++i) alpha[i] = bound;
  if (whole < n) alpha[whole] = (nf - static_cast<double>(whole)) * bound;

  const std::size_t budget_rows =
      std::max<std::size_t>(2, options.cache_budget_bytes / (sizeof(double) * n));
  KernelRowCache cache(data, kernel, std::min(budget_rows, n));

  // grad = K alpha, maintained incrementally.
  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] <= 0.0) continue;
    const auto ki = cache.row(i);
    for (std::size_t j = 0; j < n; ++j) grad[j] += alpha[i] * ki[j];
  }

  const double diag = kernel.peak();  // K_ii is constant for radial kernels
  TrainReport rep;
  bool converged = false;
  double gap = std::numeric_limits<double>::infinity();

  while (true) {
    // Maximal violating pair: raise the coefficient with the smallest
    // gradient below the bound, lower the one with the largest above zero.
    std::size_t up = n, low = n;
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] < bound && grad[t] < g_min) {
        g_min = grad[t];
        up = t;
      }
      if (alpha[t] > 0.0 && grad[t] > g_max) {
        g_max = grad[t];
        low = t;
      }
    }
    gap = (up < n && low < n) ? g_max - g_min : 0.0;
    if (gap <= options.tol) {
      converged = true;
      break;
    }
    if (rep.iterations >= options.max_iter) break;

    if (options.record_objective) {
      double obj = 0.0;
      for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * grad[t];
      rep.objective_trace.push_back(0.5 * obj);
    }

    const auto ki = cache.row(up);
    const auto kj = cache.row(low);
    const double eta = 2.0 * diag - 2.0 * ki[low];
    const double cap_up = bound - alpha[up];
    const double cap_low = alpha[low];
    double step = gap / std::max(eta, 1e-300);
    step = std::min({step, cap_up, cap_low});

    alpha[up] = (step == cap_up) ? bound : alpha[up] + step;
    alpha[low] = (step == cap_low) ? 0.0 : alpha[low] - step;
    for (std::size_t t = 0; t < n; ++t) grad[t] += step * (ki[t] - kj[t]);
    ++rep.iterations;
  }

  rep.kkt_gap = gap;
  rep.converged = converged;
  if (options.record_objective) {
    double obj = 0.0;
    for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * grad[t];
    rep.objective_trace.push_back(0.5 * obj);
  }

  // Offset: the discriminant equals rho at free support vectors.
  double rho;
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < bound) {
      free_sum += grad[t];
      ++free_count;
    }
  }
  if (free_count > 0) {
    rho = free_sum / static_cast<double>(free_count);
  } else {
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] < bound) ub = std::min(ub, grad[t]);
      if (alpha[t] > 0.0) lb = std::max(lb, grad[t]);
    }
    rho = std::isfinite(ub) ? 0.5 * (ub + lb) : lb;
  }

  OneClassModel model = build_model(data, kernel, nu, rho, alpha);
  if (report) *report = rep;
  if (!converged) {
    throw ConvergenceError("solver did not reach the requested tolerance within " +
                               std::to_string(options.max_iter) + " pair updates",
                           std::move(model), std::move(rep));
  }
  return model;
}

}  // namespace ocx
