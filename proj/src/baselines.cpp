#include "ocx/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ocx/errors.hpp"
#include "ocx/explain.hpp"
#include "ocx/rng.hpp"

namespace ocx {

Heatmap sensitivity(const OneClassModel& model, std::span<const double> x) {
  const auto grad = sa_gradient(model, x);
  Heatmap map;
  map.r.resize(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    map.r[i] = grad[i] * grad[i];
    map.total += map.r[i];
  }
  return map;
}

Heatmap nn_map(const OneClassModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw ShapeError("input dimension does not match the model");
  }
  std::size_t best = 0;
  double best_sq = squared_distance(x, model.support_vectors.row(0));
  for (std::size_t j = 1; j < model.sv_count(); ++j) {
    const double sq = squared_distance(x, model.support_vectors.row(j));
    if (sq < best_sq) {
      best_sq = sq;
      best = j;
    }
  }
  const auto u = model.support_vectors.row(best);
  Heatmap map;
  map.r.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - u[i];
    map.r[i] = z * z;
    map.total += map.r[i];
  }
  return map;
}

Heatmap ev_map(const OneClassModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw ShapeError("input dimension does not match the model");
  }
  std::vector<double> mean(x.size(), 0.0);
  for (std::size_t j = 0; j < model.sv_count(); ++j) {
    const auto u = model.support_vectors.row(j);
    for (std::size_t i = 0; i < x.size(); ++i) mean[i] += model.alphas[j] * u[i];
  }
  Heatmap map;
  map.r.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - mean[i];
    map.r[i] = z * z;
    map.total += map.r[i];
  }
  return map;
}

Heatmap sobel_map(const Image& image) {
  const std::size_t h = image.height, w = image.width;
  if (h == 0 || w == 0) throw ShapeError("empty image");

  // Grayscale by unweighted channel mean.
  std::vector<double> gray(h * w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double v = 0.0;
      for (std::size_t c = 0; c < image.channels; ++c) v += image.at(y, x, c);
      gray[y * w + x] = v / static_cast<double>(image.channels);
    }
  }

  const auto pixel = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
    y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(h) - 1);
    x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(w) - 1);
    return gray[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
  };

  Heatmap map;
  map.r.resize(h * w);
  map.shape = {{h, w, 1}};
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(h); ++y) {
    for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(w); ++x) {
      const double gx = -pixel(y - 1, x - 1) + pixel(y - 1, x + 1)
                        - 2.0 * pixel(y, x - 1) + 2.0 * pixel(y, x + 1)
                        - pixel(y + 1, x - 1) + pixel(y + 1, x + 1);
      const double gy = -pixel(y - 1, x - 1) - 2.0 * pixel(y - 1, x) - pixel(y - 1, x + 1)
                        + pixel(y + 1, x - 1) + 2.0 * pixel(y + 1, x) + pixel(y + 1, x + 1);
      const double mag = std::hypot(gx, gy);
      map.r[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] = mag;
      map.total += mag;
    }
  }
  return map;
}

std::vector<std::size_t> random_order(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return rng::permutation(d, gen);
}

MvnModel mvn_fit(const Matrix& data, double lambda) {
  if (data.rows() < 1) throw ParameterError("mvn_fit needs at least one sample");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  const std::size_t n = data.rows(), d = data.cols();
  MvnModel mvn;
  mvn.lambda = lambda;
  mvn.mu.assign(d, 0.0);
  mvn.var.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i < d; ++i) mvn.mu[i] += row[i];
  }
  for (double& m : mvn.mu) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double z = row[i] - mvn.mu[i];
      mvn.var[i] += z * z;
    }
  }
  for (double& v : mvn.var) v = v / static_cast<double>(n) + lambda;
  return mvn;
}

Heatmap mvn_decompose(const MvnModel& mvn, std::span<const double> x) {
  if (x.size() != mvn.mu.size()) {
    throw ShapeError("input dimension does not match the density");
  }
  Heatmap map;
  map.r.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - mvn.mu[i];
    map.r[i] = z * z / (2.0 * mvn.var[i]);
    map.total += map.r[i];
  }
  return map;
}

double mvn_zero_order(const MvnModel& mvn) {
  double nll = 0.0;
  for (double v : mvn.var) nll += std::log(2.0 * std::numbers::pi * v);
  return 0.5 * nll;
}

}  // namespace ocx
