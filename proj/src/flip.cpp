#include "ocx/flip.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocx/errors.hpp"
#include "ocx/measures.hpp"
#include "ocx/rng.hpp"
#include "ocx/util.hpp"

namespace ocx {

namespace {

double score_from_squared_norms(const OneClassModel& model,
                                std::span<const double> sq) {
  double g = 0.0;
  for (std::size_t j = 0; j < sq.size(); ++j) {
    g += model.alphas[j] *
         eval_kernel_powdist(model.kernel, std::pow(sq[j], 0.5 * model.kernel.q));
  }
  g = std::max(g, kScoreFloor);
  if (model.kernel.family == KernelFamily::kExponential) return -std::log(g);
  return static_cast<double>(model.sv_count()) / g;
}

}  // namespace

FlipCurve flip_curve(const OneClassModel& model, std::span<const double> x,
                     std::vector<std::size_t> order, std::string method) {
  const std::size_t d = model.dim();
  const std::size_t m = model.sv_count();
  if (x.size() != d) throw ShapeError("input dimension does not match the model");
  {
    std::vector<bool> seen(d, false);
    if (order.size() != d) throw ParameterError("order must be a permutation of 0..d-1");
    for (std::size_t i : order) {
      if (i >= d || seen[i]) throw ParameterError("order must be a permutation of 0..d-1");
      seen[i] = true;
    }
  }

  // Column squared norms after k flips, built as suffix sums over the removal
  // order. Pure additions of squares keep every stage exact in the relative
  // sense and make the terminal norms exactly zero.
  std::vector<double> sq((d + 1) * m, 0.0);
  for (std::size_t k = d; k-- > 0;) {
    const std::size_t row = order[k];
    for (std::size_t j = 0; j < m; ++j) {
      const double z = x[row] - model.support_vectors(j, row);
      sq[k * m + j] = sq[(k + 1) * m + j] + z * z;
    }
  }

  FlipCurve curve;
  curve.order = std::move(order);
  curve.method = std::move(method);
  curve.scores.resize(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    curve.scores[k] = score_from_squared_norms(model, {sq.data() + k * m, m});
  }
  return curve;
}

double flip_auc(const FlipCurve& curve) {
  const std::size_t d = curve.scores.size() - 1;
  if (curve.scores[0] == 0.0) {
    throw UndefinedAucError("flip curve starts at zero score");
  }
  if (d == 0) return 1.0;
  double area = 0.0;
  for (std::size_t k = 1; k <= d; ++k) {
    area += 0.5 * (curve.scores[k - 1] + curve.scores[k]);
  }
  return area / (static_cast<double>(d) * curve.scores[0]);
}

std::vector<std::size_t> order_from_heatmap(const Heatmap& map) {
  std::vector<std::size_t> order(map.r.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return map.r[a] > map.r[b];
  });
  return order;
}

PanelGenerator gaussian_blob(std::vector<double> center, double stddev) {
  PanelGenerator gen;
  gen.dim = center.size();
  gen.sample = [center = std::move(center), stddev](std::mt19937_64& g,
                                                    std::span<double> out) {
    for (std::size_t i = 0; i < center.size(); ++i) {
      out[i] = center[i] + stddev * rng::gaussian(g);
    }
  };
  return gen;
}

TwoPanelData gen_two_panel(std::size_t n, const PanelGenerator& gen_a,
                           const PanelGenerator& gen_b, std::uint64_t seed) {
  if (gen_a.dim != gen_b.dim) {
    throw ShapeError("panel generators must produce the same width");
  }
  const std::size_t w = gen_a.dim;
  std::mt19937_64 g(seed);
  TwoPanelData data;
  data.split = w;

  std::vector<double> row(2 * w, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    gen_a.sample(g, {row.data(), w});
    data.inlier.push_row(row);
  }
  for (std::size_t i = 0; i < n; ++i) {
    gen_a.sample(g, {row.data(), w});
    gen_b.sample(g, {row.data() + w, w});
    data.type1.push_row(row);
  }
  for (std::size_t i = 0; i < n; ++i) {
    gen_b.sample(g, {row.data(), w});
    gen_b.sample(g, {row.data() + w, w});
    data.type2.push_row(row);
  }
  return data;
}

std::pair<double, double> panel_shares(const Heatmap& map, std::size_t split_index) {
  if (split_index > map.r.size()) throw ShapeError("split index out of range");
  double left = 0.0, right = 0.0;
  for (std::size_t i = 0; i < map.r.size(); ++i) {
    (i < split_index ? left : right) += map.r[i];
  }
  return {left, right};
}

void write_flip_curve_csv(const FlipCurve& curve, const std::filesystem::path& path) {
  const std::size_t d = curve.scores.size() - 1;
  std::string out;
  for (std::size_t k = 0; k <= d; ++k) {
    const double fraction =
        d == 0 ? 1.0 : static_cast<double>(k) / static_cast<double>(d);
    out += std::to_string(k);
    out += ',';
    out += format_double(fraction);
    out += ',';
    out += format_double(curve.scores[k]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace ocx
