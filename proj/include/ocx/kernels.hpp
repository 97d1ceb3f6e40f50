#pragma once

#include <span>

#include "ocx/matrix.hpp"

namespace ocx {

enum class KernelFamily { kExponential, kTStudent };

// Radial kernel k(d) acting on the Euclidean distance between two points.
//   exponential: k(d) = exp(-d^q / (q sigma^q)),  q=1 Laplacian, q=2 Gaussian
//   t-Student:   k(d) = 1 / (a + d^q)
struct KernelSpec {
  KernelFamily family = KernelFamily::kExponential;
  double q = 2.0;
  double sigma = 1.0;  // bandwidth, exponential family only
  double a = 1.0;      // offset, t-Student family only

  static KernelSpec exponential(double q, double sigma) {
    return {KernelFamily::kExponential, q, sigma, 1.0};
  }
  static KernelSpec gaussian(double sigma) { return exponential(2.0, sigma); }
  static KernelSpec laplacian(double sigma) { return exponential(1.0, sigma); }
  static KernelSpec tstudent(double q, double a) {
    return {KernelFamily::kTStudent, q, 1.0, a};
  }

  // k(0), the peak value of the kernel.
  double peak() const { return family == KernelFamily::kExponential ? 1.0 : 1.0 / a; }

  // Throws ParameterError if any parameter is out of range.
  void validate() const;
};

// Evaluates the kernel at distance `dist` >= 0. Result lies in (0, k(0)]
// except for extreme distances where the exponential family underflows to 0.
double eval_kernel(const KernelSpec& spec, double dist);

// Same, but takes the powered distance d^q directly.
double eval_kernel_powdist(const KernelSpec& spec, double powdist);

// ||x - u||_2^q. Throws ShapeError when dimensions differ.
double pow_distance(std::span<const double> x, std::span<const double> u, double q);

// Squared Euclidean distance, shared by several call sites.
double squared_distance(std::span<const double> x, std::span<const double> u);

// Empirical quantile (linear interpolation) of the one-nearest-neighbour
// distance multiset of `data`. Throws DegenerateBandwidthError when the
// result is zero, i.e. duplicates dominate at the requested quantile.
double bandwidth_heuristic(const Matrix& data, double quantile);

}  // namespace ocx
