#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "ocx/errors.hpp"
#include "ocx/model.hpp"

namespace ocx {

struct TrainOptions {
  double tol = 1e-6;                 // KKT violation threshold
  std::uint64_t max_iter = 10'000'000;  // pair updates
  std::size_t cache_budget_bytes = 256ull << 20;
  bool record_objective = false;     // keep a per-iteration objective trace
};

struct TrainReport {
  std::uint64_t iterations = 0;
  double kkt_gap = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;
};

// Thrown when the solver exhausts max_iter; carries the best iterate.
struct ConvergenceError : Error {
  ConvergenceError(std::string message, OneClassModel model, TrainReport rep)
      : Error(std::move(message)), best_iterate(std::move(model)), report(std::move(rep)) {}
  OneClassModel best_iterate;
  TrainReport report;
};

// Kernel matrix rows computed on demand with least-recently-used eviction.
// Row spans stay valid until at least `capacity - 1` other rows are touched.
class KernelRowCache {
 public:
  KernelRowCache(const Matrix& data, const KernelSpec& kernel, std::size_t max_rows);

  std::span<const double> row(std::size_t i);
  std::size_t capacity() const { return max_rows_; }
  std::uint64_t misses() const { return misses_; }

 private:
  const Matrix& data_;
  KernelSpec kernel_;
  std::size_t max_rows_;
  std::uint64_t misses_ = 0;
  using Slot = std::pair<std::size_t, std::vector<double>>;
  std::list<Slot> lru_;  // front = most recent
  std::unordered_map<std::size_t, std::list<Slot>::iterator> index_;
};

// Solves the one-class dual  min 1/2 a'Ka  s.t.  sum a = 1, 0 <= a_i <= 1/(nu n)
// by maximal-violating-pair coordinate updates. Ties pick the lowest index.
// Support vectors with coefficients below 1e-12 are dropped and the remaining
// coefficients renormalised to sum exactly to one; duplicate rows are merged.
OneClassModel train(const Matrix& data, const KernelSpec& kernel, double nu,
                    const TrainOptions& options = {}, TrainReport* report = nullptr);

}  // namespace ocx
