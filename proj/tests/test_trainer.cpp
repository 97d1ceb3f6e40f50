#include <doctest.h>

#include <cmath>
#include <random>

#include "ocx/errors.hpp"
#include "ocx/measures.hpp"
#include "ocx/model.hpp"
#include "ocx/rng.hpp"
#include "ocx/trainer.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ocx;

namespace {

Matrix two_points() {
  Matrix data;
  data.push_row(std::vector<double>{-1.0, 0.0});
  data.push_row(std::vector<double>{1.0, 0.0});
  return data;
}

}  // namespace

TEST_CASE("two symmetric points split the mass evenly") {
  const Matrix data = two_points();
  const auto model = train(data, KernelSpec::gaussian(1.0), 1.0);
  REQUIRE(model.sv_count() == 2);
  CHECK(model.alphas[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(model.alphas[1] == doctest::Approx(0.5).epsilon(1e-12));

  // Grid search over the one-dimensional simplex agrees.
  const double k01 = eval_kernel(KernelSpec::gaussian(1.0), 2.0);
  const auto best = oracle::simplex_grid_minimum_2({{1.0, k01}, {k01, 1.0}}, 1.0);
  CHECK(model.alphas[0] == doctest::Approx(best[0]).epsilon(1e-4));
}

TEST_CASE("solution matches a brute-force grid on asymmetric data") {
  Matrix data;
  data.push_row(std::vector<double>{0.0});
  data.push_row(std::vector<double>{1.5});
  const KernelSpec kernel = KernelSpec::laplacian(1.0);
  const auto model = train(data, kernel, 0.5);  // bound = 1, the full simplex

  std::vector<std::vector<double>> K(2, std::vector<double>(2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      K[i][j] = eval_kernel(kernel, std::abs(data(i, 0) - data(j, 0)));
    }
  }
  const auto best = oracle::simplex_grid_minimum_2(K, 1.0);
  REQUIRE(model.sv_count() == 2);
  CHECK(model.alphas[0] == doctest::Approx(best[0]).epsilon(1e-4));
  CHECK(model.alphas[1] == doctest::Approx(best[1]).epsilon(1e-4));
}

TEST_CASE("a fully duplicated sample collapses to one support vector") {
  Matrix data;
  for (int i = 0; i < 5; ++i) data.push_row(std::vector<double>{2.0, -3.0});
  const auto model = train(data, KernelSpec::gaussian(1.0), 0.2);  // bound = 1
  REQUIRE(model.sv_count() == 1);
  CHECK(model.alphas[0] == 1.0);
}

TEST_CASE("parameter validation") {
  const Matrix data = two_points();
  CHECK_THROWS_AS(train(data, KernelSpec::gaussian(1.0), 0.0), ParameterError);
  CHECK_THROWS_AS(train(data, KernelSpec::gaussian(1.0), 1.5), ParameterError);
  CHECK_THROWS_AS(train(data, KernelSpec::gaussian(1.0), 0.2), ParameterError);  // nu*n < 1
  Matrix one;
  one.push_row(std::vector<double>{0.0});
  CHECK_THROWS_AS(train(one, KernelSpec::gaussian(1.0), 1.0), ParameterError);
  TrainOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(train(data, KernelSpec::gaussian(1.0), 1.0, bad), ParameterError);
}

TEST_CASE("dual feasibility and KKT gap after training") {
  std::mt19937_64 gen(3);
  const Matrix data = support::gaussian_blob_matrix(gen, 120, {0.0, 0.0}, 1.0);
  const double nu = 0.3;
  TrainReport report;
  const auto model = train(data, KernelSpec::gaussian(1.0), nu, {}, &report);

  double sum = 0.0;
  const double bound = 1.0 / (nu * 120.0);
  for (double a : model.alphas) {
    REQUIRE(a > 0.0);
    REQUIRE(a <= bound + 1e-12);
    sum += a;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.converged);
  CHECK(report.kkt_gap <= 1e-6);
}

TEST_CASE("objective is non-increasing across pair updates") {
  std::mt19937_64 gen(5);
  const Matrix data = support::gaussian_blob_matrix(gen, 80, {1.0, -1.0, 0.5}, 1.5);
  TrainOptions options;
  options.record_objective = true;
  TrainReport report;
  train(data, KernelSpec::laplacian(1.0), 0.25, options, &report);
  REQUIRE(report.objective_trace.size() > 2);
  for (std::size_t i = 1; i < report.objective_trace.size(); ++i) {
    REQUIRE(report.objective_trace[i] <=
            report.objective_trace[i - 1] + 1e-12 * (1.0 + report.objective_trace[i - 1]));
  }
}

TEST_CASE("iteration cap raises a convergence error carrying the best iterate") {
  std::mt19937_64 gen(9);
  const Matrix data = support::gaussian_blob_matrix(gen, 60, {0.0, 0.0}, 1.0);
  TrainOptions options;
  options.max_iter = 1;
  try {
    train(data, KernelSpec::gaussian(0.7), 0.5, options);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    double sum = 0.0;
    for (double a : e.best_iterate.alphas) sum += a;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(e.report.converged);
  }
}

TEST_CASE("discriminant basics") {
  OneClassModel model;
  model.kernel = KernelSpec::gaussian(1.0);
  model.support_vectors.push_row(std::vector<double>{1.0, 2.0});
  model.alphas = {1.0};
  const std::vector<double> x{1.0, 2.0};
  CHECK(discriminant(model, x) == 1.0);

  OneClassModel twin;
  twin.kernel = KernelSpec::tstudent(2.0, 2.0);
  twin.support_vectors.push_row(std::vector<double>{0.0});
  twin.support_vectors.push_row(std::vector<double>{0.0});
  twin.alphas = {0.5, 0.5};
  const std::vector<double> origin{0.0};
  CHECK(discriminant(twin, origin) == doctest::Approx(0.5).epsilon(1e-15));  // k(0) = 1/2

  const std::vector<double> bad{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(discriminant(model, bad), ShapeError);
}

TEST_CASE("discriminant agrees with extended-precision resummation") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto family =
        trial % 2 == 0 ? KernelFamily::kExponential : KernelFamily::kTStudent;
    const auto model = support::random_model(gen, family, 2.0, 10, 6);
    const auto x = support::random_point(gen, model.dim());
    const double expected = oracle::discriminant_highprec(model, x);
    REQUIRE(discriminant(model, x) ==
            doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("decisions at the boundary and far away") {
  std::mt19937_64 gen(13);
  const Matrix data = support::gaussian_blob_matrix(gen, 100, {0.0, 0.0}, 1.0);
  const double nu = 0.2;
  const auto model = train(data, KernelSpec::gaussian(1.0), nu);

  const double bound = 1.0 / (nu * 100.0);
  bool found_free = false;
  for (std::size_t j = 0; j < model.sv_count(); ++j) {
    if (model.alphas[j] < bound * 0.999) {
      // free support vector: sits on the boundary, so it is an inlier
      CHECK(decide(model, model.support_vectors.row(j)) == Decision::kInlier);
      found_free = true;
      break;
    }
  }
  CHECK(found_free);
  const std::vector<double> far{1e6, -1e6};
  CHECK(decide(model, far) == Decision::kOutlier);
}

TEST_CASE("the outlier fraction tracks nu on a blob") {
  std::mt19937_64 gen(17);
  const Matrix data = support::gaussian_blob_matrix(gen, 500, {0.0, 0.0}, 1.0);
  const double nu = 0.1;
  const auto model = train(data, KernelSpec::gaussian(0.8), nu);
  std::size_t outliers = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (decide(model, data.row(i)) == Decision::kOutlier) ++outliers;
  }
  const double fraction = static_cast<double>(outliers) / 500.0;
  CHECK(fraction > nu - 0.05);
  CHECK(fraction < nu + 0.05);
}

TEST_CASE("model JSON round-trips bit-exactly") {
  std::mt19937_64 gen(31);
  const Matrix data = support::gaussian_blob_matrix(gen, 50, {0.3, -0.7}, 1.0);
  const auto model = train(data, KernelSpec::laplacian(0.9), 0.3);
  const auto restored = model_from_json(model_to_json(model));

  REQUIRE(restored.sv_count() == model.sv_count());
  CHECK(restored.rho == model.rho);
  CHECK(restored.nu == model.nu);
  CHECK(restored.kernel.sigma == model.kernel.sigma);
  for (std::size_t j = 0; j < model.sv_count(); ++j) {
    CHECK(restored.alphas[j] == model.alphas[j]);
    for (std::size_t i = 0; i < model.dim(); ++i) {
      CHECK(restored.support_vectors(j, i) == model.support_vectors(j, i));
    }
  }
}

TEST_CASE("kernel row cache computes rows lazily and evicts") {
  std::mt19937_64 gen(41);
  const Matrix data = support::gaussian_blob_matrix(gen, 30, {0.0}, 1.0);
  KernelRowCache cache(data, KernelSpec::gaussian(1.0), 4);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto row = cache.row(i);
    REQUIRE(row.size() == 30);
    REQUIRE(row[i] == 1.0);
  }
  const auto misses_before = cache.misses();
  cache.row(29);  // still resident
  CHECK(cache.misses() == misses_before);
  cache.row(0);  // long evicted
  CHECK(cache.misses() == misses_before + 1);
}
