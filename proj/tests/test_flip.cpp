#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ocx/errors.hpp"
#include "ocx/explain.hpp"
#include "ocx/flip.hpp"
#include "ocx/measures.hpp"
#include "ocx/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ocx;

TEST_CASE("one-dimensional curves go straight to the terminal value") {
  OneClassModel model;
  model.kernel = KernelSpec::gaussian(1.0);
  model.support_vectors.push_row(std::vector<double>{2.0});
  model.alphas = {1.0};
  const std::vector<double> x{4.0};
  const auto curve = flip_curve(model, x, {0});
  REQUIRE(curve.scores.size() == 2);
  CHECK(curve.scores[0] == doctest::Approx(outlierness(model, x)).epsilon(1e-12));
  CHECK(curve.scores[1] == 0.0);
}

TEST_CASE("terminal values per family") {
  std::mt19937_64 gen(64);
  for (int trial = 0; trial < 60; ++trial) {
    const double q = (trial % 3 == 0) ? 1.0 : ((trial % 3 == 1) ? 2.0 : 4.0);
    const auto family =
        trial % 2 == 0 ? KernelFamily::kExponential : KernelFamily::kTStudent;
    const auto model = support::random_model(gen, family, q, 15, 8);
    const auto x = support::random_query(gen, model);
    std::vector<std::size_t> order(model.dim());
    std::iota(order.begin(), order.end(), 0);
    const auto curve = flip_curve(model, x, order);
    const double terminal = curve.scores.back();
    if (family == KernelFamily::kExponential) {
      REQUIRE(std::abs(terminal) <= 1e-9);
    } else {
      const double expected = static_cast<double>(model.sv_count()) * model.kernel.a;
      REQUIRE(std::abs(terminal - expected) <= 1e-9 * (1.0 + expected));
    }
  }
}

TEST_CASE("curves match a from-scratch recomputation at every step") {
  std::mt19937_64 gen(66);
  for (int trial = 0; trial < 40; ++trial) {
    const auto family =
        trial % 2 == 0 ? KernelFamily::kExponential : KernelFamily::kTStudent;
    const auto model = support::random_model(gen, family, 2.0, 12, 8);
    const auto x = support::random_query(gen, model);
    const auto order = order_from_heatmap(input_relevance(model, x));
    const auto curve = flip_curve(model, x, order);
    const auto naive = oracle::flip_scores_naive(model, x, order);
    REQUIRE(curve.scores.size() == naive.size());
    for (std::size_t k = 0; k < naive.size(); ++k) {
      REQUIRE(std::abs(curve.scores[k] - naive[k]) <= 1e-10 * (1.0 + std::abs(naive[k])));
    }
  }
}

TEST_CASE("flip order must be a permutation") {
  OneClassModel model;
  model.kernel = KernelSpec::gaussian(1.0);
  model.support_vectors.push_row(std::vector<double>{0.0, 0.0});
  model.alphas = {1.0};
  const std::vector<double> x{1.0, 2.0};
  CHECK_THROWS_AS(flip_curve(model, x, {0}), ParameterError);
  CHECK_THROWS_AS(flip_curve(model, x, {0, 0}), ParameterError);
  CHECK_THROWS_AS(flip_curve(model, x, {0, 2}), ParameterError);
}

TEST_CASE("area under the curve") {
  FlipCurve zero;
  zero.scores = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(flip_auc(zero), UndefinedAucError);

  FlipCurve linear;
  linear.scores = {4.0, 3.0, 2.0, 1.0, 0.0};
  CHECK(flip_auc(linear) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 gen(68);
  for (int trial = 0; trial < 50; ++trial) {
    FlipCurve curve;
    const std::size_t d = 2 + rng::below(gen, 20);
    curve.scores.resize(d + 1);
    for (double& s : curve.scores) s = rng::uniform(gen, 0.1, 10.0);
    // trapezoid re-evaluated straightforwardly
    long double area = 0.0L;
    for (std::size_t k = 1; k <= d; ++k) {
      area += 0.5L * (curve.scores[k - 1] + curve.scores[k]) / static_cast<long double>(d);
    }
    const double expected = static_cast<double>(area / curve.scores[0]);
    REQUIRE(flip_auc(curve) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("ordering by descending relevance with index ties") {
  Heatmap increasing;
  increasing.r = {1.0, 2.0, 3.0, 4.0};
  CHECK(order_from_heatmap(increasing) == std::vector<std::size_t>{3, 2, 1, 0});

  Heatmap equal;
  equal.r = {5.0, 5.0, 5.0};
  CHECK(order_from_heatmap(equal) == std::vector<std::size_t>{0, 1, 2});

  std::mt19937_64 gen(70);
  Heatmap random;
  random.r.resize(30);
  for (double& r : random.r) r = rng::uniform(gen, 0.0, 1.0);
  const auto order = order_from_heatmap(random);
  for (std::size_t k = 1; k < order.size(); ++k) {
    REQUIRE(random.r[order[k - 1]] >= random.r[order[k]]);
  }
}

TEST_CASE("two-panel generation") {
  const auto blank = gaussian_blob(std::vector<double>(4, 0.0), 0.0);
  const auto a = gaussian_blob(std::vector<double>(4, 2.0), 0.5);
  const auto b = gaussian_blob(std::vector<double>(4, 6.0), 0.5);

  const auto empty = gen_two_panel(0, a, b, 1);
  CHECK(empty.inlier.rows() == 0);
  CHECK(empty.type1.rows() == 0);
  CHECK(empty.type2.rows() == 0);

  const auto data = gen_two_panel(50, a, b, 2);
  REQUIRE(data.split == 4);
  REQUIRE(data.inlier.rows() == 50);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t k = 4; k < 8; ++k) REQUIRE(data.inlier(i, k) == 0.0);  // blank right
    for (std::size_t k = 0; k < 4; ++k) {
      REQUIRE(std::abs(data.inlier(i, k) - 2.0) < 4.0);   // class A left
      REQUIRE(std::abs(data.type1(i, k) - 2.0) < 4.0);    // class A left
      REQUIRE(std::abs(data.type1(i, k + 4) - 6.0) < 4.0);  // class B right
      REQUIRE(std::abs(data.type2(i, k) - 6.0) < 4.0);    // class B both sides
      REQUIRE(std::abs(data.type2(i, k + 4) - 6.0) < 4.0);
    }
  }

  const auto narrow = gaussian_blob(std::vector<double>(3, 0.0), 0.5);
  CHECK_THROWS_AS(gen_two_panel(5, a, narrow, 3), ShapeError);
}

TEST_CASE("panel shares") {
  Heatmap zero;
  zero.r = {0.0, 0.0, 0.0, 0.0};
  CHECK(panel_shares(zero, 2) == std::pair<double, double>{0.0, 0.0});

  Heatmap right_only;
  right_only.r = {0.0, 0.0, 1.5, 2.5};
  const auto [l, r] = panel_shares(right_only, 2);
  CHECK(l == 0.0);
  CHECK(r == 4.0);

  std::mt19937_64 gen(72);
  Heatmap random;
  random.r.resize(10);
  for (double& v : random.r) v = rng::uniform(gen, 0.0, 1.0);
  const auto [left, right] = panel_shares(random, 7);
  long double el = 0.0L, er = 0.0L;
  for (std::size_t i = 0; i < 7; ++i) el += random.r[i];
  for (std::size_t i = 7; i < 10; ++i) er += random.r[i];
  CHECK(left == doctest::Approx(static_cast<double>(el)).epsilon(1e-14));
  CHECK(right == doctest::Approx(static_cast<double>(er)).epsilon(1e-14));

  CHECK_THROWS_AS(panel_shares(random, 11), ShapeError);
}
