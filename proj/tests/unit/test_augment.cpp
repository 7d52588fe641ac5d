#include <doctest.h>

#include <cmath>

#include "learngraph/augment.hpp"
#include "learngraph/errors.hpp"
#include "support/testing.hpp"

using namespace lg;
using lg::testing::random_matrix;
using lg::testing::random_symmetric;

TEST_CASE("feature mask extremes") {
  Rng rng(1);
  Matrix x = random_matrix(4, 6, rng);
  CHECK(feature_mask(x, 0.0, rng) == x);
  CHECK(feature_mask(x, 1.0, rng) == Matrix(4, 6));
  CHECK_THROWS_AS(feature_mask(x, 1.5, rng), ConfigError);
  CHECK_THROWS_AS(feature_mask(x, -0.1, rng), ConfigError);
}

TEST_CASE("feature mask keeps or zeroes whole columns") {
  Rng rng(2);
  Matrix x = random_matrix(5, 8, rng, 0.5, 1.0);
  for (int draw = 0; draw < 100; ++draw) {
    Matrix m = feature_mask(x, 0.5, rng);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const bool kept = m(0, j) == x(0, j);
      for (std::size_t i = 0; i < x.rows(); ++i) CHECK(m(i, j) == (kept ? x(i, j) : 0.0));
    }
  }
}

TEST_CASE("edge drop extremes and symmetry") {
  Rng rng(3);
  Matrix a = random_symmetric(6, rng);
  CHECK(edge_drop(a, 0.0, rng) == a);
  Matrix diag_only = edge_drop(a, 1.0, rng);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(diag_only(i, j) == (i == j ? a(i, i) : 0.0));
  for (int draw = 0; draw < 100; ++draw) {
    Matrix d = edge_drop(a, 0.4, rng);
    CHECK(is_symmetric(d));
    for (std::size_t i = 0; i < d.size(); ++i) CHECK((d.values()[i] == 0.0 || d.values()[i] == a.values()[i]));
  }
  Matrix asym = Matrix::from_rows({{0, 1}, {0, 0}});
  CHECK_THROWS_AS(edge_drop(asym, 0.1, rng), ContractError);
}

TEST_CASE("edge drop keeps 1 - p of the off-diagonal mass on average") {
  Rng rng(4);
  const std::size_t n = 20;
  Matrix a = random_symmetric(n, rng);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += a(i, j);
  const double p = 0.3;
  const int trials = 1000;
  std::vector<double> fractions;
  for (int t = 0; t < trials; ++t) {
    Matrix d = edge_drop(a, p, rng);
    double kept = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) kept += d(i, j);
    fractions.push_back(kept / total);
  }
  double mean = 0.0;
  for (double f : fractions) mean += f;
  mean /= trials;
  double var = 0.0;
  for (double f : fractions) var += (f - mean) * (f - mean);
  const double sem = std::sqrt(var / (trials - 1) / trials);
  CHECK(std::abs(mean - (1.0 - p)) < 3.0 * sem);
}

TEST_CASE("augment_views") {
  Rng rng(5);
  Matrix s = random_symmetric(5, rng);
  Matrix anchor = Matrix::identity(5);
  Matrix x = random_matrix(5, 3, rng);
  {
    Tape tape;
    AugmentedViews v = augment_views(tape.constant(s), anchor, x, {0.0, 0.0, 0.0}, rng);
    CHECK(v.learner_adjacency.value() == s);
    CHECK(v.learner_features == x);
    CHECK(v.anchor_adjacency == anchor);
    CHECK(v.anchor_features == x);
  }
  {
    Tape tape;
    AugmentedViews v = augment_views(tape.constant(s), anchor, x, {1.0, 0.0, 0.0}, rng);
    CHECK(v.learner_features == Matrix(5, 3));
    CHECK(v.anchor_features == x);
  }
  auto draw = [&](std::uint64_t seed) {
    Rng r(seed);
    Tape tape;
    AugmentedViews v = augment_views(tape.constant(s), anchor, x, {0.5, 0.5, 0.5}, r);
    return std::make_tuple(v.learner_adjacency.value(), v.learner_features, v.anchor_adjacency, v.anchor_features);
  };
  CHECK(draw(77) == draw(77));
  Tape tape;
  CHECK_THROWS_AS(augment_views(tape.constant(s), Matrix::identity(4), x, {}, rng), DimensionError);
}

TEST_CASE("learner edge drop passes gradients through surviving entries") {
  Rng rng(6);
  Matrix a = random_symmetric(5, rng, 0.1, 1.0);
  Rng r1(9);
  Matrix dropped = edge_drop(a, 0.5, r1);
  Rng r2(9);
  Tape tape;
  Var v = tape.variable(a);
  Var d = edge_drop(v, 0.5, r2);
  CHECK(d.value() == dropped);
  tape.backward(sum(d));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(v.grad().values()[i] == (dropped.values()[i] != 0.0 ? 1.0 : 0.0));
}
