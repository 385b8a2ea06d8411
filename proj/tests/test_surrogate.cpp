#include <doctest.h>

#include <cmath>

#include "mobo/doe.hpp"
#include "mobo/kernels.hpp"
#include "mobo/rng.hpp"
#include "mobo/surrogate.hpp"
#include "test_support.hpp"

using namespace mobo;

TEST_CASE("single training point interpolates and uses sigma = 0.5") {
  const RbfModel m = RbfModel::fit({{{0.5, 0.5, 0.5}}, {3.0}});
  CHECK(m.shape() == 0.5);
  CHECK(m.predict({0.5, 0.5, 0.5}) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("two-point fit matches the explicit 2x2 solve") {
  // Centers (0,0,0) and (1,1,1): the single pairwise distance sqrt(3) is the
  // median, so sigma^2 = 3 and the off-diagonal kernel entry is
  // exp(-3 / (2*3)) = exp(-1/2).
  const TrainingSet data{{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}, {1.0, 2.0}};
  const RbfModel m = RbfModel::fit(data);
  CHECK(m.shape() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  // Oracle: solve [[1+eta, q], [q, 1+eta]] w = y by hand. The refinement
  // passes move the weights from this nugget solution toward the pure
  // interpolant by O(eta), hence the tolerance.
  const double q = std::exp(-0.5);
  const double a = 1.0 + RbfModel::kNugget;
  const double det = a * a - q * q;
  const double w0 = (a * 1.0 - q * 2.0) / det;
  const double w1 = (a * 2.0 - q * 1.0) / det;
  CHECK(m.weights()[0] == doctest::Approx(w0).epsilon(1e-6));
  CHECK(m.weights()[1] == doctest::Approx(w1).epsilon(1e-6));

  CHECK(m.predict({0.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.predict({1.0, 1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("15-point LHS fit reproduces y = sum of coords at the data") {
  const auto pts = latin_hypercube({15, 3, 7});
  TrainingSet data;
  data.inputs = pts;
  for (const auto& p : pts) data.outputs.push_back(p[0] + p[1] + p[2]);
  const RbfModel m = RbfModel::fit(data);

  // Oracle: independent dense solve of the unregularized kernel system (the
  // refinement passes drive the fit toward the pure interpolant).
  const std::size_t n = 15;
  std::vector<double> flat(n * 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < 3; ++k) flat[i * 3 + k] = pts[i][k];
  const auto gram = kernels::gram_matrix_serial(flat, n, 3, m.shape());
  const auto oracle_w = testsupport::gauss_solve(gram, data.outputs);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(m.weights()[i] == doctest::Approx(oracle_w[i]).epsilon(1e-3));

  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(m.predict(pts[i]) - data.outputs[i]) < 1e-6);
}

TEST_CASE("prediction agrees with a naive double loop on 50 random points") {
  Rng rng(77);
  const auto pts = latin_hypercube({20, 3, 3});
  TrainingSet data;
  data.inputs = pts;
  for (const auto& p : pts) data.outputs.push_back(std::sin(4 * p[0]) + p[1] * p[2]);
  const RbfModel m = RbfModel::fit(data);

  for (int t = 0; t < 50; ++t) {
    EmbeddedPoint x = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
    double oracle = 0.0;
    for (std::size_t j = 0; j < data.inputs.size(); ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double d = x[k] - data.inputs[j][k];
        sq += d * d;
      }
      oracle += m.weights()[j] * std::exp(-sq / (2.0 * m.shape() * m.shape()));
    }
    CHECK(m.predict(x) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("far from all centers the prediction decays toward zero") {
  const TrainingSet data{{{0.0, 0.0, 0.0}}, {10.0}};
  const RbfModel m = RbfModel::fit(data);
  // distance sqrt(3) = 2 sqrt(3) sigma away from the single center
  const double v = m.predict({1.0, 1.0, 1.0});
  double bound = 0.0;
  for (double w : m.weights()) bound += std::abs(w);
  bound *= std::exp(-3.0 / (2.0 * m.shape() * m.shape()));
  CHECK(std::abs(v) <= bound + 1e-15);
  CHECK(std::abs(v) < 0.03 * std::abs(m.predict({0.0, 0.0, 0.0})));
}

TEST_CASE("refit equals a fresh fit on the concatenated data, bitwise") {
  const auto pts = latin_hypercube({12, 3, 5});
  TrainingSet first, extra, all;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& dst = (i < 8) ? first : extra;
    dst.inputs.push_back(pts[i]);
    dst.outputs.push_back(std::cos(3 * pts[i][0]) + pts[i][2]);
  }
  all = first;
  all.inputs.insert(all.inputs.end(), extra.inputs.begin(), extra.inputs.end());
  all.outputs.insert(all.outputs.end(), extra.outputs.begin(), extra.outputs.end());

  const RbfModel incremental = RbfModel::fit(first).refit(extra);
  const RbfModel fresh = RbfModel::fit(all);

  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const EmbeddedPoint x = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
    CHECK(incremental.predict(x) == fresh.predict(x));  // bitwise
  }
}

TEST_CASE("refit with an empty set leaves predictions unchanged") {
  const auto pts = latin_hypercube({6, 3, 9});
  TrainingSet data;
  data.inputs = pts;
  for (const auto& p : pts) data.outputs.push_back(p[0]);
  const RbfModel m = RbfModel::fit(data);
  const RbfModel m2 = m.refit(TrainingSet{});
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const EmbeddedPoint x = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
    CHECK(m.predict(x) == m2.predict(x));
  }
}

TEST_CASE("duplicate inputs are rejected") {
  TrainingSet data{{{0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}}, {1.0, 2.0}};
  CHECK_THROWS_AS(RbfModel::fit(data), DuplicatePointError);

  // refit adding an exact repeat of an existing point
  const RbfModel m = RbfModel::fit({{{0.1, 0.2, 0.3}}, {1.0}});
  CHECK_THROWS_AS(m.refit({{{0.1, 0.2, 0.3}}, {1.0}}), DuplicatePointError);
}

TEST_CASE("permuting the training set leaves predictions invariant") {
  const auto pts = latin_hypercube({10, 3, 21});
  TrainingSet fwd, rev;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    fwd.inputs.push_back(pts[i]);
    fwd.outputs.push_back(std::exp(pts[i][1]));
  }
  for (std::size_t i = pts.size(); i-- > 0;) {
    rev.inputs.push_back(pts[i]);
    rev.outputs.push_back(std::exp(pts[i][1]));
  }
  const RbfModel a = RbfModel::fit(fwd);
  const RbfModel b = RbfModel::fit(rev);
  Rng rng(22);
  for (int t = 0; t < 20; ++t) {
    const EmbeddedPoint x = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
    CHECK(a.predict(x) == doctest::Approx(b.predict(x)).epsilon(1e-10));
  }
}

TEST_CASE("interpolation residuals stay below 1e-6 through campaign sizes") {
  // The guarantee is conditional on the kernel system staying within float64
  // reach; with sigma = median distance that holds through n = 42 (the full
  // campaign budget) but not for arbitrary random sets much beyond it.
  Rng rng(31);
  for (std::size_t n : {2u, 15u, 25u, 42u}) {
    TrainingSet data;
    for (std::size_t i = 0; i < n; ++i) {
      data.inputs.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
      data.outputs.push_back(rng.uniform(-100.0, 100.0));
    }
    const RbfModel m = RbfModel::fit(data);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(m.predict(data.inputs[i]) - data.outputs[i]));
    CHECK(worst <= 1e-6);
  }
}
