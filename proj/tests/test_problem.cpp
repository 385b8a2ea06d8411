#include <doctest.h>

#include "mobo/problem.hpp"
#include "mobo/rng.hpp"
#include "test_support.hpp"

using namespace mobo;

TEST_CASE("embed maps the bound corners and the midpoint") {
  const Problem p = testsupport::table_problem();

  auto lo = p.embed(DesignPoint{{40.0, 60.0, 0.9}});
  CHECK(lo == EmbeddedPoint{0.0, 0.0, 0.0});

  auto hi = p.embed(DesignPoint{{150.0, 300.0, 2.0}});
  CHECK(hi == EmbeddedPoint{1.0, 1.0, 1.0});

  auto mid = p.embed(DesignPoint{{95.0, 180.0, 1.45}});
  for (double c : mid) CHECK(c == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("embed rejects out-of-bounds values naming the variable") {
  const Problem p = testsupport::table_problem();
  CHECK_THROWS_WITH_AS(p.embed(DesignPoint{{39.9, 60.0, 0.9}}),
                       doctest::Contains("temperature_C"), BoundsError);
  CHECK_THROWS_WITH_AS(p.embed(DesignPoint{{40.0, 301.0, 0.9}}),
                       doctest::Contains("time_s"), BoundsError);
  CHECK_THROWS_AS(p.embed(DesignPoint{{40.0, 60.0}}), BoundsError);
}

TEST_CASE("unembed maps the unit-cube corners to the bounds") {
  const Problem p = testsupport::table_problem();
  CHECK(p.unembed({0.0, 0.0, 0.0}).values == std::vector<double>{40.0, 60.0, 0.9});
  CHECK(p.unembed({1.0, 1.0, 1.0}).values == std::vector<double>{150.0, 300.0, 2.0});
  CHECK_THROWS_AS(p.unembed({0.5, 1.1, 0.5}), BoundsError);
  CHECK_THROWS_AS(p.unembed({-0.1, 0.5, 0.5}), BoundsError);
}

TEST_CASE("embed/unembed roundtrip on 100 random points") {
  const Problem p = testsupport::table_problem();
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    DesignPoint d;
    for (const auto& v : p.variables())
      d.values.push_back(rng.uniform(v.lower, v.upper));
    const DesignPoint back = p.unembed(p.embed(d));
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      const double scale = std::max(1.0, std::abs(d.values[i]));
      CHECK(std::abs(back.values[i] - d.values[i]) / scale < 1e-12);
    }
  }
}

TEST_CASE("embed is strictly monotone per coordinate") {
  const Problem p = testsupport::table_problem();
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    DesignPoint a, b;
    for (const auto& v : p.variables()) {
      const double x = rng.uniform(v.lower, v.upper);
      a.values.push_back(x);
      b.values.push_back(x);
    }
    const std::size_t k = static_cast<std::size_t>(rng.below(3));
    const auto& v = p.variables()[k];
    b.values[k] = std::min(v.upper, a.values[k] + 1e-6 * (v.upper - v.lower));
    if (b.values[k] == a.values[k]) continue;
    CHECK(p.embed(b)[k] > p.embed(a)[k]);
  }
}

TEST_CASE("evaluate_objectives applies the sign convention") {
  CHECK(evaluate_objectives({30.0, 5.0}).f == std::array<double, 2>{-30.0, 5.0});
  CHECK(evaluate_objectives({0.0, 0.0}).f == std::array<double, 2>{0.0, 0.0});
  CHECK(evaluate_objectives({99.9, 0.1}).f == std::array<double, 2>{-99.9, 0.1});
}

TEST_CASE("dominance is computed on objectives only") {
  const ObjectiveVector a{{-30.0, 5.0}};
  const ObjectiveVector b{{-20.0, 5.0}};
  const ObjectiveVector c{{-30.0, 5.0}};
  CHECK(dominates(a, b));
  CHECK_FALSE(dominates(b, a));
  CHECK_FALSE(dominates(a, c));  // equal vectors do not dominate
  CHECK_FALSE(dominates(c, a));
}

TEST_CASE("problem construction validates bounds and names") {
  CHECK_THROWS_AS(Problem({{"x", 1.0, 1.0, ""}}), ConfigError);
  CHECK_THROWS_AS(Problem({{"x", 2.0, 1.0, ""}}), ConfigError);
  CHECK_THROWS_AS(Problem({{"x", 0.0, 1.0, ""}, {"x", 0.0, 1.0, ""}}), ConfigError);
}
