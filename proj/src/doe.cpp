#include "mobo/doe.hpp"

#include <numeric>

#include "mobo/rng.hpp"

namespace mobo {

std::vector<EmbeddedPoint> latin_hypercube(const LhsConfig& cfg) {
  if (cfg.n_points < 1) throw ConfigError("latin_hypercube: n_points must be >= 1");
  if (cfg.dimension < 1) throw ConfigError("latin_hypercube: dimension must be >= 1");

  const std::size_t n = cfg.n_points;
  Rng rng(cfg.seed);

  std::vector<EmbeddedPoint> points(n, EmbeddedPoint(cfg.dimension));
  std::vector<std::size_t> strata(n);
  for (std::size_t k = 0; k < cfg.dimension; ++k) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    // Fisher-Yates, top down; draw order is part of the determinism contract.
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(strata[i], strata[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      // Jitter keeps points off the stratum grid; uniform01() < 1 keeps the
      // coordinate strictly inside [0,1).
      points[i][k] = (static_cast<double>(strata[i]) + rng.uniform01()) /
                     static_cast<double>(n);
    }
  }
  return points;
}

}  // namespace mobo
