#pragma once

#include <cstdint>
#include <vector>

#include "mobo/problem.hpp"

namespace mobo {

struct LhsConfig {
  std::size_t n_points = 1;
  std::size_t dimension = 1;
  std::uint64_t seed = 0;
};

// Seeded Latin hypercube sample in [0,1)^d: per dimension, a random
// permutation of the n strata plus uniform jitter inside each stratum.
// Every dimension's coordinate column occupies each stratum [i/n, (i+1)/n)
// exactly once, and identical configs yield byte-identical point lists.
std::vector<EmbeddedPoint> latin_hypercube(const LhsConfig& cfg);

}  // namespace mobo
