#pragma once

#include <functional>

#include "mobo/problem.hpp"

namespace mobo {

struct GpsConfig {
  double mesh0 = 0.25;     // initial step, unit-cube units
  double mesh_tol = 1e-4;  // terminate once the mesh shrinks below this
  int max_evals = 2000;
  double expand = 1.0;     // mesh multiplier after a successful poll
  double contract = 0.5;   // mesh multiplier after a failed poll
};

struct GpsResult {
  EmbeddedPoint best;
  double value = 0.0;
  int evals = 0;
};

// Generalized pattern search over [0,1]^d: polls x +/- mesh*e_i clipped to
// the cube, first-improvement acceptance in fixed coordinate order, halves
// the mesh after a failed poll pass. The incumbent value never increases and
// every evaluated point stays inside the cube. Deterministic for a given
// (f, x0, cfg). Throws EvaluationError if f returns a non-finite value.
GpsResult pattern_search(const std::function<double(const EmbeddedPoint&)>& f,
                         const EmbeddedPoint& x0, const GpsConfig& cfg = {});

}  // namespace mobo
