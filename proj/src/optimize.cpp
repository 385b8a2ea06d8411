#include "mobo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mobo {

namespace {

std::string format_point(const EmbeddedPoint& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

GpsResult pattern_search(const std::function<double(const EmbeddedPoint&)>& f,
                         const EmbeddedPoint& x0, const GpsConfig& cfg) {
  if (cfg.mesh0 <= 0.0 || cfg.mesh_tol <= 0.0 || cfg.mesh_tol >= cfg.mesh0)
    throw std::invalid_argument("pattern_search: need 0 < mesh_tol < mesh0");
  if (cfg.max_evals < 1)
    throw std::invalid_argument("pattern_search: max_evals must be >= 1");
  if (cfg.expand < 1.0 || cfg.contract <= 0.0 || cfg.contract >= 1.0)
    throw std::invalid_argument("pattern_search: bad mesh multipliers");
  const std::size_t d = x0.size();
  for (double c : x0)
    if (c < 0.0 || c > 1.0)
      throw BoundsError("pattern_search: start point outside the unit cube");

  int evals = 0;
  auto eval = [&](const EmbeddedPoint& x) {
    const double v = f(x);
    ++evals;
    if (!std::isfinite(v))
      throw EvaluationError("pattern_search: non-finite objective at " +
                            format_point(x));
    return v;
  };

  EmbeddedPoint best = x0;
  double fbest = eval(best);
  double mesh = cfg.mesh0;

  while (mesh >= cfg.mesh_tol && evals < cfg.max_evals) {
    bool improved = false;
    for (std::size_t i = 0; i < d && !improved; ++i) {
      for (int sign : {+1, -1}) {
        EmbeddedPoint cand = best;
        cand[i] = std::clamp(best[i] + sign * mesh, 0.0, 1.0);
        if (cand[i] == best[i]) continue;  // clipped onto the incumbent
        if (evals >= cfg.max_evals) break;
        const double v = eval(cand);
        if (v < fbest) {
          best = std::move(cand);
          fbest = v;
          improved = true;
          break;
        }
      }
    }
    if (evals >= cfg.max_evals) break;
    mesh *= improved ? cfg.expand : cfg.contract;
  }

  return GpsResult{std::move(best), fbest, evals};
}

}  // namespace mobo
