#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mobo/errors.hpp"

namespace mobo {

// One bounded continuous design variable in physical units.
struct VariableSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  std::string units;
};

// Decision vector in physical units; entries follow the problem's variable
// order. The variable order is fixed at problem construction so every
// serialization of a design point is deterministic.
struct DesignPoint {
  std::vector<double> values;
};

// Unit-cube coordinates of a design point.
using EmbeddedPoint = std::vector<double>;

// What one simulated experiment reports back.
struct SimulationOutput {
  double product_area = 0.0;
  double byproduct_area = 0.0;
  int samples_to_steady = 1;
  bool steady = true;
};

// Both objectives in minimization sense:
//   f[0] = -product_area   (maximize product)
//   f[1] = +byproduct_area (minimize byproduct)
struct ObjectiveVector {
  std::array<double, 2> f{};
};

class Problem {
 public:
  explicit Problem(std::vector<VariableSpec> variables);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  std::size_t dimension() const { return variables_.size(); }

  // Affine map into [0,1]^d. Throws BoundsError naming the offending
  // variable when a value is outside its bounds.
  EmbeddedPoint embed(const DesignPoint& p) const;

  // Inverse of embed. Throws BoundsError when a coordinate leaves [0,1].
  DesignPoint unembed(const EmbeddedPoint& x) const;

 private:
  std::vector<VariableSpec> variables_;
};

ObjectiveVector evaluate_objectives(const SimulationOutput& out);

// u dominates v iff u <= v componentwise and u != v (minimization sense).
bool dominates(const ObjectiveVector& u, const ObjectiveVector& v);

}  // namespace mobo
