#include "mobo/problem.hpp"

#include <set>
#include <sstream>

namespace mobo {

Problem::Problem(std::vector<VariableSpec> variables)
    : variables_(std::move(variables)) {
  if (variables_.empty()) throw ConfigError("problem needs at least one variable");
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw ConfigError("variable with empty name");
    if (!(v.lower < v.upper)) {
      std::ostringstream os;
      os << "variable '" << v.name << "': lower bound " << v.lower
         << " must be strictly below upper bound " << v.upper;
      throw ConfigError(os.str());
    }
    if (!seen.insert(v.name).second)
      throw ConfigError("duplicate variable name '" + v.name + "'");
  }
}

EmbeddedPoint Problem::embed(const DesignPoint& p) const {
  if (p.values.size() != variables_.size())
    throw BoundsError("design point has " + std::to_string(p.values.size()) +
                      " values, problem has " + std::to_string(variables_.size()));
  EmbeddedPoint x(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& v = variables_[i];
    const double value = p.values[i];
    if (value < v.lower || value > v.upper) {
      std::ostringstream os;
      os << "variable '" << v.name << "' = " << value << " outside ["
         << v.lower << ", " << v.upper << "]";
      throw BoundsError(os.str());
    }
    x[i] = (value - v.lower) / (v.upper - v.lower);
  }
  return x;
}

DesignPoint Problem::unembed(const EmbeddedPoint& x) const {
  if (x.size() != variables_.size())
    throw BoundsError("embedded point has " + std::to_string(x.size()) +
                      " coordinates, problem has " + std::to_string(variables_.size()));
  DesignPoint p;
  p.values.resize(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) {
      std::ostringstream os;
      os << "embedded coordinate " << i << " = " << x[i] << " outside [0, 1]";
      throw BoundsError(os.str());
    }
    const auto& v = variables_[i];
    p.values[i] = v.lower + x[i] * (v.upper - v.lower);
  }
  return p;
}

ObjectiveVector evaluate_objectives(const SimulationOutput& out) {
  return ObjectiveVector{{-out.product_area, out.byproduct_area}};
}

bool dominates(const ObjectiveVector& u, const ObjectiveVector& v) {
  bool all_le = true;
  bool any_lt = false;
  for (std::size_t i = 0; i < u.f.size(); ++i) {
    if (u.f[i] > v.f[i]) all_le = false;
    if (u.f[i] < v.f[i]) any_lt = true;
  }
  return all_le && any_lt;
}

}  // namespace mobo
