#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mobo/problem.hpp"

namespace mobo {

// Accumulated observations of one simulation output channel.
struct TrainingSet {
  std::vector<EmbeddedPoint> inputs;
  std::vector<double> outputs;
};

// Gaussian radial-basis interpolant over embedded design points. One model
// per simulation output channel; the scalarized objectives are never modeled
// directly. Immutable once fitted, safe for concurrent reads.
class RbfModel {
 public:
  static constexpr double kNugget = 1e-8;
  static constexpr double kDuplicateTol = 1e-10;
  static constexpr double kResidualTarget = 1e-9;
  static constexpr int kMaxRefinePasses = 400;

  // Interpolates the data: prediction at each training input matches the
  // training output to ~1e-6 (nugget-limited). Shape parameter sigma is the
  // median pairwise distance between inputs (0.5 for a single point).
  // Throws DuplicatePointError for coincident inputs, NumericalError when
  // the regularized kernel system is singular.
  static RbfModel fit(TrainingSet data);

  // Full refit on the accumulated data; equivalent to fit() on the
  // concatenation, bitwise.
  RbfModel refit(const TrainingSet& extra) const;

  double predict(const EmbeddedPoint& x) const;
  std::vector<double> predict_batch(std::span<const double> queries,
                                    std::size_t m) const;

  std::size_t size() const { return data_.outputs.size(); }
  std::size_t dimension() const { return dim_; }
  double shape() const { return sigma_; }
  double nugget() const { return kNugget; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> flat_centers() const { return flat_centers_; }
  const TrainingSet& data() const { return data_; }

  // Reconstructs a model from checkpoint fields without re-solving.
  static RbfModel restore(TrainingSet data, std::vector<double> weights,
                          double sigma);

 private:
  RbfModel() = default;

  TrainingSet data_;
  std::vector<double> flat_centers_;  // n x d row-major copy for the kernels
  std::vector<double> weights_;
  double sigma_ = 0.5;
  std::size_t dim_ = 0;
};

}  // namespace mobo
