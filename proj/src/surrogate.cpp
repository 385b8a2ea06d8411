#include "mobo/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "mobo/kernels.hpp"
#include "mobo/linalg.hpp"

namespace mobo {

namespace {

std::vector<double> flatten(const std::vector<EmbeddedPoint>& pts,
                            std::size_t dim) {
  std::vector<double> flat(pts.size() * dim);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) flat[i * dim + k] = pts[i][k];
  return flat;
}

double median_pairwise_distance(const std::vector<EmbeddedPoint>& pts) {
  std::vector<double> dists;
  dists.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < pts[i].size(); ++k) {
        const double d = pts[i][k] - pts[j][k];
        s += d * d;
      }
      const double dist = std::sqrt(s);
      if (dist < RbfModel::kDuplicateTol)
        throw DuplicatePointError(
            "training inputs " + std::to_string(i) + " and " +
            std::to_string(j) + " coincide (distance " + std::to_string(dist) +
            ")");
      dists.push_back(dist);
    }
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  return (m % 2 == 1) ? dists[m / 2]
                      : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
}

}  // namespace

RbfModel RbfModel::fit(TrainingSet data) {
  const std::size_t n = data.inputs.size();
  if (n == 0) throw std::invalid_argument("RbfModel::fit: empty training set");
  if (data.outputs.size() != n)
    throw std::invalid_argument("RbfModel::fit: inputs/outputs size mismatch");
  const std::size_t dim = data.inputs.front().size();
  for (const auto& x : data.inputs)
    if (x.size() != dim)
      throw std::invalid_argument("RbfModel::fit: inconsistent input dimension");

  RbfModel m;
  m.dim_ = dim;
  m.sigma_ = (n == 1) ? 0.5 : median_pairwise_distance(data.inputs);
  m.flat_centers_ = flatten(data.inputs, dim);

  const std::vector<double> gram =
      kernels::gram_matrix(m.flat_centers_, n, dim, m.sigma_);
  std::vector<double> regularized = gram;
  for (std::size_t i = 0; i < n; ++i) regularized[i * n + i] += kNugget;
  const SymmetricSolver solver(std::move(regularized), n);

  // The nugget keeps the factorization well-posed but biases the training
  // residuals to ~nugget * |weights|, which overshoots the interpolation
  // contract once the kernel matrix turns ill-conditioned. Iterative
  // refinement against the unregularized matrix removes that bias down to
  // the float64 floor; each step reuses the one factorization.
  m.weights_ = solver.solve(data.outputs);
  double prev_residual = 0.0;
  for (int pass = 0; pass < kMaxRefinePasses; ++pass) {
    std::vector<double> residual(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = data.outputs[i];
      for (std::size_t j = 0; j < n; ++j) s -= gram[i * n + j] * m.weights_[j];
      residual[i] = s;
      worst = std::max(worst, std::abs(s));
    }
    if (worst <= kResidualTarget) break;
    if (pass > 0 && worst >= 0.995 * prev_residual) break;  // float64 floor
    prev_residual = worst;
    const std::vector<double> delta = solver.solve(residual);
    for (std::size_t j = 0; j < n; ++j) m.weights_[j] += delta[j];
  }

  m.data_ = std::move(data);
  return m;
}

RbfModel RbfModel::refit(const TrainingSet& extra) const {
  TrainingSet all = data_;
  all.inputs.insert(all.inputs.end(), extra.inputs.begin(), extra.inputs.end());
  all.outputs.insert(all.outputs.end(), extra.outputs.begin(),
                     extra.outputs.end());
  return fit(std::move(all));
}

double RbfModel::predict(const EmbeddedPoint& x) const {
  // Same summation order as rbf_eval_batch so single and batched evaluation
  // agree bitwise.
  const double inv = 1.0 / (2.0 * sigma_ * sigma_);
  const std::size_t n = size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = x[k] - flat_centers_[j * dim_ + k];
      sq += d * d;
    }
    s += weights_[j] * std::exp(-sq * inv);
  }
  return s;
}

std::vector<double> RbfModel::predict_batch(std::span<const double> queries,
                                            std::size_t m) const {
  return kernels::rbf_eval_batch(flat_centers_, size(), dim_, weights_, sigma_,
                                 queries, m);
}

RbfModel RbfModel::restore(TrainingSet data, std::vector<double> weights,
                           double sigma) {
  RbfModel m;
  m.dim_ = data.inputs.empty() ? 0 : data.inputs.front().size();
  m.sigma_ = sigma;
  m.flat_centers_ = flatten(data.inputs, m.dim_);
  m.weights_ = std::move(weights);
  m.data_ = std::move(data);
  return m;
}

}  // namespace mobo
