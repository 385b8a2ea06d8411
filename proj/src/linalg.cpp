#include "mobo/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mobo/errors.hpp"

namespace mobo {

SymmetricSolver::SymmetricSolver(std::vector<double> a, std::size_t n)
    : f_(std::move(a)), n_(n) {
  if (f_.size() != n * n) throw NumericalError("SymmetricSolver: shape mismatch");

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    max_diag = std::max(max_diag, std::abs(f_[i * n + i]));
  const double breakdown = std::max(max_diag, 1.0) * 1e-300;

  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  for (std::size_t k = 0; k < n; ++k) {
    // Symmetric pivot: bring the largest remaining diagonal entry to (k,k).
    // Row swaps carry the stored multipliers along; column swaps only touch
    // the active columns, which keeps the packed factors consistent.
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(f_[i * n + i]) > std::abs(f_[p * n + p])) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f_[k * n + j], f_[p * n + j]);
      for (std::size_t i = 0; i < n; ++i) std::swap(f_[i * n + k], f_[i * n + p]);
      std::swap(perm_[k], perm_[p]);
    }

    const double pivot = f_[k * n + k];
    if (!std::isfinite(pivot) || std::abs(pivot) < breakdown)
      throw NumericalError("SymmetricSolver: singular system (pivot " +
                           std::to_string(pivot) + " at step " +
                           std::to_string(k) + ")");

    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = f_[i * n + k] / pivot;
      f_[i * n + k] = m;  // keep the multiplier for later solves
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) f_[i * n + j] -= m * f_[k * n + j];
    }
  }
}

std::vector<double> SymmetricSolver::solve(const std::vector<double>& b) const {
  if (b.size() != n_) throw NumericalError("SymmetricSolver: rhs size mismatch");
  // forward substitution with the stored multipliers on the permuted rhs
  std::vector<double> y(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    double s = b[perm_[k]];
    for (std::size_t j = 0; j < k; ++j) s -= f_[k * n_ + j] * y[j];
    y[k] = s;
  }
  // back substitution, then undo the symmetric permutation
  for (std::size_t k = n_; k-- > 0;) {
    double s = y[k];
    for (std::size_t j = k + 1; j < n_; ++j) s -= f_[k * n_ + j] * y[j];
    y[k] = s / f_[k * n_ + k];
  }
  std::vector<double> x(n_);
  for (std::size_t k = 0; k < n_; ++k) x[perm_[k]] = y[k];
  return x;
}

std::vector<double> solve_symmetric(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  return SymmetricSolver(std::move(a), n).solve(b);
}

}  // namespace mobo
