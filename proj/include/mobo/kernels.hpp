#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Data-parallel numeric cores with OpenMP variants. Every parallel variant
// computes each output element independently -- no cross-thread reductions
// of floating point -- so its result is bitwise identical to the *_serial
// reference for any thread count. The serial twins stay as the references
// the tests compare against; tools/bench_kernels times both.

namespace mobo::kernels {

// n x n Gaussian kernel matrix, row-major:
//   K[i*n+j] = exp(-||x_i - x_j||^2 / (2 sigma^2))
// `points` is n x dim row-major.
std::vector<double> gram_matrix(std::span<const double> points, std::size_t n,
                                std::size_t dim, double sigma);
std::vector<double> gram_matrix_serial(std::span<const double> points,
                                       std::size_t n, std::size_t dim,
                                       double sigma);

// RBF interpolant sum_j w_j exp(-||q - c_j||^2 / (2 sigma^2)) evaluated at m
// query points (m x dim row-major).
std::vector<double> rbf_eval_batch(std::span<const double> centers,
                                   std::size_t n, std::size_t dim,
                                   std::span<const double> weights, double sigma,
                                   std::span<const double> queries,
                                   std::size_t m);
std::vector<double> rbf_eval_batch_serial(std::span<const double> centers,
                                          std::size_t n, std::size_t dim,
                                          std::span<const double> weights,
                                          double sigma,
                                          std::span<const double> queries,
                                          std::size_t m);

// flags[i] = 1 iff no other row dominates row i (componentwise <=, not equal;
// minimization sense). `objectives` is n x obj_dim row-major.
std::vector<std::uint8_t> nondominated_flags(std::span<const double> objectives,
                                             std::size_t n, std::size_t obj_dim);
std::vector<std::uint8_t> nondominated_flags_serial(
    std::span<const double> objectives, std::size_t n, std::size_t obj_dim);

// Dense scan of f over the inclusive axis-aligned grid with `per_dim` points
// per axis. Returns the maximum and the smallest flat index attaining it
// (row-major over dimensions, last axis fastest), so serial and parallel
// scans agree exactly.
struct GridMax {
  double value;
  std::size_t flat_index;
};

namespace detail {

inline void decode_flat(std::size_t flat, std::span<const double> lower,
                        std::span<const double> upper, std::size_t per_dim,
                        double* coords) {
  const std::size_t d = lower.size();
  for (std::size_t k = d; k-- > 0;) {
    const std::size_t idx = flat % per_dim;
    flat /= per_dim;
    coords[k] = per_dim > 1
                    ? lower[k] + (upper[k] - lower[k]) *
                                     static_cast<double>(idx) /
                                     static_cast<double>(per_dim - 1)
                    : lower[k];
  }
}

}  // namespace detail

template <class F>
GridMax grid_argmax_serial(F&& f, std::span<const double> lower,
                           std::span<const double> upper, std::size_t per_dim) {
  const std::size_t d = lower.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= per_dim;

  GridMax best{-1e308, 0};
  std::vector<double> coords(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    detail::decode_flat(flat, lower, upper, per_dim, coords.data());
    const double v = f(std::span<const double>(coords));
    if (v > best.value) best = {v, flat};
  }
  return best;
}

template <class F>
GridMax grid_argmax(F&& f, std::span<const double> lower,
                    std::span<const double> upper, std::size_t per_dim) {
  const std::size_t d = lower.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= per_dim;

  GridMax best{-1e308, 0};
#pragma omp parallel
  {
    GridMax local{-1e308, 0};
    std::vector<double> coords(d);
#pragma omp for schedule(static) nowait
    for (long long flat = 0; flat < static_cast<long long>(total); ++flat) {
      detail::decode_flat(static_cast<std::size_t>(flat), lower, upper, per_dim,
                          coords.data());
      const double v = f(std::span<const double>(coords));
      if (v > local.value ||
          (v == local.value &&
           static_cast<std::size_t>(flat) < local.flat_index))
        local = {v, static_cast<std::size_t>(flat)};
    }
#pragma omp critical(mobo_grid_argmax)
    {
      if (local.value > best.value ||
          (local.value == best.value && local.flat_index < best.flat_index))
        best = local;
    }
  }
  return best;
}

}  // namespace mobo::kernels
