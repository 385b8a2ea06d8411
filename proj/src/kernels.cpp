#include "mobo/kernels.hpp"

#include <cmath>

namespace mobo::kernels {

namespace {

inline double sq_dist(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double gauss(double sq, double inv_two_sigma_sq) {
  return std::exp(-sq * inv_two_sigma_sq);
}

// flags row i against all other rows; identical for serial and parallel paths.
inline std::uint8_t row_nondominated(const double* objs, std::size_t n,
                                     std::size_t obj_dim, std::size_t i) {
  const double* oi = objs + i * obj_dim;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double* oj = objs + j * obj_dim;
    bool all_le = true;
    bool any_lt = false;
    for (std::size_t k = 0; k < obj_dim; ++k) {
      if (oj[k] > oi[k]) {
        all_le = false;
        break;
      }
      if (oj[k] < oi[k]) any_lt = true;
    }
    if (all_le && any_lt) return 0;
  }
  return 1;
}

}  // namespace

std::vector<double> gram_matrix_serial(std::span<const double> points,
                                       std::size_t n, std::size_t dim,
                                       double sigma) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      k[i * n + j] = gauss(sq_dist(points.data() + i * dim,
                                   points.data() + j * dim, dim),
                           inv);
  return k;
}

std::vector<double> gram_matrix(std::span<const double> points, std::size_t n,
                                std::size_t dim, double sigma) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> k(n * n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    for (std::size_t j = 0; j < n; ++j)
      k[static_cast<std::size_t>(i) * n + j] =
          gauss(sq_dist(points.data() + static_cast<std::size_t>(i) * dim,
                        points.data() + j * dim, dim),
                inv);
  return k;
}

std::vector<double> rbf_eval_batch_serial(std::span<const double> centers,
                                          std::size_t n, std::size_t dim,
                                          std::span<const double> weights,
                                          double sigma,
                                          std::span<const double> queries,
                                          std::size_t m) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> out(m);
  for (std::size_t q = 0; q < m; ++q) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      s += weights[j] * gauss(sq_dist(queries.data() + q * dim,
                                      centers.data() + j * dim, dim),
                              inv);
    out[q] = s;
  }
  return out;
}

std::vector<double> rbf_eval_batch(std::span<const double> centers,
                                   std::size_t n, std::size_t dim,
                                   std::span<const double> weights, double sigma,
                                   std::span<const double> queries,
                                   std::size_t m) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> out(m);
#pragma omp parallel for schedule(static)
  for (long long q = 0; q < static_cast<long long>(m); ++q) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      s += weights[j] *
           gauss(sq_dist(queries.data() + static_cast<std::size_t>(q) * dim,
                         centers.data() + j * dim, dim),
                 inv);
    out[static_cast<std::size_t>(q)] = s;
  }
  return out;
}

std::vector<std::uint8_t> nondominated_flags_serial(
    std::span<const double> objectives, std::size_t n, std::size_t obj_dim) {
  std::vector<std::uint8_t> flags(n);
  for (std::size_t i = 0; i < n; ++i)
    flags[i] = row_nondominated(objectives.data(), n, obj_dim, i);
  return flags;
}

std::vector<std::uint8_t> nondominated_flags(std::span<const double> objectives,
                                             std::size_t n,
                                             std::size_t obj_dim) {
  std::vector<std::uint8_t> flags(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    flags[static_cast<std::size_t>(i)] = row_nondominated(
        objectives.data(), n, obj_dim, static_cast<std::size_t>(i));
  return flags;
}

}  // namespace mobo::kernels
