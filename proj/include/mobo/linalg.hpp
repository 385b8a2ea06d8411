#pragma once

#include <cstddef>
#include <vector>

namespace mobo {

// Dense symmetric solver: LDL^T-style elimination with symmetric diagonal
// pivoting, factored once and reusable for several right-hand sides (the
// surrogate's iterative refinement solves against the same operator
// repeatedly). Throws NumericalError when a pivot collapses.
class SymmetricSolver {
 public:
  // Factors the n x n row-major matrix in place.
  SymmetricSolver(std::vector<double> a, std::size_t n);

  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  std::vector<double> f_;           // packed factors: U above, multipliers below
  std::vector<std::size_t> perm_;   // symmetric permutation
  std::size_t n_;
};

// One-shot convenience wrapper.
std::vector<double> solve_symmetric(std::vector<double> a, std::vector<double> b);

}  // namespace mobo
