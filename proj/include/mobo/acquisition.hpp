#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mobo/optimize.hpp"
#include "mobo/problem.hpp"
#include "mobo/rng.hpp"
#include "mobo/surrogate.hpp"

namespace mobo {

enum class AcquisitionKind { FixedWeight, EpsilonConstraint };

// One scalarization recipe. The campaign runs three per iteration: an
// epsilon-constraint acquisition per objective plus one fixed 50-50
// weighting.
struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::FixedWeight;
  std::vector<double> weights;  // fixed-weight only; nonnegative, sums to 1
  int target_index = 0;         // epsilon-constraint only
  double penalty = 100.0;       // rho, epsilon-constraint only

  static AcquisitionSpec fixed(std::vector<double> w);
  static AcquisitionSpec epsilon(int target, double rho = 100.0);
};

double scalarize_fixed(const ObjectiveVector& f, std::span<const double> w);

// Quadratic-penalty realization of the epsilon-constraint subproblem:
//   f[target] + rho * sum_{j != target} max(0, f[j] - eps[j])^2
// eps is full-length; the target slot is ignored.
double scalarize_epsilon(const ObjectiveVector& f, int target,
                         std::span<const double> eps, double rho);

struct ArchiveEntry {
  DesignPoint design;
  ObjectiveVector objectives;
  std::uint64_t experiment_index = 0;
};

// Nondominated set of evaluated experiments. Insertion keeps the invariant
// that no entry dominates another; on exact objective ties the earlier
// experiment index wins.
class ParetoArchive {
 public:
  bool insert(ArchiveEntry entry);
  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<ArchiveEntry> entries_;
};

// Candidates closer than this (embedded Euclidean) to each other or to any
// evaluated point get re-perturbed; the reactor cannot meaningfully
// distinguish tighter settings.
inline constexpr double kDedupeRadius = 1e-3;

struct BatchContext {
  const Problem& problem;
  const RbfModel& product_model;
  const RbfModel& byproduct_model;
  std::span<const EmbeddedPoint> evaluated;  // embedded history designs
  GpsConfig gps;
};

// Produces one batch of candidate designs, one per acquisition, by
// minimizing each scalarized surrogate composite with pattern search.
// Epsilon vectors come from a uniformly drawn archive entry (one draw per
// epsilon acquisition per call, in acquisition order); each start point is
// the archive entry minimizing that acquisition's scalarization. The three
// solves are deterministic and may run concurrently; candidates are merged
// and deduplicated in acquisition order.
std::vector<DesignPoint> generate_batch(const BatchContext& ctx,
                                        const ParetoArchive& archive,
                                        std::span<const AcquisitionSpec> acqs,
                                        Rng& rng);

}  // namespace mobo
