#include "mobo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace mobo {

namespace {

double sq_dist(const EmbeddedPoint& a, const EmbeddedPoint& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double scalarize(const AcquisitionSpec& acq, const ObjectiveVector& f,
                 std::span<const double> eps) {
  return acq.kind == AcquisitionKind::FixedWeight
             ? scalarize_fixed(f, acq.weights)
             : scalarize_epsilon(f, acq.target_index, eps, acq.penalty);
}

// Uniform draw in the d-ball of radius `radius`: Gaussian direction scaled
// by radius * u^(1/d).
EmbeddedPoint ball_offset(std::size_t d, double radius, Rng& rng) {
  EmbeddedPoint dir(d);
  double norm_sq = 0.0;
  for (auto& c : dir) {
    c = rng.normal(0.0, 1.0);
    norm_sq += c * c;
  }
  double norm = std::sqrt(norm_sq);
  if (norm == 0.0) {
    dir[0] = 1.0;
    norm = 1.0;
  }
  const double r = radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
  for (auto& c : dir) c *= r / norm;
  return dir;
}

}  // namespace

AcquisitionSpec AcquisitionSpec::fixed(std::vector<double> w) {
  double sum = 0.0;
  for (double wi : w) {
    if (wi < 0.0)
      throw std::invalid_argument("fixed-weight acquisition: negative weight");
    sum += wi;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("fixed-weight acquisition: weights must sum to 1");
  AcquisitionSpec a;
  a.kind = AcquisitionKind::FixedWeight;
  a.weights = std::move(w);
  return a;
}

AcquisitionSpec AcquisitionSpec::epsilon(int target, double rho) {
  if (target < 0 || target > 1)
    throw std::invalid_argument("epsilon-constraint acquisition: bad target index");
  if (rho <= 0.0)
    throw std::invalid_argument("epsilon-constraint acquisition: rho must be > 0");
  AcquisitionSpec a;
  a.kind = AcquisitionKind::EpsilonConstraint;
  a.target_index = target;
  a.penalty = rho;
  return a;
}

double scalarize_fixed(const ObjectiveVector& f, std::span<const double> w) {
  if (w.size() != f.f.size())
    throw std::invalid_argument("scalarize_fixed: weight/objective dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.f[i];
  return s;
}

double scalarize_epsilon(const ObjectiveVector& f, int target,
                         std::span<const double> eps, double rho) {
  double v = f.f[static_cast<std::size_t>(target)];
  for (std::size_t j = 0; j < f.f.size(); ++j) {
    if (j == static_cast<std::size_t>(target)) continue;
    const double violation = f.f[j] - eps[j];
    if (violation > 0.0) v += rho * violation * violation;
  }
  return v;
}

bool ParetoArchive::insert(ArchiveEntry entry) {
  for (const auto& e : entries_) {
    if (dominates(e.objectives, entry.objectives)) return false;
    if (e.objectives.f == entry.objectives.f) return false;  // earlier index wins
  }
  std::erase_if(entries_, [&](const ArchiveEntry& e) {
    return dominates(entry.objectives, e.objectives);
  });
  entries_.push_back(std::move(entry));
  return true;
}

std::vector<DesignPoint> generate_batch(const BatchContext& ctx,
                                        const ParetoArchive& archive,
                                        std::span<const AcquisitionSpec> acqs,
                                        Rng& rng) {
  if (archive.empty())
    throw std::invalid_argument("generate_batch: archive is empty");
  const std::size_t d = ctx.problem.dimension();
  const auto& entries = archive.entries();

  // Epsilon draws happen serially in acquisition order so the solves below
  // can run concurrently without touching the generator.
  std::vector<std::vector<double>> eps(acqs.size());
  for (std::size_t a = 0; a < acqs.size(); ++a) {
    if (acqs[a].kind == AcquisitionKind::EpsilonConstraint) {
      const auto& picked = entries[rng.below(entries.size())];
      eps[a].assign(picked.objectives.f.begin(), picked.objectives.f.end());
    }
  }

  // Start point per acquisition: the archive entry with the best (recorded)
  // scalarization; earliest experiment wins ties.
  std::vector<EmbeddedPoint> starts(acqs.size());
  for (std::size_t a = 0; a < acqs.size(); ++a) {
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const double v = scalarize(acqs[a], entries[e].objectives, eps[a]);
      if (v < best_v) {
        best_v = v;
        best = e;
      }
    }
    starts[a] = ctx.problem.embed(entries[best].design);
  }

  std::vector<EmbeddedPoint> candidates(acqs.size());
  std::vector<std::exception_ptr> failures(acqs.size());
#pragma omp parallel for schedule(static)
  for (long long a = 0; a < static_cast<long long>(acqs.size()); ++a) {
    try {
      const auto& acq = acqs[static_cast<std::size_t>(a)];
      const auto& ev = eps[static_cast<std::size_t>(a)];
      auto composite = [&](const EmbeddedPoint& x) {
        const ObjectiveVector f{{-ctx.product_model.predict(x),
                                 ctx.byproduct_model.predict(x)}};
        return scalarize(acq, f, ev);
      };
      candidates[static_cast<std::size_t>(a)] =
          pattern_search(composite, starts[static_cast<std::size_t>(a)], ctx.gps)
              .best;
    } catch (...) {
      failures[static_cast<std::size_t>(a)] = std::current_exception();
    }
  }
  for (auto& ep : failures)
    if (ep) std::rethrow_exception(ep);

  // Dedupe in acquisition order: random-walk a conflicting candidate in
  // kDedupeRadius steps until it clears every evaluated point and every
  // earlier candidate, clipped to the cube. Give up after 100 attempts and
  // accept the point as is.
  std::vector<EmbeddedPoint> accepted;
  accepted.reserve(acqs.size());
  const double min_sq = kDedupeRadius * kDedupeRadius;
  auto conflicted = [&](const EmbeddedPoint& x) {
    for (const auto& e : ctx.evaluated)
      if (sq_dist(x, e) < min_sq) return true;
    for (const auto& c : accepted)
      if (sq_dist(x, c) < min_sq) return true;
    return false;
  };
  for (auto& cand : candidates) {
    for (int attempt = 0; attempt < 100 && conflicted(cand); ++attempt) {
      const EmbeddedPoint step = ball_offset(d, kDedupeRadius, rng);
      for (std::size_t k = 0; k < d; ++k)
        cand[k] = std::clamp(cand[k] + step[k], 0.0, 1.0);
    }
    accepted.push_back(std::move(cand));
  }

  std::vector<DesignPoint> batch;
  batch.reserve(accepted.size());
  for (const auto& x : accepted) batch.push_back(ctx.problem.unembed(x));
  return batch;
}

}  // namespace mobo
