#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "ordineq/measures.hpp"
#include "ordineq/sampling.hpp"

// Posterior summaries built from draw matrices: index posteriors, dominance
// probability triples, probability curves, and kernel density estimates.

namespace ordineq {

enum class Criterion { FSD, RestrictedFSD, GLD };

const char* criterion_name(Criterion c);  // "FSD", "restricted-FSD", "GLD"

enum class IndexKind { Headcount, Jenkins, CowellFlachaire };

/// Identifies one index: the kind plus, for CF, its alpha.
struct IndexId {
  IndexKind kind;
  double alpha = 0.0;

  static IndexId headcount() { return {IndexKind::Headcount}; }
  static IndexId jenkins() { return {IndexKind::Jenkins}; }
  static IndexId cf(double alpha) { return {IndexKind::CowellFlachaire, alpha}; }

  /// Display name: "H", "J", or "CF(alpha)".
  std::string name() const;
};

/// M scalar draws of one index, values(m) = index applied to draw m.
struct IndexPosterior {
  IndexId index;
  Vec values;
};

/// An alpha must accompany CF and only CF; a mismatch is a configuration
/// error, not a numeric one.
IndexPosterior index_posterior(const PosteriorDraws& draws, IndexKind kind,
                               std::optional<double> alpha = std::nullopt);

struct SummaryStats {
  double mean;
  double sd;  // divisor M-1
  double q025;
  double median;
  double q975;
};

/// Sample moments and quantiles (linear interpolation of order statistics).
SummaryStats summarize(const Eigen::Ref<const Vec>& values);
inline SummaryStats summarize(const IndexPosterior& posterior) {
  return summarize(Eigen::Ref<const Vec>(posterior.values));
}

/// The three-way dominance partition for one criterion, kept as integer
/// counts over M so the partition is exact by construction.
struct DominanceReport {
  Criterion criterion;
  long count_x = 0;
  long count_y = 0;
  long count_none = 0;

  long total() const { return count_x + count_y + count_none; }
  double prob_x() const { return static_cast<double>(count_x) / total(); }
  double prob_y() const { return static_cast<double>(count_y) / total(); }
  double prob_none() const { return static_cast<double>(count_none) / total(); }
};

// Proportion-of-draws dominance probabilities. Draw m of X is paired with
// draw m of Y; classification per draw is the deterministic three-way
// comparison, so strictness handles exact ties the same way everywhere.
DominanceReport fsd_probabilities(const PosteriorDraws& x, const PosteriorDraws& y);
DominanceReport restricted_fsd_probabilities(const PosteriorDraws& x,
                                             const PosteriorDraws& y);
DominanceReport gld_probabilities(const PosteriorDraws& x, const PosteriorDraws& y,
                                  const Eigen::Ref<const Vec>& grid);

/// Which distribution's dominance a probability curve measures.
enum class Direction { XOverY, YOverX };

/// Dominance probability restricted to a prefix of the axis: categories
/// <= k for FSD, grid points <= u for GLD. Prefix events are nested, so the
/// curve is nonincreasing, and the scalar dominance probability never
/// exceeds its minimum.
struct ProbabilityCurve {
  Criterion criterion;
  Direction direction;
  Vec axis;
  Vec probs;
};

// Curves count weak prefix inequalities (<= for FSD, >= for GLD); the
// strict-somewhere requirement applies only to the scalar reports above.
ProbabilityCurve probability_curve_fsd(const PosteriorDraws& x, const PosteriorDraws& y,
                                       Direction direction = Direction::XOverY);
ProbabilityCurve probability_curve_gld(const PosteriorDraws& x, const PosteriorDraws& y,
                                       const Eigen::Ref<const Vec>& grid,
                                       Direction direction = Direction::XOverY);

struct DensityEstimate {
  Vec grid;
  Vec density;
  double bandwidth;
};

/// Gaussian-kernel density on a 512-point grid spanning [min-3h, max+3h].
/// Default bandwidth is Silverman's rule 0.9 min(sd, IQR/1.34) M^(-1/5),
/// falling back to sd when the IQR is zero. Needs M >= 10 and sd > 0.
DensityEstimate kde(const IndexPosterior& posterior,
                    std::optional<double> bandwidth = std::nullopt);

}  // namespace ordineq
