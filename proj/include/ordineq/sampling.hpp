#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ordineq/errors.hpp"
#include "ordineq/measures.hpp"
#include "ordineq/rng.hpp"

// Posterior sampling of category probabilities: conjugate Dirichlet updating
// for raw counts, and a weighted Bayesian bootstrap for survey microdata.

namespace ordineq {

using CountVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Observed category counts n(1..K). A zero total is permitted: the
/// conjugate posterior then reduces to the prior.
class CountData {
public:
  explicit CountData(CountVec counts);

  const CountVec& counts() const { return counts_; }
  Eigen::Index categories() const { return counts_.size(); }
  std::int64_t total() const { return total_; }

private:
  CountVec counts_;
  std::int64_t total_;
};

struct MicroRecord {
  int category;   // 1-based
  double weight;  // > 0
};

/// Weighted survey records over K >= 2 categories. Zero or negative weights
/// are rejected outright; a silently dropped record is almost always an
/// upstream data error.
class WeightedMicrodata {
public:
  WeightedMicrodata(std::vector<MicroRecord> records, int categories);

  const std::vector<MicroRecord>& records() const { return records_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(records_.size()); }
  Eigen::Index categories() const { return categories_; }

private:
  std::vector<MicroRecord> records_;
  int categories_;
};

/// M posterior draws of the probability vector, one per row. Rows satisfy
/// the ProbabilityVector invariants (nonnegative, unit sum to 1e-12).
class PosteriorDraws {
public:
  PosteriorDraws(Mat draws, std::uint64_t seed);

  const Mat& draws() const { return draws_; }
  Eigen::Index count() const { return draws_.rows(); }
  Eigen::Index categories() const { return draws_.cols(); }
  std::uint64_t seed() const { return seed_; }

  /// Posterior mean vector (column means), as a validated probability vector.
  ProbabilityVector mean() const;

private:
  Mat draws_;
  std::uint64_t seed_;
};

/// One Dirichlet draw as a validated probability vector.
ProbabilityVector dirichlet_sample(const Eigen::Ref<const Vec>& concentration,
                                   RandomStream& stream);

/// M independent draws from the conjugate posterior
/// Dirichlet(n(1)+prior(1), ..., n(K)+prior(K)). Draw m comes from a
/// substream derived from (seed, m), so output is identical no matter how
/// the draw loop is scheduled.
PosteriorDraws conjugate_draws(const CountData& data, const Eigen::Ref<const Vec>& prior,
                               Eigen::Index draw_count, std::uint64_t seed);

/// Uniform Dirichlet(1, ..., 1) prior of length K.
Vec uniform_prior(Eigen::Index categories);

/// Weighted Bayesian bootstrap: per draw, record masses g ~ Dirichlet(1,...,1)
/// are scaled by the sampling weights and renormalized, and p(k) collects the
/// mass of the records in category k. Equal weights reduce this to the plain
/// Bayesian bootstrap. Substream discipline matches conjugate_draws.
PosteriorDraws weighted_bootstrap_draws(const WeightedMicrodata& data,
                                        Eigen::Index draw_count, std::uint64_t seed);

}  // namespace ordineq
