#include "ordineq/sampling.hpp"

#include <cmath>

namespace ordineq {

CountData::CountData(CountVec counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2)
    throw DimensionError("CountData: needs at least two categories");
  total_ = 0;
  for (Eigen::Index k = 0; k < counts_.size(); ++k) {
    if (counts_(k) < 0) throw DomainError("CountData: counts must be nonnegative");
    total_ += counts_(k);
  }
}

WeightedMicrodata::WeightedMicrodata(std::vector<MicroRecord> records, int categories)
    : records_(std::move(records)), categories_(categories) {
  if (categories_ < 2)
    throw DimensionError("WeightedMicrodata: needs at least two categories");
  if (records_.empty()) throw DomainError("WeightedMicrodata: no records");
  for (const auto& r : records_) {
    if (r.category < 1 || r.category > categories_)
      throw DomainError("WeightedMicrodata: category outside 1..K");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight))
      throw DomainError("WeightedMicrodata: weights must be positive and finite");
  }
}

PosteriorDraws::PosteriorDraws(Mat draws, std::uint64_t seed)
    : draws_(std::move(draws)), seed_(seed) {
  if (draws_.rows() < 1) throw DomainError("PosteriorDraws: needs at least one draw");
  if (draws_.cols() < 2)
    throw DimensionError("PosteriorDraws: needs at least two categories");
  for (Eigen::Index m = 0; m < draws_.rows(); ++m) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < draws_.cols(); ++k) {
      if (!(draws_(m, k) >= 0.0))
        throw DomainError("PosteriorDraws: draw entries must be nonnegative");
      total += draws_(m, k);
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw DomainError("PosteriorDraws: draw rows must sum to 1");
  }
}

ProbabilityVector PosteriorDraws::mean() const {
  return ProbabilityVector::normalized(draws_.colwise().mean().transpose());
}

ProbabilityVector dirichlet_sample(const Eigen::Ref<const Vec>& concentration,
                                   RandomStream& stream) {
  return ProbabilityVector::normalized(stream.dirichlet(concentration));
}

Vec uniform_prior(Eigen::Index categories) { return Vec::Ones(categories); }

PosteriorDraws conjugate_draws(const CountData& data, const Eigen::Ref<const Vec>& prior,
                               Eigen::Index draw_count, std::uint64_t seed) {
  if (draw_count < 1) throw DomainError("conjugate_draws: draw count must be >= 1");
  if (prior.size() != data.categories())
    throw DimensionError("conjugate_draws: prior length must match category count");
  for (Eigen::Index k = 0; k < prior.size(); ++k) {
    if (!(prior(k) > 0.0))
      throw DomainError("conjugate_draws: prior parameters must be positive");
  }
  const Vec concentration = prior + data.counts().cast<double>();
  Mat out(draw_count, data.categories());
  for (Eigen::Index m = 0; m < draw_count; ++m) {
    RandomStream stream(derive_seed(seed, static_cast<std::uint64_t>(m)));
    out.row(m) = stream.dirichlet(concentration).transpose();
  }
  return PosteriorDraws(std::move(out), seed);
}

PosteriorDraws weighted_bootstrap_draws(const WeightedMicrodata& data,
                                        Eigen::Index draw_count, std::uint64_t seed) {
  if (draw_count < 1)
    throw DomainError("weighted_bootstrap_draws: draw count must be >= 1");
  const auto& records = data.records();
  const Eigen::Index k_count = data.categories();
  Mat out(draw_count, k_count);
  for (Eigen::Index m = 0; m < draw_count; ++m) {
    RandomStream stream(derive_seed(seed, static_cast<std::uint64_t>(m)));
    Vec acc = Vec::Zero(k_count);
    double total = 0.0;
    do {
      acc.setZero();
      for (const auto& r : records) {
        // Dirichlet(1,...,1) masses are iid unit gammas before normalization;
        // the common normalizer cancels against the reweighting below.
        acc(r.category - 1) += stream.gamma(1.0) * r.weight;
      }
      // Normalize by the per-category sum so the row error stays O(K) ulps
      // no matter how many records contributed.
      total = acc.sum();
    } while (total == 0.0);
    out.row(m) = (acc / total).transpose();
  }
  return PosteriorDraws(std::move(out), seed);
}

}  // namespace ordineq
