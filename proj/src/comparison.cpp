#include "ordineq/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace ordineq {

const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::FSD: return "FSD";
    case Criterion::RestrictedFSD: return "restricted-FSD";
    case Criterion::GLD: return "GLD";
  }
  return "?";
}

std::string IndexId::name() const {
  switch (kind) {
    case IndexKind::Headcount: return "H";
    case IndexKind::Jenkins: return "J";
    case IndexKind::CowellFlachaire: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "CF(%g)", alpha);
      return buf;
    }
  }
  return "?";
}

IndexPosterior index_posterior(const PosteriorDraws& draws, IndexKind kind,
                               std::optional<double> alpha) {
  if (kind == IndexKind::CowellFlachaire && !alpha)
    throw ConfigError("index_posterior: CF requires an alpha");
  if (kind != IndexKind::CowellFlachaire && alpha)
    throw ConfigError("index_posterior: alpha only applies to CF");

  IndexId id;
  switch (kind) {
    case IndexKind::Headcount: id = IndexId::headcount(); break;
    case IndexKind::Jenkins: id = IndexId::jenkins(); break;
    case IndexKind::CowellFlachaire: id = IndexId::cf(*alpha); break;
  }

  const Mat& rows = draws.draws();
  Vec values(rows.rows());
  for (Eigen::Index m = 0; m < rows.rows(); ++m) {
    const auto row = rows.row(m).transpose();
    switch (kind) {
      case IndexKind::Headcount: values(m) = headcount(row); break;
      case IndexKind::Jenkins: values(m) = jenkins_index(row); break;
      case IndexKind::CowellFlachaire: values(m) = cf_index(row, *alpha); break;
    }
  }
  return {id, std::move(values)};
}

namespace {

// Linear interpolation of order statistics on an already-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const auto n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void require_paired(const PosteriorDraws& x, const PosteriorDraws& y) {
  if (x.count() != y.count())
    throw DimensionError("paired dominance estimator: draw counts differ");
  if (x.categories() != y.categories())
    throw DimensionError("paired dominance estimator: category counts differ");
}

// GL breakpoints of one draw row, filled into preallocated buffers.
void gl_breakpoints(const Mat& rows, Eigen::Index m, std::vector<double>& u,
                    std::vector<double>& v) {
  const Eigen::Index k_count = rows.cols();
  u[0] = 0.0;
  v[0] = 0.0;
  double cum = 0.0, acc = 0.0;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    cum += rows(m, k);
    acc += rows(m, k) * cum;
    u[k + 1] = cum;
    v[k + 1] = acc;
  }
}

// Evaluate the piecewise-linear curve at an ascending grid in one pass.
void gl_on_grid(const std::vector<double>& u, const std::vector<double>& v,
                const Eigen::Ref<const Vec>& grid, std::vector<double>& out) {
  const std::size_t last = u.size() - 1;
  std::size_t seg = 1;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double t = grid(i);
    while (seg < last && u[seg] < t) ++seg;
    if (u[seg] <= t) {
      out[i] = v[seg];  // exact hit, or t beyond the endpoint by rounding
    } else {
      out[i] = v[seg - 1] + (t - u[seg - 1]) * (v[seg] - v[seg - 1]) / (u[seg] - u[seg - 1]);
    }
  }
}

void validate_grid(const Eigen::Ref<const Vec>& grid) {
  if (grid.size() == 0) throw DomainError("gld estimator: empty evaluation grid");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(grid(i) > 0.0 && grid(i) < 1.0))
      throw DomainError("gld estimator: grid points must lie strictly inside (0, 1)");
    if (i > 0 && !(grid(i) > grid(i - 1)))
      throw DomainError("gld estimator: grid points must be strictly increasing");
  }
}

void tally(DominanceReport& report, Dominance outcome) {
  switch (outcome) {
    case Dominance::XDominates: ++report.count_x; break;
    case Dominance::YDominates: ++report.count_y; break;
    case Dominance::None: ++report.count_none; break;
  }
}

}  // namespace

SummaryStats summarize(const Eigen::Ref<const Vec>& values) {
  const Eigen::Index m_count = values.size();
  if (m_count < 2) throw DomainError("summarize: needs at least two draws");
  const double mean = values.mean();
  const double sd =
      std::sqrt((values.array() - mean).square().sum() / static_cast<double>(m_count - 1));
  std::vector<double> sorted(values.data(), values.data() + m_count);
  std::sort(sorted.begin(), sorted.end());
  return {mean, sd, quantile_sorted(sorted, 0.025), quantile_sorted(sorted, 0.5),
          quantile_sorted(sorted, 0.975)};
}

DominanceReport fsd_probabilities(const PosteriorDraws& x, const PosteriorDraws& y) {
  require_paired(x, y);
  DominanceReport report{Criterion::FSD, 0, 0, 0};
  const Mat& dx = x.draws();
  const Mat& dy = y.draws();
  for (Eigen::Index m = 0; m < dx.rows(); ++m) {
    tally(report, fsd_compare(dx.row(m).transpose(), dy.row(m).transpose()));
  }
  return report;
}

DominanceReport restricted_fsd_probabilities(const PosteriorDraws& x,
                                             const PosteriorDraws& y) {
  require_paired(x, y);
  DominanceReport report{Criterion::RestrictedFSD, 0, 0, 0};
  const Mat& dx = x.draws();
  const Mat& dy = y.draws();
  for (Eigen::Index m = 0; m < dx.rows(); ++m) {
    tally(report, restricted_fsd_compare(dx.row(m).transpose(), dy.row(m).transpose()));
  }
  return report;
}

DominanceReport gld_probabilities(const PosteriorDraws& x, const PosteriorDraws& y,
                                  const Eigen::Ref<const Vec>& grid) {
  require_paired(x, y);
  validate_grid(grid);
  DominanceReport report{Criterion::GLD, 0, 0, 0};
  const Mat& dx = x.draws();
  const Mat& dy = y.draws();
  const auto n = static_cast<std::size_t>(x.categories()) + 1;
  std::vector<double> ux(n), vx(n), uy(n), vy(n);
  std::vector<double> gx(grid.size()), gy(grid.size());
  for (Eigen::Index m = 0; m < dx.rows(); ++m) {
    gl_breakpoints(dx, m, ux, vx);
    gl_breakpoints(dy, m, uy, vy);
    gl_on_grid(ux, vx, grid, gx);
    gl_on_grid(uy, vy, grid, gy);
    bool x_all_ge = true, y_all_ge = true, x_some_gt = false, y_some_gt = false;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (gx[i] < gy[i]) x_all_ge = false;
      if (gy[i] < gx[i]) y_all_ge = false;
      if (gx[i] > gy[i]) x_some_gt = true;
      if (gy[i] > gx[i]) y_some_gt = true;
    }
    if (x_all_ge && x_some_gt)
      ++report.count_x;
    else if (y_all_ge && y_some_gt)
      ++report.count_y;
    else
      ++report.count_none;
  }
  return report;
}

ProbabilityCurve probability_curve_fsd(const PosteriorDraws& x, const PosteriorDraws& y,
                                       Direction direction) {
  require_paired(x, y);
  const PosteriorDraws& first = direction == Direction::XOverY ? x : y;
  const PosteriorDraws& second = direction == Direction::XOverY ? y : x;
  const Mat& dx = first.draws();
  const Mat& dy = second.draws();
  const Eigen::Index k_count = x.categories();
  std::vector<long> counts(static_cast<std::size_t>(k_count - 1), 0);
  for (Eigen::Index m = 0; m < dx.rows(); ++m) {
    double fx = 0.0, fy = 0.0;
    for (Eigen::Index k = 0; k + 1 < k_count; ++k) {
      fx += dx(m, k);
      fy += dy(m, k);
      if (fx > fy) break;
      ++counts[static_cast<std::size_t>(k)];
    }
  }
  ProbabilityCurve curve{Criterion::FSD, direction, Vec(k_count - 1), Vec(k_count - 1)};
  const auto m_count = static_cast<double>(dx.rows());
  for (Eigen::Index k = 0; k + 1 < k_count; ++k) {
    curve.axis(k) = static_cast<double>(k + 1);
    curve.probs(k) = static_cast<double>(counts[static_cast<std::size_t>(k)]) / m_count;
  }
  return curve;
}

ProbabilityCurve probability_curve_gld(const PosteriorDraws& x, const PosteriorDraws& y,
                                       const Eigen::Ref<const Vec>& grid,
                                       Direction direction) {
  require_paired(x, y);
  validate_grid(grid);
  const PosteriorDraws& first = direction == Direction::XOverY ? x : y;
  const PosteriorDraws& second = direction == Direction::XOverY ? y : x;
  const Mat& dx = first.draws();
  const Mat& dy = second.draws();
  const auto n = static_cast<std::size_t>(x.categories()) + 1;
  std::vector<double> ux(n), vx(n), uy(n), vy(n);
  std::vector<double> gx(grid.size()), gy(grid.size());
  std::vector<long> counts(static_cast<std::size_t>(grid.size()), 0);
  for (Eigen::Index m = 0; m < dx.rows(); ++m) {
    gl_breakpoints(dx, m, ux, vx);
    gl_breakpoints(dy, m, uy, vy);
    gl_on_grid(ux, vx, grid, gx);
    gl_on_grid(uy, vy, grid, gy);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (gx[i] < gy[i]) break;
      ++counts[static_cast<std::size_t>(i)];
    }
  }
  ProbabilityCurve curve{Criterion::GLD, direction, grid, Vec(grid.size())};
  const auto m_count = static_cast<double>(dx.rows());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    curve.probs(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) / m_count;
  return curve;
}

DensityEstimate kde(const IndexPosterior& posterior, std::optional<double> bandwidth) {
  const Eigen::Index m_count = posterior.values.size();
  if (m_count < 10) throw DomainError("kde: needs at least 10 draws");
  const double mean = posterior.values.mean();
  const double sd = std::sqrt((posterior.values.array() - mean).square().sum() /
                              static_cast<double>(m_count - 1));
  if (!(sd > 0.0)) throw DomainError("kde: degenerate sample (zero variance)");

  double h;
  if (bandwidth) {
    h = *bandwidth;
    if (!(h > 0.0)) throw DomainError("kde: bandwidth must be positive");
  } else {
    std::vector<double> sorted(posterior.values.data(), posterior.values.data() + m_count);
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd;  // flat middle, nonzero tails
    h = 0.9 * spread * std::pow(static_cast<double>(m_count), -0.2);
  }

  constexpr int kGridPoints = 512;
  const double lo = posterior.values.minCoeff() - 3.0 * h;
  const double hi = posterior.values.maxCoeff() + 3.0 * h;
  DensityEstimate est{Vec::LinSpaced(kGridPoints, lo, hi), Vec(kGridPoints), h};
  const double norm = 1.0 / (static_cast<double>(m_count) * h * std::sqrt(2.0 * M_PI));
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = est.grid(i);
    double acc = 0.0;
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const double z = (x - posterior.values(m)) / h;
      acc += std::exp(-0.5 * z * z);
    }
    est.density(i) = norm * acc;
  }
  return est;
}

}  // namespace ordineq
