#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ordineq/errors.hpp"

// Level and inequality measures for ordinal categorical distributions.
//
// A distribution over K ordered categories is described by its probability
// vector p(1..K). Status of an individual in category k is the cumulative
// proportion F(k); the generalized Lorenz curve GL(u) accumulates status
// over the population share u. Everything here is a pure function of the
// probabilities: category labels never enter, only their order.

namespace ordineq {

template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = VecX<double>;
using Mat = MatX<double>;

/// Three-way outcome of a dominance comparison between X and Y.
enum class Dominance { XDominates, YDominates, None };

namespace detail {

template <class Derived>
inline void require_vector(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (x.rows() != 1 && x.cols() != 1)
    throw DimensionError(std::string(what) + ": expected a vector");
}

template <class DX, class DY>
inline void require_same_size(const Eigen::MatrixBase<DX>& x,
                              const Eigen::MatrixBase<DY>& y, const char* what) {
  if (x.size() != y.size())
    throw DimensionError(std::string(what) + ": category counts differ");
}

}  // namespace detail

/// Cumulative distribution F(k) = sum_{j<=k} p(j).
template <class Derived>
VecX<typename Derived::Scalar> cdf(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  detail::require_vector(probs, "cdf");
  VecX<Scalar> cum(probs.size());
  Scalar run = 0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    run += probs(k);
    cum(k) = run;
  }
  return cum;
}

/// Share of the population in the bottom two categories, p(1) + p(2).
template <class Derived>
typename Derived::Scalar headcount(const Eigen::MatrixBase<Derived>& probs) {
  detail::require_vector(probs, "headcount");
  if (probs.size() < 2)
    throw DimensionError("headcount: needs at least two categories");
  return probs(0) + probs(1);
}

/// Cowell-Flachaire inequality index over downward-looking status F(k),
/// one-parameter family with 0 <= alpha < 1:
///
///   alpha != 0:  [sum_k p(k) F(k)^alpha - 1] / (alpha (alpha - 1))
///   alpha == 0:  -sum_k p(k) log F(k)
///
/// Empty categories contribute nothing, even where F(k) = 0. Zero iff the
/// distribution is degenerate. Values of alpha outside [0, 1) are rejected.
template <class Derived>
typename Derived::Scalar cf_index(const Eigen::MatrixBase<Derived>& probs,
                                  typename Derived::Scalar alpha) {
  using Scalar = typename Derived::Scalar;
  detail::require_vector(probs, "cf_index");
  if (!(alpha >= 0 && alpha < 1))
    throw DomainError("cf_index: alpha must lie in [0, 1)");
  Scalar run = 0;
  Scalar acc = 0;
  if (alpha == Scalar(0)) {
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
      run += probs(k);
      if (probs(k) > 0) acc -= probs(k) * std::log(run);
    }
  } else {
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
      run += probs(k);
      if (probs(k) > 0) acc += probs(k) * std::pow(run, alpha);
    }
    acc = (acc - 1) / (alpha * (alpha - 1));
  }
  return std::max(acc, Scalar(0));
}

/// Piecewise-linear generalized Lorenz curve. Breakpoints sit at
/// (F(k), sum_{j<=k} p(j) F(j)) for k = 0..K; segment k has slope F(k).
/// Empty categories produce coincident breakpoints. The curve lies on or
/// below the 45-degree line and meets it everywhere iff the distribution
/// is degenerate.
template <class Scalar>
class GLCurveT {
public:
  GLCurveT(VecX<Scalar> u, VecX<Scalar> v) : u_(std::move(u)), v_(std::move(v)) {
    if (u_.size() != v_.size() || u_.size() < 2)
      throw DimensionError("GLCurve: needs matching u/value breakpoints");
    const Scalar slack = Scalar(1e-9);
    if (std::abs(u_(0)) > slack || std::abs(v_(0)) > slack)
      throw DomainError("GLCurve: curve must start at (0, 0)");
    for (Eigen::Index i = 1; i < u_.size(); ++i) {
      if (u_(i) < u_(i - 1) || v_(i) < v_(i - 1))
        throw DomainError("GLCurve: breakpoints must be nondecreasing");
      if (v_(i) > u_(i) + slack)
        throw DomainError("GLCurve: curve must not rise above the diagonal");
    }
  }

  Eigen::Index breakpoints() const { return u_.size(); }
  const VecX<Scalar>& u() const { return u_; }
  const VecX<Scalar>& values() const { return v_; }

  /// GL(1), equal to sum_k p(k) F(k) for a curve built from probabilities.
  Scalar endpoint() const { return v_(v_.size() - 1); }

  /// Evaluate at population share x in [0, 1] by linear interpolation.
  Scalar value(Scalar x) const {
    if (!(x >= 0 && x <= 1)) throw DomainError("GLCurve: u must lie in [0, 1]");
    const Eigen::Index last = u_.size() - 1;
    if (x <= u_(0)) return v_(0);
    if (x >= u_(last)) return v_(last);
    const Scalar* begin = u_.data();
    const Scalar* it = std::lower_bound(begin, begin + u_.size(), x);
    const Eigen::Index i = it - begin;
    // lower_bound lands on the first breakpoint with u >= x. Coincident
    // breakpoints share their value, so an exact hit needs no tie-breaking.
    if (u_(i) == x) return v_(i);
    return v_(i - 1) + (x - u_(i - 1)) * (v_(i) - v_(i - 1)) / (u_(i) - u_(i - 1));
  }

  Scalar operator()(Scalar x) const { return value(x); }

private:
  VecX<Scalar> u_;
  VecX<Scalar> v_;
};

using GLCurve = GLCurveT<double>;

template <class Derived>
GLCurveT<typename Derived::Scalar> gl_curve(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  detail::require_vector(probs, "gl_curve");
  const Eigen::Index n = probs.size();
  VecX<Scalar> u(n + 1);
  VecX<Scalar> v(n + 1);
  u(0) = 0;
  v(0) = 0;
  Scalar cum = 0;
  Scalar acc = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cum += probs(k);
    acc += probs(k) * cum;
    u(k + 1) = cum;
    v(k + 1) = acc;
  }
  return GLCurveT<Scalar>(std::move(u), std::move(v));
}

/// Jenkins inequality index: twice the area between the 45-degree line and
/// the GL curve, evaluated as the closed-form trapezoid sum
/// 1 - sum_k p(k+1) [GL(F(k)) + GL(F(k+1))]. Zero at perfect equality.
template <class Derived>
typename Derived::Scalar jenkins_index(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  detail::require_vector(probs, "jenkins_index");
  Scalar cum = 0;
  Scalar gl = 0;
  Scalar gl_prev = 0;
  Scalar acc = 0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    cum += probs(k);
    gl += probs(k) * cum;
    acc += probs(k) * (gl_prev + gl);
    gl_prev = gl;
  }
  return std::max(Scalar(1) - acc, Scalar(0));
}

/// First order stochastic dominance: X dominates iff F_X(k) <= F_Y(k) for
/// every k = 1..K-1 with strict inequality somewhere. Identical CDFs (and
/// any crossing) classify as None.
template <class DX, class DY>
Dominance fsd_compare(const Eigen::MatrixBase<DX>& px, const Eigen::MatrixBase<DY>& py) {
  detail::require_vector(px, "fsd_compare");
  detail::require_vector(py, "fsd_compare");
  detail::require_same_size(px, py, "fsd_compare");
  using Scalar = typename DX::Scalar;
  Scalar fx = 0, fy = 0;
  bool x_all_le = true, y_all_le = true, x_some_lt = false, y_some_lt = false;
  for (Eigen::Index k = 0; k + 1 < px.size(); ++k) {
    fx += px(k);
    fy += py(k);
    if (fx > fy) x_all_le = false;
    if (fy > fx) y_all_le = false;
    if (fx < fy) x_some_lt = true;
    if (fy < fx) y_some_lt = true;
  }
  if (x_all_le && x_some_lt) return Dominance::XDominates;
  if (y_all_le && y_some_lt) return Dominance::YDominates;
  return Dominance::None;
}

/// Restricted dominance over the bottom two categories: X dominates iff
/// H_X < H_Y and p_X(1) < p_Y(1), both strict. With K = 2 the headcount
/// condition is vacuous (H = 1 on both sides), so the outcome is None.
template <class DX, class DY>
Dominance restricted_fsd_compare(const Eigen::MatrixBase<DX>& px,
                                 const Eigen::MatrixBase<DY>& py) {
  detail::require_vector(px, "restricted_fsd_compare");
  detail::require_vector(py, "restricted_fsd_compare");
  detail::require_same_size(px, py, "restricted_fsd_compare");
  if (px.size() < 2)
    throw DimensionError("restricted_fsd_compare: needs at least two categories");
  if (px.size() == 2) return Dominance::None;
  using Scalar = typename DX::Scalar;
  const Scalar hx = px(0) + px(1);
  const Scalar hy = py(0) + py(1);
  if (hx < hy && px(0) < py(0)) return Dominance::XDominates;
  if (hy < hx && py(0) < px(0)) return Dominance::YDominates;
  return Dominance::None;
}

/// Interior evaluation grid for generalized Lorenz dominance: step, 2*step,
/// ... strictly below 1. The default step 0.01 yields the 99-point grid.
inline Vec default_gld_grid(double step = 0.01) {
  if (!(step > 0.0 && step <= 0.5))
    throw DomainError("default_gld_grid: step must lie in (0, 0.5]");
  std::vector<double> pts;
  for (int i = 1;; ++i) {
    const double u = i * step;
    if (u >= 1.0 - 1e-9) break;
    pts.push_back(u);
  }
  return Eigen::Map<const Vec>(pts.data(), static_cast<Eigen::Index>(pts.size()));
}

/// Generalized Lorenz dominance on an evaluation grid: X dominates iff
/// GL_X(u) >= GL_Y(u) at every grid point with strict inequality at one or
/// more. Grid points must be sorted and strictly inside (0, 1).
template <class DX, class DY>
Dominance gld_compare(const Eigen::MatrixBase<DX>& px, const Eigen::MatrixBase<DY>& py,
                      const Eigen::Ref<const Vec>& grid) {
  detail::require_vector(px, "gld_compare");
  detail::require_vector(py, "gld_compare");
  detail::require_same_size(px, py, "gld_compare");
  if (grid.size() == 0) throw DomainError("gld_compare: empty evaluation grid");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(grid(i) > 0.0 && grid(i) < 1.0))
      throw DomainError("gld_compare: grid points must lie strictly inside (0, 1)");
    if (i > 0 && !(grid(i) > grid(i - 1)))
      throw DomainError("gld_compare: grid points must be strictly increasing");
  }
  const auto cx = gl_curve(px);
  const auto cy = gl_curve(py);
  bool x_all_ge = true, y_all_ge = true, x_some_gt = false, y_some_gt = false;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double gx = cx.value(grid(i));
    const double gy = cy.value(grid(i));
    if (gx < gy) x_all_ge = false;
    if (gy < gx) y_all_ge = false;
    if (gx > gy) x_some_gt = true;
    if (gy > gx) y_some_gt = true;
  }
  if (x_all_ge && x_some_gt) return Dominance::XDominates;
  if (y_all_ge && y_some_gt) return Dominance::YDominates;
  return Dominance::None;
}

/// A validated probability vector over K >= 2 ordered categories.
///
/// The checked constructor accepts probabilities that already sum to 1 up
/// to tolerance 1e-6 (larger deviations are data errors and rejected);
/// normalized() accepts any nonnegative mass vector with positive total.
/// Either way the stored vector is renormalized, so the sum is 1 to within
/// 1e-12 and every downstream consumer can rely on it.
class ProbabilityVector {
public:
  explicit ProbabilityVector(Vec probs) : p_(std::move(probs)) {
    validate_entries(p_);
    const double total = p_.sum();
    if (std::abs(total - 1.0) > 1e-6)
      throw DomainError("ProbabilityVector: probabilities must sum to 1 (got " +
                        std::to_string(total) + ")");
    p_ /= total;
  }

  static ProbabilityVector normalized(Vec mass) {
    validate_entries(mass);
    const double total = mass.sum();
    if (!(total > 0.0))
      throw DomainError("ProbabilityVector: total mass must be positive");
    mass /= total;
    return ProbabilityVector(std::move(mass), normalized_tag{});
  }

  const Vec& probs() const { return p_; }
  Eigen::Index categories() const { return p_.size(); }
  double operator()(Eigen::Index k) const { return p_(k); }

  Vec cdf() const { return ordineq::cdf(p_); }

private:
  struct normalized_tag {};
  ProbabilityVector(Vec probs, normalized_tag) : p_(std::move(probs)) {}

  static void validate_entries(const Vec& p) {
    if (p.size() < 2)
      throw DimensionError("ProbabilityVector: needs at least two categories");
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (!std::isfinite(p(k)) || p(k) < 0.0)
        throw DomainError("ProbabilityVector: entries must be finite and nonnegative");
    }
  }

  Vec p_;
};

// Wrappers over the validated type.
inline double headcount(const ProbabilityVector& p) { return headcount(p.probs()); }
inline double cf_index(const ProbabilityVector& p, double alpha) {
  return cf_index(p.probs(), alpha);
}
inline double jenkins_index(const ProbabilityVector& p) { return jenkins_index(p.probs()); }
inline GLCurve gl_curve(const ProbabilityVector& p) { return gl_curve(p.probs()); }
inline Dominance fsd_compare(const ProbabilityVector& x, const ProbabilityVector& y) {
  return fsd_compare(x.probs(), y.probs());
}
inline Dominance restricted_fsd_compare(const ProbabilityVector& x,
                                        const ProbabilityVector& y) {
  return restricted_fsd_compare(x.probs(), y.probs());
}
inline Dominance gld_compare(const ProbabilityVector& x, const ProbabilityVector& y,
                             const Eigen::Ref<const Vec>& grid) {
  return gld_compare(x.probs(), y.probs(), grid);
}

}  // namespace ordineq
