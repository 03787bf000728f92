#include "folia/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "folia/sampling.hpp"

namespace folia {

ConvexSet::ConvexSet(Eigen::Index dim, std::string kind)
    : dim_(dim), kind_(std::move(kind)) {
  if (dim < 1) throw input_error(kind_ + ": dimension must be >= 1");
}

void ConvexSet::check_dim(const Vec& x) const {
  require_finite(x, kind_.c_str());
  require_dim(x, dim_, kind_.c_str());
}

double ConvexSet::distance(const Vec& x) const { return (x - project(x)).norm(); }

double ConvexSet::interior_depth(const Vec& x) const {
  check_dim(x);
  if (!contains(x)) return -distance(x);
  // Shortest boundary crossing along a deterministic fan of rays.
  double depth = std::numeric_limits<double>::infinity();
  const int n_dirs = 32;
  for (int k = 0; k < n_dirs; ++k) {
    Vec u = halton_direction(static_cast<std::uint64_t>(k) + 1, static_cast<int>(dim_));
    double lo = 0.0, hi = 1.0;
    int doublings = 0;
    while (contains(x + hi * u) && doublings++ < 60) hi *= 2.0;
    if (doublings >= 60) continue;  // unbounded direction
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      (contains(x + mid * u) ? lo : hi) = mid;
    }
    depth = std::min(depth, lo);
  }
  return std::isfinite(depth) ? depth : std::numeric_limits<double>::max();
}

std::vector<Vec> ConvexSet::boundary_samples(int n) const {
  if (n < 1) throw input_error(kind_ + ": boundary sample count must be >= 1");
  const Vec p = anchor();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Vec u = halton_direction(static_cast<std::uint64_t>(k) + 1, static_cast<int>(dim_));
    double lo = 0.0, hi = 1.0;
    int doublings = 0;
    while (contains(p + hi * u) && doublings++ < 60) hi *= 2.0;
    if (doublings >= 60) continue;
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      (contains(p + mid * u) ? lo : hi) = mid;
    }
    out.push_back(p + lo * u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ball

Ball::Ball(Vec center, double radius)
    : ConvexSet(center.size(), "ball"), center_(std::move(center)), radius_(radius) {
  require_finite(center_, "ball center");
  if (!(radius > 0.0)) throw input_error("ball: radius must be positive");
}

Vec Ball::project(const Vec& x) const {
  check_dim(x);
  Vec r = x - center_;
  double n = r.norm();
  if (n <= radius_) return x;
  return center_ + (radius_ / n) * r;
}

double Ball::distance(const Vec& x) const {
  check_dim(x);
  return std::max(0.0, (x - center_).norm() - radius_);
}

double Ball::interior_depth(const Vec& x) const {
  check_dim(x);
  return radius_ - (x - center_).norm();
}

std::vector<Vec> Ball::boundary_samples(int n) const {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const Vec& u : halton_directions(n, static_cast<int>(dim_)))
    out.push_back(center_ + radius_ * u);
  return out;
}

// ---------------------------------------------------------------------------
// Halfspace

Halfspace::Halfspace(Vec normal, double offset)
    : ConvexSet(normal.size(), "halfspace"),
      normal_(std::move(normal)),
      offset_(offset),
      norm_(normal_.norm()) {
  require_finite(normal_, "halfspace normal");
  if (!(norm_ > 0.0)) throw input_error("halfspace: normal must be nonzero");
}

Vec Halfspace::project(const Vec& x) const {
  check_dim(x);
  double excess = normal_.dot(x) - offset_;
  if (excess <= 0.0) return x;
  return x - (excess / (norm_ * norm_)) * normal_;
}

double Halfspace::distance(const Vec& x) const {
  check_dim(x);
  return std::max(0.0, (normal_.dot(x) - offset_) / norm_);
}

Vec Halfspace::anchor() const {
  return (offset_ / (norm_ * norm_)) * normal_ - normal_ / norm_;
}

double Halfspace::interior_depth(const Vec& x) const {
  check_dim(x);
  return (offset_ - normal_.dot(x)) / norm_;
}

std::vector<Vec> Halfspace::boundary_samples(int n) const {
  // Foot of the anchor on the hyperplane plus quasi-random tangent offsets.
  Vec foot = (offset_ / (norm_ * norm_)) * normal_;
  Eigen::HouseholderQR<Mat> qr(normal_);
  Mat q = qr.householderQ();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  out.push_back(foot);
  for (int k = 1; k < n; ++k) {
    Vec p = foot;
    if (dim_ > 1) {
      Vec c = 4.0 * halton_point(static_cast<std::uint64_t>(k), static_cast<int>(dim_) - 1) -
              2.0 * Vec::Ones(dim_ - 1);
      p += q.rightCols(dim_ - 1) * c;
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ellipsoid

Ellipsoid::Ellipsoid(Vec center, Mat shape)
    : ConvexSet(center.size(), "ellipsoid"),
      center_(std::move(center)),
      shape_(std::move(shape)) {
  require_finite(center_, "ellipsoid center");
  if (shape_.rows() != dim_ || shape_.cols() != dim_)
    throw input_error("ellipsoid: shape matrix size mismatch");
  if (!shape_.isApprox(shape_.transpose(), 1e-12))
    throw input_error("ellipsoid: shape matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(shape_);
  eigvals_ = es.eigenvalues();
  eigvecs_ = es.eigenvectors();
  if (eigvals_.minCoeff() <= 0.0)
    throw input_error("ellipsoid: shape matrix must be positive definite");
  min_semi_axis_ = 1.0 / std::sqrt(eigvals_.maxCoeff());
}

Ellipsoid Ellipsoid::from_semi_axes(Vec center, const Vec& semi_axes) {
  if (semi_axes.minCoeff() <= 0.0)
    throw input_error("ellipsoid: semi-axes must be positive");
  Mat a = semi_axes.array().square().inverse().matrix().asDiagonal();
  return Ellipsoid(std::move(center), a);
}

double Ellipsoid::gauge(const Vec& x) const {
  Vec r = x - center_;
  return r.dot(shape_ * r);
}

Vec Ellipsoid::project(const Vec& x) const {
  check_dim(x);
  if (gauge(x) <= 1.0) return x;
  // KKT: y(lam) = c + (I + lam A)^{-1}(x - c); find lam with gauge(y) = 1.
  Vec z = eigvecs_.transpose() * (x - center_);
  auto excess = [&](double lam) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i) {
      double yi = z[i] / (1.0 + lam * eigvals_[i]);
      g += eigvals_[i] * yi * yi;
    }
    return g - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) throw numerical_error("ellipsoid projection bracket failure", excess(hi));
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  double lam = 0.5 * (lo + hi);
  Vec y(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) y[i] = z[i] / (1.0 + lam * eigvals_[i]);
  return center_ + eigvecs_ * y;
}

double Ellipsoid::interior_depth(const Vec& x) const {
  check_dim(x);
  double g = gauge(x);
  if (g > 1.0) return -distance(x);
  // The ball of radius (1 - sqrt(g)) * r_min around x lies inside.
  return (1.0 - std::sqrt(std::max(g, 0.0))) * min_semi_axis_;
}

std::vector<Vec> Ellipsoid::boundary_samples(int n) const {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const Vec& u : halton_directions(n, static_cast<int>(dim_))) {
    double g = u.dot(shape_ * u);
    out.push_back(center_ + u / std::sqrt(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polytope

Polytope::Polytope(Mat normals, Vec offsets, Vec interior_point)
    : ConvexSet(normals.cols(), "polytope"),
      normals_(std::move(normals)),
      offsets_(std::move(offsets)),
      interior_(std::move(interior_point)) {
  if (normals_.rows() < 1) throw input_error("polytope: needs at least one halfspace");
  if (offsets_.size() != normals_.rows())
    throw input_error("polytope: offsets size mismatch");
  require_dim(interior_, dim_, "polytope interior point");
  row_norms_ = normals_.rowwise().norm();
  if (row_norms_.minCoeff() <= 0.0)
    throw input_error("polytope: zero halfspace normal");
  Vec slack = offsets_ - normals_ * interior_;
  if (slack.minCoeff() <= 0.0)
    throw input_error("polytope: certified interior point is not strictly interior");
}

Polytope Polytope::box(const Vec& lo, const Vec& hi) {
  const Eigen::Index d = lo.size();
  if (hi.size() != d || ((hi - lo).minCoeff() <= 0.0))
    throw input_error("polytope box: bounds must satisfy lo < hi");
  Mat a = Mat::Zero(2 * d, d);
  Vec b(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    a(2 * i, i) = 1.0;
    b[2 * i] = hi[i];
    a(2 * i + 1, i) = -1.0;
    b[2 * i + 1] = -lo[i];
  }
  return Polytope(std::move(a), std::move(b), 0.5 * (lo + hi));
}

double Polytope::max_violation(const Vec& x) const {
  return ((normals_ * x - offsets_).array() / row_norms_.array()).maxCoeff();
}

Vec Polytope::project(const Vec& x) const {
  check_dim(x);
  if (max_violation(x) <= 0.0) return x;
  const Eigen::Index m = normals_.rows();
  Vec z = x;
  Mat corr = Mat::Zero(m, dim_);
  const double scale = 1.0 + x.norm();
  const int max_sweeps = 10000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      Vec w = z + corr.row(i).transpose();
      double excess = normals_.row(i).dot(w) - offsets_[i];
      Vec y = w;
      if (excess > 0.0)
        y -= (excess / (row_norms_[i] * row_norms_[i])) * normals_.row(i).transpose();
      corr.row(i) = (w - y).transpose();
      moved = std::max(moved, (z - y).norm());
      z = y;
    }
    if (moved <= 1e-13 * scale && max_violation(z) <= 1e-13 * scale) return z;
  }
  throw numerical_error("polytope projection: Dykstra budget exhausted",
                        max_violation(z));
}

double Polytope::interior_depth(const Vec& x) const {
  check_dim(x);
  return ((offsets_ - normals_ * x).array() / row_norms_.array()).minCoeff();
}

std::vector<Vec> Polytope::boundary_samples(int n) const {
  // Exact ray shooting from the interior anchor.
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const Vec& u : halton_directions(n, static_cast<int>(dim_))) {
    Vec slack = offsets_ - normals_ * interior_;
    Vec speed = normals_ * u;
    double step = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < normals_.rows(); ++i)
      if (speed[i] > 0.0) step = std::min(step, slack[i] / speed[i]);
    if (std::isfinite(step)) out.push_back(interior_ + step * u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SublevelSet

SublevelSet::SublevelSet(Eigen::Index dim, std::function<double(const Vec&)> f,
                         std::function<Vec(const Vec&)> grad, double level,
                         Vec interior_witness, double proj_tol, int iteration_budget)
    : ConvexSet(dim, "sublevel"),
      f_(std::move(f)),
      grad_(std::move(grad)),
      level_(level),
      witness_(std::move(interior_witness)),
      proj_tol_(proj_tol),
      budget_(iteration_budget) {
  require_dim(witness_, dim_, "sublevel witness");
  if (f_(witness_) > level_)
    throw input_error("sublevel: witness point is not in [f <= level]");
}

Vec SublevelSet::grad_at(const Vec& x) const {
  if (grad_) return grad_(x);
  const double h = 1e-7 * (1.0 + x.norm());
  Vec g(dim_);
  Vec e = x;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    e[i] = x[i] + h;
    double fp = f_(e);
    e[i] = x[i] - h;
    double fm = f_(e);
    e[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Vec SublevelSet::project(const Vec& x) const {
  check_dim(x);
  if (f_(x) <= level_) return x;
  int used = 0;
  // Inner solve: minimize 0.5*|y - x|^2 + lam * f(y). Strongly convex for
  // convex f, so plain descent with backtracking suffices.
  auto inner = [&](double lam, Vec y) {
    auto psi = [&](const Vec& p) { return 0.5 * (p - x).squaredNorm() + lam * f_(p); };
    double val = psi(y);
    while (used < budget_) {
      ++used;
      Vec g = (y - x) + lam * grad_at(y);
      double gn2 = g.squaredNorm();
      if (gn2 <= 1e-24 * (1.0 + lam) * (1.0 + lam)) break;
      double step = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        Vec cand = y - step * g;
        double cval = psi(cand);
        // Strict decrease guards against accepting a rounded-off step.
        if (cval < val && cval <= val - 0.25 * step * gn2) {
          y = cand;
          val = cval;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    // The value-based search stalls ~sqrt(eps) from the minimizer once psi
    // saturates in double precision; polish on the gradient norm instead.
    double gn = ((y - x) + lam * grad_at(y)).norm();
    double step = 1.0 / (1.0 + lam);
    while (used < budget_ && gn > 1e-12 * (1.0 + lam)) {
      ++used;
      Vec cand = y - step * ((y - x) + lam * grad_at(y));
      double cgn = ((cand - x) + lam * grad_at(cand)).norm();
      if (cgn < gn) {
        y = cand;
        gn = cgn;
        step *= 1.2;
      } else {
        step *= 0.5;
        if (step < 1e-18) break;
      }
    }
    return y;
  };
  double lo = 0.0, hi = 1.0;
  Vec y = inner(hi, x);
  while (f_(y) > level_) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15 || used >= budget_)
      throw numerical_error("sublevel projection: multiplier bracket failure",
                            f_(y) - level_);
    y = inner(hi, y);
  }
  Vec best = y;
  while (used < budget_) {
    if (hi - lo <= 1e-14 * (1.0 + hi)) break;
    double mid = 0.5 * (lo + hi);
    y = inner(mid, best);
    double v = f_(y);
    if (v > level_) {
      lo = mid;
    } else {
      hi = mid;
      best = y;
    }
    if (std::abs(v - level_) <= 1e-13 * (1.0 + std::abs(level_))) {
      best = y;
      break;
    }
  }
  if (f_(best) > level_ + kMembershipTol)
    throw numerical_error("sublevel projection: iteration budget exhausted",
                          f_(best) - level_);
  return best;
}

// ---------------------------------------------------------------------------

double normal_residual(const ConvexSet& set, const Vec& xbar, const Vec& v,
                       const std::vector<Vec>& probes) {
  if (probes.empty()) throw input_error("normal_residual: empty probe sample");
  require_dim(xbar, set.dim(), "normal_residual base point");
  require_dim(v, set.dim(), "normal_residual direction");
  double vn = v.norm();
  if (!(vn > 0.0)) throw input_error("normal_residual: zero direction");
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& y : probes) {
    Vec r = y - xbar;
    worst = std::max(worst, v.dot(r) / (vn * std::max(1.0, r.norm())));
  }
  return worst;
}

std::vector<Vec> probe_points(const ConvexSet& set, int n) {
  std::vector<Vec> probes = set.boundary_samples(n);
  probes.push_back(set.anchor());
  return probes;
}

}  // namespace folia
