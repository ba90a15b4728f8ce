#pragma once

// Affine maps x -> A x + b of R^n analysed against the closed unit ball.
//
// The maximum of ||A x + b|| over the unit sphere reduces, through the SVD
// A = P diag(alpha) Q^T and y = Q^T x, p = P^T b, to maximizing
//     F(y) = sum_i (alpha_i y_i + p_i)^2   on  ||y|| = 1.
// Stationary points satisfy (alpha_i^2 - lambda) y_i + alpha_i p_i = 0 and
// maxima have lambda >= alpha_1^2. For lambda > alpha_1^2 the multiplier is
// the unique root of the secular equation
//     G(lambda) = sum_i (alpha_i p_i)^2 / (lambda - alpha_i^2)^2 = 1;
// otherwise lambda = alpha_1^2, the top singular cluster carries no offset,
// and the maximizers form a sphere inside the top singular subspace.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "posmaps/errors.hpp"
#include "posmaps/operators.hpp"
#include "posmaps/random.hpp"
#include "posmaps/states.hpp"

namespace posmaps {

class AffineBallMap {
 public:
  AffineBallMap(RealMatrix linear, RealVector offset) : a_(std::move(linear)), b_(std::move(offset)) {
    if (a_.rows() != a_.cols()) throw InputError("AffineBallMap: linear part must be square");
    if (a_.rows() == 0) throw InputError("AffineBallMap: empty map");
    if (b_.size() != a_.rows()) {
      throw InputError("AffineBallMap: offset has length " + std::to_string(b_.size()) + ", expected " +
                       std::to_string(a_.rows()));
    }
    if (!a_.allFinite() || !b_.allFinite()) throw InputError("AffineBallMap: non-finite entries");
  }

  int dim() const { return static_cast<int>(a_.rows()); }
  const RealMatrix& linear() const { return a_; }
  const RealVector& offset() const { return b_; }
  RealVector operator()(const RealVector& x) const { return a_ * x + b_; }

 private:
  RealMatrix a_;
  RealVector b_;
};

/// Relative width of a singular-value cluster.
inline constexpr double kClusterTol = 1e-12;
/// Contact points closer than this are one cluster.
inline constexpr double kContactClusterRadius = 1e-4;

/// Structure of the maximizer set of ||A x + b|| on the unit sphere.
struct SphereMaximizers {
  double max_norm;
  RealVector argmax;
  double lambda;           ///< Lagrange multiplier of the maximizers
  bool boundary_family;    ///< lambda = alpha_1^2 (maximizers may form a sphere)
  int top_cluster;         ///< number of singular values equal to alpha_1
  RealVector y_fixed;      ///< rotated maximizer with the top-cluster block set to zero
  double free_radius_sq;   ///< squared radius of the maximizer sphere in the top block
  RealMatrix rotation;     ///< Q, with x = Q y
  RealVector alpha;        ///< singular values, descending
  RealVector p;            ///< rotated offset P^T b
};

namespace detail {

/// Root mu > 0 of sum w_i^2/(mu + delta_i)^2 = 1, with delta_i >= 0 and some
/// w_i != 0. Newton on 1/sqrt(G) - 1 safeguarded by bisection.
inline double solve_secular(const RealVector& w, const RealVector& delta) {
  const auto g_and_dg = [&](double mu) {
    double g = 0.0, dg = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double d = mu + delta[i];
      const double t = w[i] * w[i] / (d * d);
      g += t;
      dg -= 2.0 * t / d;
    }
    return std::pair{g, dg};
  };
  double lo = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) lo = std::max(lo, std::abs(w[i]) - delta[i]);
  double hi = w.norm();
  if (!(hi > lo)) return hi;
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto [g, dg] = g_and_dg(mu);
    const double phi = 1.0 / std::sqrt(g) - 1.0;
    if (phi == 0.0) return mu;
    if (phi < 0) lo = mu;
    else hi = mu;
    const double dphi = -0.5 * dg / (g * std::sqrt(g));
    double next = mu - phi / dphi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= 4 * std::numeric_limits<double>::epsilon() * std::max(mu, 1e-300) ||
        hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(hi, 1e-300)) {
      return next;
    }
    mu = next;
  }
  return mu;
}

}  // namespace detail

inline SphereMaximizers sphere_maximizers(const AffineBallMap& phi) {
  const int n = phi.dim();
  Eigen::JacobiSVD<RealMatrix> svd(phi.linear(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector alpha = svd.singularValues();
  const RealMatrix& q = svd.matrixV();
  const RealVector p = svd.matrixU().transpose() * phi.offset();
  const double a1 = alpha[0];

  int k = 1;
  while (k < n && alpha[k] >= a1 - kClusterTol * std::max(1.0, a1)) ++k;

  RealVector w(n), delta(n);
  for (int i = 0; i < n; ++i) {
    w[i] = alpha[i] * p[i];
    delta[i] = i < k ? 0.0 : (a1 - alpha[i]) * (a1 + alpha[i]);
  }
  const double wscale = std::max(1.0, a1) * std::max(1.0, phi.offset().norm());
  double top_w = 0.0;
  for (int i = 0; i < k; ++i) top_w = std::max(top_w, std::abs(w[i]));

  SphereMaximizers out;
  out.top_cluster = k;
  out.rotation = q;
  out.alpha = alpha;
  out.p = p;
  RealVector y = RealVector::Zero(n);

  bool boundary = false;
  if (a1 == 0.0) {
    // A = 0: the norm is ||b|| everywhere
    boundary = true;
    out.lambda = 0.0;
    out.y_fixed = RealVector::Zero(n);
    out.free_radius_sq = 1.0;
  } else if (top_w <= 1e-13 * wscale) {
    RealVector yb = RealVector::Zero(n);
    for (int i = k; i < n; ++i) yb[i] = w[i] / delta[i];
    const double used = yb.squaredNorm();
    if (used <= 1.0) {
      boundary = true;
      out.lambda = a1 * a1;
      out.y_fixed = yb;
      out.free_radius_sq = 1.0 - used;
    }
  }

  if (boundary) {
    y = out.y_fixed;
    y[0] += std::sqrt(std::max(0.0, out.free_radius_sq));
  } else {
    for (int i = 0; i < k; ++i)
      if (std::abs(w[i]) <= 1e-13 * wscale) w[i] = 0.0;
    const double mu = detail::solve_secular(w, delta);
    out.lambda = a1 * a1 + mu;
    for (int i = 0; i < n; ++i) y[i] = w[i] / (mu + delta[i]);
    y /= y.norm();
    out.y_fixed = y;
    out.free_radius_sq = 0.0;
  }
  out.boundary_family = boundary;
  out.argmax = q * y;
  out.max_norm = phi(out.argmax).norm();
  return out;
}

struct MaxNorm {
  double max;
  RealVector argmax;
};

/// max over ||x|| = 1 of ||A x + b||.
inline MaxNorm max_norm_on_sphere(const AffineBallMap& phi) {
  const SphereMaximizers m = sphere_maximizers(phi);
  return {m.max_norm, m.argmax};
}

struct ContactReport {
  std::vector<RealVector> contact_points;
  std::vector<RealVector> clusters;  ///< one representative per kContactClusterRadius cluster
  int affine_rank;
  bool is_orthogonal;
  double max_norm;
};

inline bool is_orthogonal_map(const AffineBallMap& phi, double tol) {
  const int n = phi.dim();
  return (phi.linear().transpose() * phi.linear() - RealMatrix::Identity(n, n)).norm() <= tol &&
         phi.offset().norm() <= tol;
}

/// Unit vectors x with ||phi(x)|| = 1. Isolated contacts come from the
/// secular solution; a continuum (boundary family with a top cluster of size
/// >= 2) is sampled with `samples` seeded points of the maximizer sphere.
inline ContactReport contact_points(const AffineBallMap& phi, double tol = kDefaultTol, int samples = 200,
                                    std::uint64_t seed = 0) {
  const SphereMaximizers m = sphere_maximizers(phi);
  if (m.max_norm > 1.0 + tol) throw NotBallPositive(m.max_norm);
  ContactReport rep{{}, {}, 0, is_orthogonal_map(phi, tol), m.max_norm};
  if (m.max_norm >= 1.0 - tol) {
    std::vector<RealVector> ys;
    const double r = std::sqrt(std::max(0.0, m.free_radius_sq));
    const int k = m.top_cluster;
    if (!m.boundary_family || r <= 1e-12) {
      ys.push_back(m.y_fixed);
      if (m.boundary_family) ys.back()[0] += r;
    } else if (k == 1) {
      RealVector a = m.y_fixed, b = m.y_fixed;
      a[0] += r;
      b[0] -= r;
      ys.push_back(a);
      ys.push_back(b);
    } else {
      Rng rng = substream(seed, 0);
      for (int s = 0; s < samples; ++s) {
        RealVector y = m.y_fixed;
        y.head(k) = r * random_real_unit_vector(k, rng);
        ys.push_back(y);
      }
    }
    for (const auto& y : ys) {
      RealVector x = m.rotation * y;
      x /= x.norm();
      if (std::abs(phi(x).norm() - 1.0) <= tol) rep.contact_points.push_back(std::move(x));
    }
  }
  for (const auto& x : rep.contact_points) {
    bool seen = false;
    for (const auto& c : rep.clusters) {
      if ((c - x).norm() <= kContactClusterRadius) {
        seen = true;
        break;
      }
    }
    if (!seen) rep.clusters.push_back(x);
  }
  rep.affine_rank = affine_rank(rep.contact_points, tol);
  return rep;
}

struct BallExtremalityReport {
  bool fix_extreme;               ///< contact affine rank >= n + 1
  bool consistent_with_theorem3;  ///< fix_extreme implies orthogonal
  ContactReport contacts;
};

inline BallExtremalityReport ball_extremality_report(const AffineBallMap& phi, double tol = kDefaultTol,
                                                     int samples = 200, std::uint64_t seed = 0) {
  ContactReport c = contact_points(phi, tol, samples, seed);
  const bool fix = c.affine_rank >= phi.dim() + 1;
  return {fix, !fix || c.is_orthogonal, std::move(c)};
}

// ---------------------------------------------------------------------------
// Planar convex body bounded by the graph of f over [-1, 1]

namespace planar {

/// a^p b^q and its second derivative in x for a = (1-x)/2, b = (1+x)/2.
inline double mono(double a, double b, double p, double q) { return std::pow(a, p) * std::pow(b, q); }

inline double mono_dd(double a, double b, double p, double q) {
  double s = 0.0;
  if (p != 0 && p != 1) s += p * (p - 1) * mono(a, b, p - 2, q);
  if (p != 0 && q != 0) s -= 2 * p * q * mono(a, b, p - 1, q - 1);
  if (q != 0 && q != 1) s += q * (q - 1) * mono(a, b, p, q - 2);
  return 0.25 * s;
}

inline std::pair<double, double> ab(double x) {
  return {std::max(0.0, (1.0 - x) / 2.0), std::max(0.0, (1.0 + x) / 2.0)};
}

inline double f(double x) {
  const auto [a, b] = ab(x);
  return a * a * std::sqrt(b) + 2.0 * std::sqrt(a) * b * b * std::sqrt(b) + (1.0 - x * x) / 4.0;
}

/// Upper boundary of the image of the body under (x, y) -> (-x, y/2).
inline double g(double x) {
  const auto [a, b] = ab(x);
  return 0.5 * b * b * std::sqrt(a) + std::sqrt(b) * a * a * std::sqrt(a) + (1.0 - x * x) / 8.0;
}

/// Analytic f'' on the open interval.
inline double f_second(double x) {
  const auto [a, b] = ab(x);
  return mono_dd(a, b, 2.0, 0.5) + 2.0 * mono_dd(a, b, 0.5, 2.5) + mono_dd(a, b, 1.0, 1.0);
}

/// (x, y) -> (-x, alpha y / 2).
inline std::array<double, 2> t_alpha(double alpha, std::array<double, 2> pt) {
  return {-pt[0], alpha * pt[1] / 2.0};
}

inline constexpr double kEndpointMargin = 1e-3;

}  // namespace planar

struct PlanarReport {
  bool f_concave;
  bool f_ge_alpha_g_everywhere;
  double min_value;  ///< min over the grid of f - alpha g
  double argmin;
  double max_second_difference;
  bool t_swaps_endpoints;  ///< T maps (-1,0) -> (1,0) and (1,0) -> (-1,0)
};

/// Checks on a uniform grid of `grid` points over [-1, 1].
inline PlanarReport planar_example_check(double alpha, int grid) {
  if (grid < 1000) throw InputError("planar_example_check: grid must be >= 1000");
  if (!(alpha > 0) || !std::isfinite(alpha)) throw InputError("planar_example_check: alpha must be positive");
  const double h = 2.0 / (grid - 1);
  std::vector<double> xs(grid), fs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = i == grid - 1 ? 1.0 : -1.0 + i * h;
    fs[i] = planar::f(xs[i]);
  }
  double min_v = std::numeric_limits<double>::infinity(), arg = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double v = fs[i] - alpha * planar::g(xs[i]);
    if (v < min_v) {
      min_v = v;
      arg = xs[i];
    }
  }
  double max_d2 = -std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < grid; ++i) {
    if (xs[i] < -1.0 + planar::kEndpointMargin || xs[i] > 1.0 - planar::kEndpointMargin) continue;
    max_d2 = std::max(max_d2, fs[i + 1] - 2.0 * fs[i] + fs[i - 1]);
  }
  const auto l = planar::t_alpha(1.0, {-1.0, 0.0});
  const auto r = planar::t_alpha(1.0, {1.0, 0.0});
  const bool swaps = l[0] == 1.0 && l[1] == 0.0 && r[0] == -1.0 && r[1] == 0.0;
  return {max_d2 <= 1e-9, min_v >= -1e-12, min_v, arg, max_d2, swaps};
}

}  // namespace posmaps
