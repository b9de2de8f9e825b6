#pragma once

#include <cmath>
#include <string>

#include "npiv/errors.hpp"
#include "npiv/numerics.hpp"
#include "npiv/profile.hpp"
#include "npiv/rng.hpp"
#include "npiv/sample.hpp"

namespace npiv {

/// Error distribution; Student-t draws are standardized to unit variance
/// before the scale is applied. delta_moment is the promised delta with
/// E|eps|^(2+delta) finite.
struct NoiseSpec {
  enum class Family { Gaussian, StudentT };
  Family family = Family::Gaussian;
  double sd = 1.0;            // Gaussian standard deviation / StudentT scale
  double dof = 3.0;           // StudentT degrees of freedom
  double delta_moment = 1.0;

  void validate() const {
    if (sd < 0.0) throw config_error("NoiseSpec: sd must be >= 0");
    if (delta_moment <= 0.0) throw config_error("NoiseSpec: delta_moment must be > 0");
    if (family == Family::StudentT) {
      if (dof <= 2.0)
        throw config_error("NoiseSpec: StudentT dof <= 2 has infinite variance");
      if (dof <= 2.0 + delta_moment)
        throw config_error("NoiseSpec: StudentT needs dof > 2 + delta_moment, got dof = " +
                           std::to_string(dof));
    }
  }

  double draw(RngStream& rng) const {
    if (family == Family::Gaussian) return sd * rng.normal();
    return sd * std::sqrt((dof - 2.0) / dof) * rng.student_t(dof);
  }
};

/// i.i.d. noise draws; symmetric and mean zero by construction.
inline Vec draw_noise(const NoiseSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  RngStream rng(seed);
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = spec.draw(rng);
  return out;
}

enum class Dependence { IID, GaussianCopulaAR };

/// Synthetic NPIV model with known truth and known operator spectrum.
///
/// The joint density of one (X, Y2) coordinate pair is the diagonal kernel
///   f(x, y) = 1 + sum_k mu_k phi_k(y) phi_k(x),   phi_k(t) = sqrt(2) cos(k pi t),
/// so both marginals are uniform, the operator maps phi_k -> mu_k phi_k, and
/// the cosine basis realizes the alignment case of the ill-posedness bounds
/// exactly. The truth is h0 = sum_k a_k phi_k with a_k = c_a k^(-(p/d + 1/2)).
/// d = 2 models are products of two independent coordinate pairs with a
/// diagonal product-cosine truth, in which case T(phi_k x phi_k) has singular
/// value mu_k^2.
struct NpivDgp {
  IllPosednessProfile profile;
  Vec truth_coef;
  double p = 2.0;
  double c_a = 1.0;
  NoiseSpec noise;
  Dependence dependence = Dependence::IID;
  double rho = 0.0;
  int d = 1;

  double envelope = 0.0;          // 1 + 2 sum mu_k, the rejection bound
  double truncation_tail = 0.0;   // formula tail sum_{k > K_trunc} mu_k a_k
  bool truncation_exact = true;   // tail below 1e-8

  int trunc() const { return profile.length(); }

  /// Joint density of one coordinate pair, evaluated with the cosine
  /// recurrence (one cos per argument).
  double density_pair(double x, double y) const {
    const int kt = trunc();
    const double cx = std::cos(M_PI * x), cy = std::cos(M_PI * y);
    double px = 1.0, qx = cx, py = 1.0, qy = cy;
    double acc = 0.0;
    for (int k = 1; k <= kt; ++k) {
      acc += profile.mu(k - 1) * qx * qy;
      double nx = 2.0 * cx * qx - px;
      px = qx;
      qx = nx;
      double ny = 2.0 * cy * qy - py;
      py = qy;
      qy = ny;
    }
    return 1.0 + 2.0 * acc;
  }

  /// Truncated cosine series sum_k coef_k phi_k at a scalar point.
  static double cosine_series(const Vec& coef, double t) {
    const double c = std::cos(M_PI * t);
    double prev = 1.0, cur = c, acc = 0.0;
    for (Eigen::Index k = 0; k < coef.size(); ++k) {
      acc += coef(k) * cur;
      double next = 2.0 * c * cur - prev;
      prev = cur;
      cur = next;
    }
    return std::sqrt(2.0) * acc;
  }

  double oracle_h_at(const Vec& point) const {
    if (point.size() != d) throw std::domain_error("oracle_h: point dimension mismatch");
    if (d == 1) return cosine_series(truth_coef, point(0));
    // diagonal product series sum_k a_k phi_k(y_1) phi_k(y_2)
    return product_series(truth_coef, point);
  }

  double oracle_Th_at(const Vec& point) const {
    if (point.size() != d) throw std::domain_error("oracle_Th: point dimension mismatch");
    Vec coef = truth_coef;
    for (Eigen::Index k = 0; k < coef.size(); ++k) {
      double m = profile.mu(k);
      coef(k) *= (d == 1) ? m : m * m;
    }
    return d == 1 ? cosine_series(coef, point(0)) : product_series(coef, point);
  }

  Vec oracle_h(const Mat& points) const { return map_rows(points, true); }
  Vec oracle_Th(const Mat& points) const { return map_rows(points, false); }

 private:
  static double product_series(const Vec& coef, const Vec& point) {
    const double c1 = std::cos(M_PI * point(0)), c2 = std::cos(M_PI * point(1));
    double p1 = 1.0, q1 = c1, p2 = 1.0, q2 = c2, acc = 0.0;
    for (Eigen::Index k = 0; k < coef.size(); ++k) {
      acc += coef(k) * q1 * q2;
      double n1 = 2.0 * c1 * q1 - p1;
      p1 = q1;
      q1 = n1;
      double n2 = 2.0 * c2 * q2 - p2;
      p2 = q2;
      q2 = n2;
    }
    return 2.0 * acc;
  }

  Vec map_rows(const Mat& points, bool h) const {
    Vec out(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      Vec pt = points.row(i).transpose();
      out(i) = h ? oracle_h_at(pt) : oracle_Th_at(pt);
    }
    return out;
  }
};

/// Build and validate a DGP. Positivity of the joint density requires
/// 2 sum mu_k <= 0.9 (density then at least 0.1 everywhere).
inline NpivDgp make_dgp(const IllPosednessProfile& profile, double p, double c_a,
                        const NoiseSpec& noise, Dependence dependence = Dependence::IID,
                        double rho = 0.0, int d = 1) {
  if (d != 1 && d != 2) throw config_error("make_dgp: d must be 1 or 2");
  if (p <= 0.0) throw config_error("make_dgp: smoothness p must be > 0");
  if (dependence == Dependence::GaussianCopulaAR && (rho < 0.0 || rho >= 1.0))
    throw std::domain_error("make_dgp: rho must be in [0,1)");
  noise.validate();

  NpivDgp dgp;
  dgp.profile = profile;
  dgp.p = p;
  dgp.c_a = c_a;
  dgp.noise = noise;
  dgp.dependence = dependence;
  dgp.rho = rho;
  dgp.d = d;

  const int kt = profile.length();
  dgp.truth_coef.resize(kt);
  const double expo = p / d + 0.5;
  for (int k = 1; k <= kt; ++k) dgp.truth_coef(k - 1) = c_a * std::pow(k, -expo);

  double mu_sum = dgp.profile.mu.sum();
  if (2.0 * mu_sum > 0.9 + 1e-12)
    throw config_error("make_dgp: density positivity violated, 2*sum(mu) = " +
                       std::to_string(2.0 * mu_sum) + " > 0.9");
  dgp.envelope = 1.0 + 2.0 * mu_sum;

  // Tail of the formula-extrapolated series beyond the truncation; exact
  // finite-series fixtures simply record it.
  double tail = 0.0;
  for (int k = kt + 1; k <= kt + 200000; ++k) {
    double term = profile.scale * IllPosednessProfile::decay(profile.kind, profile.varsigma, d, k) *
                  c_a * std::pow(k, -expo);
    tail += term;
    if (term < 1e-16) break;
  }
  dgp.truncation_tail = tail;
  dgp.truncation_exact = tail < 1e-8;
  return dgp;
}

namespace detail {

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// One coordinate pair from the joint density by rejection against the
/// uniform envelope 1 + 2 sum mu_k.
inline void draw_pair(const NpivDgp& dgp, RngStream& rng, double& x, double& y) {
  for (;;) {
    x = rng.uniform();
    y = rng.uniform();
    double u = rng.uniform();
    if (u * dgp.envelope <= dgp.density_pair(x, y)) return;
  }
}

}  // namespace detail

/// i.i.d. draws from the model Y1 = h0(Y2) + eps, E[eps | X] = 0. Per
/// observation the stream is consumed as: rejection draws for each coordinate
/// pair, then the noise draw. Deterministic given the seed.
inline Sample sample_iid(const NpivDgp& dgp, int n, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("sample_iid: n must be >= 1");
  RngStream rng(seed);
  Sample s;
  s.y1.resize(n);
  s.y2.resize(n, dgp.d);
  s.x.resize(n, dgp.d);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < dgp.d; ++a) {
      double xv, yv;
      detail::draw_pair(dgp, rng, xv, yv);
      s.x(i, a) = xv;
      s.y2(i, a) = yv;
    }
    s.y1(i) = dgp.oracle_h_at(s.y2.row(i).transpose()) + dgp.noise.draw(rng);
  }
  return s;
}

/// Beta-mixing regressors for the LS special case: a stationary Gaussian
/// AR(1) path mapped through the normal CDF gives uniform marginals, and
/// Y2 = X. rho = 0 reproduces the i.i.d. design in distribution (the draw
/// order is documented, not bit-matched, against sample_iid). Axes of a
/// d-dimensional design run independent chains.
inline Sample sample_mixing(const NpivDgp& dgp, int n, double rho, std::uint64_t seed) {
  if (rho < 0.0 || rho >= 1.0) throw std::domain_error("sample_mixing: rho must be in [0,1)");
  if (n < 1) throw std::domain_error("sample_mixing: n must be >= 1");
  RngStream rng(seed);
  Sample s;
  s.y1.resize(n);
  s.x.resize(n, dgp.d);
  Vec z = Vec::Zero(dgp.d);
  for (int a = 0; a < dgp.d; ++a) z(a) = rng.normal();  // stationary start
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < dgp.d; ++a) {
      if (i > 0) z(a) = rho * z(a) + std::sqrt(1.0 - rho * rho) * rng.normal();
      s.x(i, a) = detail::std_normal_cdf(z(a));
    }
    s.y1(i) = dgp.oracle_h_at(s.x.row(i).transpose()) + dgp.noise.draw(rng);
  }
  s.y2 = s.x;
  return s;
}

}  // namespace npiv
