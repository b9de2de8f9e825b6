#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "npiv/errors.hpp"

namespace npiv {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thin SVD a = u * diag(singular_values) * vt with singular values sorted
/// in non-increasing order.
struct SvdResult {
  Mat u;
  Vec singular_values;
  Mat vt;
};

namespace detail {

inline void require_finite(const Mat& a, const char* who) {
  if (!a.allFinite()) throw numeric_error(std::string(who) + ": non-finite entries in input");
}

inline void require_symmetric(const Mat& a, double tol, const char* who) {
  if (a.rows() != a.cols())
    throw std::domain_error(std::string(who) + ": matrix is not square");
  double dev = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw std::domain_error(std::string(who) + ": asymmetry " + std::to_string(dev) +
                            " exceeds tolerance");
}

}  // namespace detail

/// Jacobi SVD (deterministic for identical input bits).
inline SvdResult svd(const Mat& a) {
  detail::require_finite(a, "svd");
  Eigen::JacobiSVD<Mat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw numeric_error("svd: decomposition did not converge");
  return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV().transpose()};
}

/// Moore-Penrose pseudoinverse. Singular values below rel_tol * s_max are
/// treated as zero, the remainder inverted.
inline Mat pinv(const Mat& a, double rel_tol = 1e-12) {
  if (rel_tol < 0.0 || rel_tol >= 1.0) throw std::domain_error("pinv: rel_tol must be in [0,1)");
  SvdResult d = svd(a);
  const double cutoff = rel_tol * (d.singular_values.size() > 0 ? d.singular_values(0) : 0.0);
  Vec inv = d.singular_values;
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv(i) = (d.singular_values(i) > cutoff && d.singular_values(i) > 0.0)
                 ? 1.0 / d.singular_values(i)
                 : 0.0;
  return d.vt.transpose() * inv.asDiagonal() * d.u.transpose();
}

/// Number of singular values a pinv call with the same rel_tol would discard.
inline int pinv_truncated_count(const Mat& a, double rel_tol) {
  SvdResult d = svd(a);
  if (d.singular_values.size() == 0) return 0;
  const double cutoff = rel_tol * d.singular_values(0);
  int n = 0;
  for (Eigen::Index i = 0; i < d.singular_values.size(); ++i)
    if (!(d.singular_values(i) > cutoff && d.singular_values(i) > 0.0)) ++n;
  return n;
}

/// Inverse of the positive-definite matrix square root: returns symmetric R
/// with R * a * R = I.
inline Mat inv_sqrt_psd(const Mat& a) {
  detail::require_symmetric(a, 1e-10, "inv_sqrt_psd");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success) throw numeric_error("inv_sqrt_psd: eigensolver failed");
  const Vec& lam = es.eigenvalues();
  const double floor = 1e-14 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() <= floor)
    throw std::domain_error("inv_sqrt_psd: matrix not positive definite, min eigenvalue " +
                            std::to_string(lam.minCoeff()));
  Vec isq = lam.array().rsqrt();
  return es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().transpose();
}

/// Largest singular value. Symmetric inputs take the (deterministic)
/// self-adjoint path; the result coincides with the largest |eigenvalue|.
inline double spectral_norm(const Mat& a) {
  detail::require_finite(a, "spectral_norm");
  if (a.size() == 0) return 0.0;
  if (a.rows() == a.cols() && (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return svd(a).singular_values(0);
}

/// Smallest eigenvalue of a symmetric matrix (asymmetry beyond 1e-10 rejected).
inline double min_eig_sym(const Mat& a) {
  detail::require_symmetric(a, 1e-10, "min_eig_sym");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_error("min_eig_sym: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

/// Quadrature rule on [0,1]; weights sum to one.
struct QuadratureRule {
  Vec nodes;
  Vec weights;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the Legendre
/// recurrence. Deterministic; converges to ~1e-15 in a handful of steps.
inline void gauss_legendre_reference(int n, Vec& x, Vec& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(M_PI * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x(i - 1) = -z;
    x(n - i) = z;
    w(i - 1) = 2.0 / ((1.0 - z * z) * pp * pp);
    w(n - i) = w(i - 1);
  }
}

}  // namespace detail

/// Composite Gauss-Legendre rule on [0,1]: `n_nodes` points on each of
/// `subintervals` equal pieces. Exact for polynomials of degree
/// 2*n_nodes - 1 on each piece.
inline QuadratureRule gauss_legendre(int n_nodes, int subintervals) {
  if (n_nodes < 1) throw std::domain_error("gauss_legendre: n_nodes must be >= 1");
  if (subintervals < 1) throw std::domain_error("gauss_legendre: subintervals must be >= 1");
  Vec xr, wr;
  detail::gauss_legendre_reference(n_nodes, xr, wr);
  QuadratureRule rule;
  rule.nodes.resize(n_nodes * subintervals);
  rule.weights.resize(n_nodes * subintervals);
  const double h = 1.0 / subintervals;
  for (int s = 0; s < subintervals; ++s) {
    const double a = s * h;
    for (int i = 0; i < n_nodes; ++i) {
      rule.nodes(s * n_nodes + i) = a + 0.5 * h * (xr(i) + 1.0);
      rule.weights(s * n_nodes + i) = 0.5 * h * wr(i);
    }
  }
  return rule;
}

}  // namespace npiv
