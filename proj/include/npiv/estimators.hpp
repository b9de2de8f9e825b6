#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "npiv/errors.hpp"
#include "npiv/numerics.hpp"
#include "npiv/sample.hpp"
#include "npiv/sieve_basis.hpp"

namespace npiv {

/// Per-fit diagnostics. sigma_hat_jk is the smallest singular value of
/// S-hat = Psi~' B~ / n; the identifiability statistics are the spectral
/// norms of the empirical-Gram deviations from the identity.
struct Diagnostics {
  double sigma_hat_jk = 0.0;
  double ident_stat_b = 0.0;
  double ident_stat_psi = 0.0;
  double denom_min_eig = 0.0;
  bool denominator_truncated = false;
  std::string measure;
};

/// Fitted sieve estimator. Coefficients live in the orthonormalized psi
/// coordinates; predictions are psi~(y2)' coef.
struct NpivFit {
  Vec coef;
  BasisHandle psi_handle;
  BasisHandle b_handle;
  Diagnostics diag;
};

struct FitOptions {
  enum class Orthonorm { Empirical, Uniform };
  Orthonorm orthonorm = Orthonorm::Empirical;
  double pinv_rel_tol = 1e-10;      // regularization policy inside the estimator
  double denom_floor = 1e-13;       // absolute floor on the denominator min eigenvalue
};

namespace detail {

/// Closed form in orthonormalized coordinates:
///   coef = [S^ (B~'B~/n)^- S^']^- S^ (B~'B~/n)^- B~'y / n.
/// psi_rows and b_rows must already be orthonormalized evaluations.
struct CoreFit {
  Vec coef;
  Diagnostics diag;
};

inline CoreFit npiv_core(const Mat& psi_rows, const Mat& b_rows, const Vec& y,
                         const FitOptions& opts) {
  const auto n = psi_rows.rows();
  const auto J = psi_rows.cols();
  const auto K = b_rows.cols();
  if (b_rows.rows() != n || y.size() != n) throw std::domain_error("npiv_core: row mismatch");
  if (J > K) throw std::domain_error("npiv_core: need J <= K");
  if (K > n) throw std::domain_error("npiv_core: need K <= n");

  const double dn = static_cast<double>(n);
  Mat s_hat = psi_rows.transpose() * b_rows / dn;
  Mat g_b = b_rows.transpose() * b_rows / dn;
  Mat g_psi = psi_rows.transpose() * psi_rows / dn;

  CoreFit out;
  out.diag.ident_stat_b = spectral_norm(g_b - Mat::Identity(K, K));
  out.diag.ident_stat_psi = spectral_norm(g_psi - Mat::Identity(J, J));

  SvdResult s_svd = svd(s_hat);
  out.diag.sigma_hat_jk = s_svd.singular_values(J - 1);

  Mat m = s_hat * pinv(g_b, opts.pinv_rel_tol);
  Mat denom = m * s_hat.transpose();
  denom = 0.5 * (denom + denom.transpose());
  out.diag.denom_min_eig = min_eig_sym(denom);
  if (out.diag.denom_min_eig <= opts.denom_floor)
    throw illposedness_error(
        "npiv fit: denominator matrix numerically singular (min eigenvalue " +
            std::to_string(out.diag.denom_min_eig) + ")",
        out.diag.sigma_hat_jk);

  SvdResult d_svd = svd(denom);
  const double cutoff = opts.pinv_rel_tol * d_svd.singular_values(0);
  Vec inv = d_svd.singular_values;
  int truncated = 0;
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (d_svd.singular_values(i) > cutoff) {
      inv(i) = 1.0 / d_svd.singular_values(i);
    } else {
      inv(i) = 0.0;
      ++truncated;
    }
  }
  out.diag.denominator_truncated = truncated > 0;
  Vec rhs = m * (b_rows.transpose() * y / dn);
  out.coef = d_svd.vt.transpose() * (inv.asDiagonal() * (d_svd.u.transpose() * rhs));
  return out;
}

inline Measure resolve_measure(const Mat& points, FitOptions::Orthonorm which) {
  if (which == FitOptions::Orthonorm::Uniform) return UniformMeasure{};
  return EmpiricalMeasure{points};
}

}  // namespace detail

/// Sieve NPIV estimator (series two-stage least squares). Requires
/// J <= K <= n. Orthonormalization uses the empirical Gram of the sample by
/// default; the uniform measure is available for simulation studies.
inline NpivFit fit_sieve_npiv(const Sample& sample, const SieveSpec& psi_spec,
                              const SieveSpec& b_spec, const FitOptions& opts = {}) {
  if (sample.size() == 0) throw std::domain_error("fit_sieve_npiv: empty sample");
  NpivFit fit;
  fit.psi_handle = orthonormalize(psi_spec, detail::resolve_measure(sample.y2, opts.orthonorm));
  fit.b_handle = orthonormalize(b_spec, detail::resolve_measure(sample.x, opts.orthonorm));
  Mat psi_rows = fit.psi_handle.orthonormal_rows(sample.y2);
  Mat b_rows = fit.b_handle.orthonormal_rows(sample.x);
  detail::CoreFit core = detail::npiv_core(psi_rows, b_rows, sample.y1, opts);
  fit.coef = std::move(core.coef);
  fit.diag = core.diag;
  fit.diag.measure = opts.orthonorm == FitOptions::Orthonorm::Empirical ? "empirical" : "uniform";
  return fit;
}

/// Sieve least-squares regression of y1 on the sieve space in x; the NPIV
/// special case Y2 = X, psi = b, J = K.
inline NpivFit fit_sieve_ls(const Sample& sample, const SieveSpec& b_spec,
                            const FitOptions& opts = {}) {
  if (sample.size() == 0) throw std::domain_error("fit_sieve_ls: empty sample");
  const int K = b_spec.dimension();
  if (K > sample.size()) throw std::domain_error("fit_sieve_ls: need K <= n");

  NpivFit fit;
  fit.b_handle = orthonormalize(b_spec, detail::resolve_measure(sample.x, opts.orthonorm));
  fit.psi_handle = fit.b_handle;
  Mat b_rows = fit.b_handle.orthonormal_rows(sample.x);
  const double dn = static_cast<double>(sample.size());
  Mat g = b_rows.transpose() * b_rows / dn;

  double gmin = min_eig_sym(g);
  double gmax = spectral_norm(g);
  if (gmin <= opts.pinv_rel_tol * gmax)
    throw numeric_error("fit_sieve_ls: empirical Gram rank-deficient, min eigenvalue " +
                        std::to_string(gmin));

  fit.coef = pinv(g, opts.pinv_rel_tol) * (b_rows.transpose() * sample.y1 / dn);
  fit.diag.sigma_hat_jk = svd(g).singular_values(K - 1);
  fit.diag.ident_stat_b = spectral_norm(g - Mat::Identity(K, K));
  fit.diag.ident_stat_psi = fit.diag.ident_stat_b;
  fit.diag.denom_min_eig = gmin;
  fit.diag.denominator_truncated = false;
  fit.diag.measure = opts.orthonorm == FitOptions::Orthonorm::Empirical ? "empirical" : "uniform";
  return fit;
}

/// The second-stage empirical projection P_n h0: the NPIV formula with the
/// response replaced by h0 evaluated at the sample's Y2 rows.
inline NpivFit empirical_projection(const Sample& sample, const SieveSpec& psi_spec,
                                    const SieveSpec& b_spec, const Vec& h_values,
                                    const FitOptions& opts = {}) {
  if (h_values.size() != sample.size())
    throw std::domain_error("empirical_projection: h_values size mismatch");
  Sample proxy = sample;
  proxy.y1 = h_values;
  return fit_sieve_npiv(proxy, psi_spec, b_spec, opts);
}

/// Predictions psi~(point)' coef at the rows of `points`.
inline Vec predict(const NpivFit& fit, const Mat& points) {
  return fit.psi_handle.orthonormal_rows(points) * fit.coef;
}

using OracleFn = std::function<double(const Vec&)>;

namespace detail {

inline Mat tensor_grid(int d, int grid_per_dim) {
  Eigen::Index total = 1;
  for (int a = 0; a < d; ++a) total *= grid_per_dim;
  Mat pts(total, d);
  std::vector<int> idx(d, 0);
  for (Eigen::Index r = 0; r < total; ++r) {
    for (int a = 0; a < d; ++a) pts(r, a) = static_cast<double>(idx[a]) / (grid_per_dim - 1);
    int a = d - 1;
    while (a >= 0 && ++idx[a] == grid_per_dim) idx[a--] = 0;
  }
  return pts;
}

}  // namespace detail

/// Default evaluation grid density: 1001 points per axis in one dimension,
/// 101 in two.
inline int default_grid_per_dim(int d) { return d == 1 ? 1001 : 101; }

/// Worst-case absolute error of the fit against an oracle over a uniform
/// tensor grid.
inline double sup_norm_distance(const NpivFit& fit, const OracleFn& oracle, int grid_per_dim) {
  if (grid_per_dim < 2) throw std::domain_error("sup_norm_distance: grid_per_dim must be >= 2");
  const int d = fit.psi_handle.dim_domain();
  Mat pts = detail::tensor_grid(d, grid_per_dim);
  Vec pred = predict(fit, pts);
  double best = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    best = std::max(best, std::abs(pred(i) - oracle(pts.row(i).transpose())));
  return best;
}

/// L2([0,1]^d) error of the fit against an oracle, using the tensor product
/// of a univariate quadrature rule.
inline double l2_distance(const NpivFit& fit, const OracleFn& oracle, const QuadratureRule& rule) {
  const int d = fit.psi_handle.dim_domain();
  const Eigen::Index m = rule.nodes.size();
  Eigen::Index total = 1;
  for (int a = 0; a < d; ++a) total *= m;
  Mat pts(total, d);
  Vec w = Vec::Ones(total);
  std::vector<Eigen::Index> idx(d, 0);
  for (Eigen::Index r = 0; r < total; ++r) {
    for (int a = 0; a < d; ++a) {
      pts(r, a) = rule.nodes(idx[a]);
      w(r) *= rule.weights(idx[a]);
    }
    int a = d - 1;
    while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
  }
  Vec pred = predict(fit, pts);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < total; ++i) {
    double diff = pred(i) - oracle(pts.row(i).transpose());
    acc += w(i) * diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace npiv
