#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "npiv/bspline.hpp"
#include "npiv/errors.hpp"
#include "npiv/numerics.hpp"
#include "npiv/wavelet.hpp"

namespace npiv {

// ---------------------------------------------------------------------------
// Sieve space descriptions
// ---------------------------------------------------------------------------

/// B-splines of order `order` (degree order-1) with `interior_knots` uniform
/// interior knots; K = order + interior_knots functions per axis.
struct BSplineAxis {
  int order = 2;
  int interior_knots = 0;
};

/// Periodized Daubechies wavelets; 2^fine_level functions per axis.
struct WaveletAxis {
  int vanishing_moments = 2;
  int coarse_level = 0;
  int fine_level = 2;
};

/// Cosine basis {1, sqrt(2) cos(k pi x) : k = 1..dim-1}. Orthonormal under
/// the uniform measure; this is the eigenbasis of the synthetic DGPs and the
/// alignment fixture of the ill-posedness checks.
struct CosineAxis {
  int dim = 1;
};

using AxisSpec = std::variant<BSplineAxis, WaveletAxis, CosineAxis>;

inline int axis_dimension(const AxisSpec& axis) {
  if (const auto* b = std::get_if<BSplineAxis>(&axis)) return b->order + b->interior_knots;
  if (const auto* w = std::get_if<WaveletAxis>(&axis)) return 1 << w->fine_level;
  return std::get<CosineAxis>(axis).dim;
}

/// Declarative description of a (tensor-product) sieve space on [0,1]^d.
struct SieveSpec {
  std::vector<AxisSpec> axes;

  int dim_domain() const { return static_cast<int>(axes.size()); }

  int dimension() const {
    int k = 1;
    for (const auto& a : axes) k *= axis_dimension(a);
    return k;
  }

  static SieveSpec bspline(int order, int interior_knots, int d = 1) {
    if (order < 1) throw config_error("SieveSpec: spline order must be >= 1");
    if (interior_knots < 0) throw config_error("SieveSpec: interior_knots must be >= 0");
    return SieveSpec{std::vector<AxisSpec>(d, BSplineAxis{order, interior_knots})};
  }
  static SieveSpec wavelet(int vanishing_moments, int coarse_level, int fine_level, int d = 1) {
    if (coarse_level < 0 || fine_level < coarse_level)
      throw config_error("SieveSpec: need 0 <= coarse_level <= fine_level");
    daubechies_filter(vanishing_moments);  // validates the filter choice
    return SieveSpec{
        std::vector<AxisSpec>(d, WaveletAxis{vanishing_moments, coarse_level, fine_level})};
  }
  static SieveSpec cosine(int dim, int d = 1) {
    if (dim < 1) throw config_error("SieveSpec: cosine dim must be >= 1");
    return SieveSpec{std::vector<AxisSpec>(d, CosineAxis{dim})};
  }
};

/// Smoothness exponent of the family (Appendix-level bookkeeping used for the
/// gamma > p warning): order-m splines have gamma = m - 2, Daubechies-N
/// wavelets their Hoelder exponent, cosines are analytic.
inline double axis_smoothness(const AxisSpec& axis) {
  if (const auto* b = std::get_if<BSplineAxis>(&axis)) return b->order - 2.0;
  if (const auto* w = std::get_if<WaveletAxis>(&axis)) {
    switch (w->vanishing_moments) {
      case 1: return 0.0;
      case 2: return 0.55;
      default: return 1.08;
    }
  }
  return std::numeric_limits<double>::infinity();
}

inline double sieve_smoothness(const SieveSpec& spec) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& a : spec.axes) g = std::min(g, axis_smoothness(a));
  return g;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// All basis values of one axis at x in [0,1]. Cosines are evaluated with the
/// Chebyshev-style recurrence cos((k+1)t) = 2 cos(t) cos(kt) - cos((k-1)t).
inline Vec axis_eval(const AxisSpec& axis, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("axis_eval: x outside [0,1]");
  if (const auto* b = std::get_if<BSplineAxis>(&axis)) {
    return bspline_eval(make_knots(b->order, b->interior_knots), x);
  }
  if (const auto* w = std::get_if<WaveletAxis>(&axis)) {
    PeriodizedWaveletBasis basis{w->vanishing_moments, w->coarse_level, w->fine_level};
    return basis.eval(x);
  }
  const int k = std::get<CosineAxis>(axis).dim;
  Vec out(k);
  out(0) = 1.0;
  if (k > 1) {
    const double c1 = std::cos(M_PI * x);
    const double s2 = std::sqrt(2.0);
    double prev = 1.0, cur = c1;
    out(1) = s2 * c1;
    for (int j = 2; j < k; ++j) {
      double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
      out(j) = s2 * next;
    }
  }
  return out;
}

/// Tensor-product evaluation, Kronecker ordering with axis 1 slowest.
inline Vec tensor_eval(const SieveSpec& spec, const Vec& point) {
  if (point.size() != spec.dim_domain())
    throw std::domain_error("tensor_eval: point dimension mismatch");
  Vec out = axis_eval(spec.axes[0], point(0));
  for (int ax = 1; ax < spec.dim_domain(); ++ax) {
    Vec rhs = axis_eval(spec.axes[ax], point(ax));
    Vec next(out.size() * rhs.size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
      next.segment(i * rhs.size(), rhs.size()) = out(i) * rhs;
    out.swap(next);
  }
  return out;
}

/// Rows of raw basis evaluations for a point matrix (n x d).
inline Mat eval_rows(const SieveSpec& spec, const Mat& points) {
  if (points.cols() != spec.dim_domain())
    throw std::domain_error("eval_rows: point dimension mismatch");
  Mat out(points.rows(), spec.dimension());
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    out.row(i) = tensor_eval(spec, points.row(i).transpose()).transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Measures and Gram matrices
// ---------------------------------------------------------------------------

struct UniformMeasure {};

/// Empirical measure of a sample (n x d).
struct EmpiricalMeasure {
  Mat points;
};

/// Product density given per axis on a uniform closed grid over [0,1];
/// integrated by composite quadrature with the density linearly interpolated
/// (documented tolerance 1e-6 at the default grid sizes).
struct DensityGridMeasure {
  std::vector<Vec> axis_density;

  double interp(int ax, double x) const {
    const Vec& g = axis_density[ax];
    const auto n = g.size();
    double u = x * static_cast<double>(n - 1);
    auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 2);
    double f = u - static_cast<double>(i);
    return g(i) + f * (g(i + 1) - g(i));
  }
};

using Measure = std::variant<UniformMeasure, EmpiricalMeasure, DensityGridMeasure>;

inline std::string measure_name(const Measure& m) {
  if (std::holds_alternative<UniformMeasure>(m)) return "uniform";
  if (std::holds_alternative<EmpiricalMeasure>(m)) return "empirical";
  return "density_grid";
}

/// Quadrature rule adequate for Gram integrals of one axis family: splines
/// use knot-aligned subintervals (exact, the integrand is piecewise
/// polynomial), cosines a composite rule resolving the highest frequency,
/// wavelets dyadic midpoints where the cascade table is exact.
inline QuadratureRule axis_quadrature(const AxisSpec& axis) {
  if (const auto* b = std::get_if<BSplineAxis>(&axis))
    return gauss_legendre(10, b->interior_knots + 1);
  if (std::get_if<WaveletAxis>(&axis)) {
    const int level = 17;  // midpoints hit exact entries of the 2^18 tables
    const int n = 1 << level;
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights = Vec::Constant(n, 1.0 / n);
    for (int i = 0; i < n; ++i) rule.nodes(i) = (i + 0.5) / n;
    return rule;
  }
  const int k = std::get<CosineAxis>(axis).dim;
  return gauss_legendre(10, std::max(16, k));
}

namespace detail {

inline Mat axis_gram_quadrature(const AxisSpec& axis, const QuadratureRule& rule,
                                const DensityGridMeasure* density, int ax_index) {
  const int k = axis_dimension(axis);
  Mat g = Mat::Zero(k, k);
  for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
    Vec b = axis_eval(axis, rule.nodes(q));
    double w = rule.weights(q);
    if (density) w *= density->interp(ax_index, rule.nodes(q));
    g.selfadjointView<Eigen::Lower>().rankUpdate(b, w);
  }
  return g.selfadjointView<Eigen::Lower>();
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// Gram matrix E[b(X) b(X)'] of the raw basis under the measure. Uniform and
/// density-grid measures factor across axes (product measures); the empirical
/// version is the sample second-moment matrix.
inline Mat gram_matrix(const SieveSpec& spec, const Measure& measure) {
  if (const auto* emp = std::get_if<EmpiricalMeasure>(&measure)) {
    const Mat& pts = emp->points;
    if (pts.rows() == 0) throw std::domain_error("gram_matrix: empty empirical sample");
    const int k = spec.dimension();
    Mat g = Mat::Zero(k, k);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      Vec b = tensor_eval(spec, pts.row(i).transpose());
      g.selfadjointView<Eigen::Lower>().rankUpdate(b, 1.0);
    }
    return Mat(g.selfadjointView<Eigen::Lower>()) / static_cast<double>(pts.rows());
  }
  const auto* density = std::get_if<DensityGridMeasure>(&measure);
  if (density && static_cast<int>(density->axis_density.size()) != spec.dim_domain())
    throw config_error("gram_matrix: density grid axis count mismatch");
  Mat g = detail::axis_gram_quadrature(spec.axes[0], axis_quadrature(spec.axes[0]), density, 0);
  for (int ax = 1; ax < spec.dim_domain(); ++ax)
    g = detail::kron(
        g, detail::axis_gram_quadrature(spec.axes[ax], axis_quadrature(spec.axes[ax]), density, ax));
  return g;
}

// ---------------------------------------------------------------------------
// Orthonormalized basis handles
// ---------------------------------------------------------------------------

/// Realized basis: raw evaluation plus the orthonormalizing map
/// transform = gram^(-1/2), so that transform * b(x) is orthonormal under the
/// chosen measure.
struct BasisHandle {
  SieveSpec spec;
  Measure measure;
  Mat gram;
  Mat transform;
  double gram_min_eig = 0.0;
  bool rank_warning = false;

  int dimension() const { return spec.dimension(); }
  int dim_domain() const { return spec.dim_domain(); }

  Vec eval_raw(const Vec& point) const { return tensor_eval(spec, point); }
  Vec eval_orthonormal(const Vec& point) const { return transform * eval_raw(point); }

  /// n x K matrices of evaluations.
  Mat raw_rows(const Mat& points) const { return eval_rows(spec, points); }
  Mat orthonormal_rows(const Mat& points) const { return raw_rows(points) * transform; }
};

/// Construct the orthonormalized handle; throws on a singular Gram and
/// carries a rank warning when the smallest eigenvalue is below 1e-12.
inline BasisHandle orthonormalize(const SieveSpec& spec, const Measure& measure) {
  BasisHandle h;
  h.spec = spec;
  h.measure = measure;
  h.gram = gram_matrix(spec, measure);
  h.gram_min_eig = min_eig_sym(h.gram);
  h.rank_warning = h.gram_min_eig < 1e-12;
  if (h.gram_min_eig <= 0.0)
    throw std::domain_error("orthonormalize: Gram matrix singular, min eigenvalue " +
                            std::to_string(h.gram_min_eig));
  h.transform = inv_sqrt_psd(h.gram);
  return h;
}

/// sup-norm of the orthonormalized basis vector over a uniform tensor grid:
/// zeta_0(K) = sup_x ||btilde(x)||.
inline double zeta0(const BasisHandle& handle, int grid_per_dim = 1001) {
  if (grid_per_dim < 2) throw std::domain_error("zeta0: grid_per_dim must be >= 2");
  const int d = handle.dim_domain();
  std::vector<int> idx(d, 0);
  double best = 0.0;
  Vec point(d);
  while (true) {
    for (int a = 0; a < d; ++a) point(a) = static_cast<double>(idx[a]) / (grid_per_dim - 1);
    best = std::max(best, handle.eval_orthonormal(point).norm());
    int a = d - 1;
    while (a >= 0 && ++idx[a] == grid_per_dim) idx[a--] = 0;
    if (a < 0) break;
  }
  return best;
}

}  // namespace npiv
