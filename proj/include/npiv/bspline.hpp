#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "npiv/errors.hpp"
#include "npiv/numerics.hpp"

namespace npiv {

/// Extended knot sequence on [0,1] with boundary knots of multiplicity
/// `order`, so the full sequence is
///   t_0 = ... = t_{m-1} = 0 < t_m < ... < t_{m+N-1} < t_{m+N} = ... = t_{N+2m-1} = 1.
/// Spans K = N + m B-splines of order m (degree m-1).
struct KnotVector {
  int order = 0;
  int n_interior = 0;
  std::vector<double> knots;  // length n_interior + 2*order

  int dimension() const { return n_interior + order; }

  double mesh_ratio() const {
    double lo = 1.0, hi = 0.0;
    for (int j = 0; j <= n_interior; ++j) {
      double gap = knots[order + j] - knots[order + j - 1];
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
    }
    return hi / lo;
  }
};

/// Uniform interior knots t_j = j/(N+1). Mesh ratio is exactly one.
inline KnotVector make_knots(int order, int n_interior) {
  if (order < 1) throw std::domain_error("make_knots: order must be >= 1");
  if (n_interior < 0) throw std::domain_error("make_knots: n_interior must be >= 0");
  KnotVector kv;
  kv.order = order;
  kv.n_interior = n_interior;
  kv.knots.resize(n_interior + 2 * order);
  for (int i = 0; i < order; ++i) kv.knots[i] = 0.0;
  for (int j = 1; j <= n_interior; ++j)
    kv.knots[order + j - 1] = static_cast<double>(j) / (n_interior + 1);
  for (int i = 0; i < order; ++i) kv.knots[n_interior + order + i] = 1.0;
  return kv;
}

/// All K = N + m basis values at x by the De Boor (Cox-de Boor) recursion.
/// At most m entries are nonzero, all entries are non-negative and they sum
/// to one (partition of unity).
inline Vec bspline_eval(const KnotVector& kv, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("bspline_eval: x outside [0,1]");
  const int m = kv.order;
  const int K = kv.dimension();
  const std::vector<double>& t = kv.knots;

  // Knot span: largest i in [m-1, K-1] with t[i] <= x (x < t[i+1] except x = 1).
  int span = m - 1;
  while (span < K - 1 && x >= t[span + 1]) ++span;

  // Nonzero block N[0..m-1] = B_{span-m+1..span}(x).
  std::vector<double> vals(m), left(m), right(m);
  vals[0] = 1.0;
  for (int j = 1; j < m; ++j) {
    left[j] = x - t[span + 1 - j];
    right[j] = t[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      double denom = right[r + 1] + left[j - r];
      double temp = vals[r] / denom;
      vals[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    vals[j] = saved;
  }

  Vec out = Vec::Zero(K);
  for (int r = 0; r < m; ++r) out(span - m + 1 + r) = vals[r];
  return out;
}

}  // namespace npiv
