#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "npiv/errors.hpp"
#include "npiv/numerics.hpp"

namespace npiv {

/// Orthonormal Daubechies low-pass filters with N vanishing moments,
/// normalized so the coefficients sum to sqrt(2). Closed forms for
/// N in {1, 2, 3}.
inline std::vector<double> daubechies_filter(int vanishing_moments) {
  const double s2 = std::sqrt(2.0);
  switch (vanishing_moments) {
    case 1:
      return {1.0 / s2, 1.0 / s2};
    case 2: {
      const double s3 = std::sqrt(3.0);
      return {(1.0 + s3) / (4.0 * s2), (3.0 + s3) / (4.0 * s2), (3.0 - s3) / (4.0 * s2),
              (1.0 - s3) / (4.0 * s2)};
    }
    case 3: {
      const double s10 = std::sqrt(10.0);
      const double q = std::sqrt(5.0 + 2.0 * s10);
      const double c = 16.0 * s2;
      return {(1.0 + s10 + q) / c,        (5.0 + s10 + 3.0 * q) / c,
              (10.0 - 2.0 * s10 + 2.0 * q) / c, (10.0 - 2.0 * s10 - 2.0 * q) / c,
              (5.0 + s10 - 3.0 * q) / c,  (1.0 + s10 - q) / c};
    }
    default:
      throw config_error("daubechies_filter: unsupported vanishing moments " +
                         std::to_string(vanishing_moments) + " (supported: 1, 2, 3)");
  }
}

/// Father/mother wavelet values on [0, 2N-1], sampled at dyadic points
/// k / 2^resolution_log2. Values at dyadic points are exact (refinement from
/// the exact integer values); evaluation between grid points interpolates
/// linearly.
struct WaveletTables {
  int vanishing_moments = 0;
  int resolution_log2 = 0;
  double support_len = 0.0;          // 2N - 1
  std::vector<double> phi, psi;      // support_len * 2^resolution + 1 entries

  double lookup(const std::vector<double>& tab, double x) const {
    if (x < 0.0 || x >= support_len) return 0.0;
    double u = std::ldexp(x, resolution_log2);
    auto i = static_cast<std::size_t>(u);
    double f = u - static_cast<double>(i);
    return tab[i] + f * (tab[i + 1] - tab[i]);
  }

  double father(double x) const { return lookup(phi, x); }
  double mother(double x) const { return lookup(psi, x); }
};

namespace detail {

/// Scaling-function values at the integers 1..2N-2: the eigenvector of
/// A(a,b) = sqrt(2) h_{2a-b} for eigenvalue 1, normalized to sum to one
/// (partition of unity fixes the scale).
inline std::vector<double> scaling_integer_values(const std::vector<double>& h) {
  const int n = static_cast<int>(h.size());  // 2N
  const int len = n - 1;                     // support is [0, 2N-1]
  std::vector<double> vals(len + 1, 0.0);
  if (n == 2) {  // Haar: constant one on [0,1)
    vals[0] = 1.0;
    return vals;
  }
  const int m = len - 1;  // interior integers 1..2N-2
  Mat a = Mat::Zero(m, m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      int k = 2 * i - j;
      if (k >= 0 && k < n) a(i - 1, j - 1) = std::sqrt(2.0) * h[k];
    }
  Eigen::FullPivLU<Mat> lu(a - Mat::Identity(m, m));
  lu.setThreshold(1e-9);
  Mat kernel = lu.kernel();
  if (kernel.cols() != 1)
    throw numeric_error("scaling_integer_values: eigenvalue-1 space is not one-dimensional");
  double total = kernel.col(0).sum();
  for (int i = 1; i <= m; ++i) vals[i] = kernel(i - 1, 0) / total;
  return vals;
}

inline std::shared_ptr<WaveletTables> build_tables(int vanishing_moments, int resolution_log2) {
  std::vector<double> h = daubechies_filter(vanishing_moments);
  const int n = static_cast<int>(h.size());
  const int len = n - 1;
  const std::int64_t res = std::int64_t{1} << resolution_log2;
  const std::int64_t size = len * res + 1;

  // Dyadic refinement phi(m/2^r) = sqrt(2) sum_k h_k phi(m/2^(r-1) - k),
  // one level at a time starting from the integer values.
  std::vector<double> prev = scaling_integer_values(h);
  const double s2 = std::sqrt(2.0);
  for (int r = 1; r <= resolution_log2; ++r) {
    std::int64_t prev_res = std::int64_t{1} << (r - 1);
    std::int64_t cur_size = len * (std::int64_t{1} << r) + 1;
    std::vector<double> cur(cur_size, 0.0);
    for (std::int64_t m = 0; m < cur_size; ++m) {
      if ((m & 1) == 0) {
        cur[m] = prev[m >> 1];
        continue;
      }
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        std::int64_t ip = m - k * prev_res;
        if (ip >= 0 && ip < static_cast<std::int64_t>(prev.size())) acc += h[k] * prev[ip];
      }
      cur[m] = s2 * acc;
    }
    prev.swap(cur);
  }

  auto tabs = std::make_shared<WaveletTables>();
  tabs->vanishing_moments = vanishing_moments;
  tabs->resolution_log2 = resolution_log2;
  tabs->support_len = static_cast<double>(len);
  tabs->phi = std::move(prev);

  // psi(t) = sqrt(2) sum_k g_k phi(2t - k) with g_k = (-1)^k h_{2N-1-k}.
  tabs->psi.assign(size, 0.0);
  for (std::int64_t m = 0; m < size; ++m) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      std::int64_t ip = 2 * m - k * res;
      if (ip >= 0 && ip < size) {
        double g = ((k & 1) ? -1.0 : 1.0) * h[n - 1 - k];
        acc += g * tabs->phi[ip];
      }
    }
    tabs->psi[m] = s2 * acc;
  }
  return tabs;
}

}  // namespace detail

/// Cached cascade tables, built once per filter. Resolution 2^18: the D2
/// scaling function is rough enough (Hoelder ~0.55) that Gram quadrature at
/// coarser tables misses the 1e-6 orthonormality tolerance.
inline const WaveletTables& daubechies_tables(int vanishing_moments) {
  static std::mutex mu;
  static std::shared_ptr<WaveletTables> cache[4];
  if (vanishing_moments < 1 || vanishing_moments > 3)
    throw config_error("daubechies_tables: unsupported vanishing moments " +
                       std::to_string(vanishing_moments));
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[vanishing_moments];
  if (!slot) slot = detail::build_tables(vanishing_moments, 18);
  return *slot;
}

/// Periodized wavelet basis for [0,1]: scaling functions at the coarse level
/// plus wavelets at levels coarse..fine-1, dimension 2^fine. Ordering is
/// scaling shifts first, then wavelets by (level, shift).
struct PeriodizedWaveletBasis {
  int vanishing_moments;
  int coarse_level;
  int fine_level;

  int dimension() const { return 1 << fine_level; }

  /// sum_l 2^{j/2} f(2^j (x + l) - k) over the integer shifts l that land in
  /// the support.
  static double periodized(const WaveletTables& tabs, bool mother, int level, int shift,
                           double x) {
    const double scale = std::ldexp(1.0, level);       // 2^j
    const double amp = std::sqrt(scale);               // 2^{j/2}
    double base = scale * x - shift;
    // arguments base + l * scale in [0, support]
    double l0 = std::ceil(-base / scale);
    double acc = 0.0;
    for (double l = l0;; l += 1.0) {
      double arg = base + l * scale;
      if (arg > tabs.support_len) break;
      acc += mother ? tabs.mother(arg) : tabs.father(arg);
    }
    return amp * acc;
  }

  Vec eval(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("wavelet eval: x outside [0,1]");
    const WaveletTables& tabs = daubechies_tables(vanishing_moments);
    Vec out(dimension());
    int pos = 0;
    for (int k = 0; k < (1 << coarse_level); ++k)
      out(pos++) = periodized(tabs, false, coarse_level, k, x);
    for (int j = coarse_level; j < fine_level; ++j)
      for (int k = 0; k < (1 << j); ++k) out(pos++) = periodized(tabs, true, j, k, x);
    return out;
  }
};

}  // namespace npiv
