#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "npiv/errors.hpp"
#include "npiv/numerics.hpp"

namespace npiv {

enum class IllPosednessKind { Mild, Severe };

/// Decay profile of the conditional expectation operator's singular values.
/// mu[k-1] is the singular value attached to the k-th cosine eigenfunction;
/// the constant function always has singular value one. Mild profiles decay
/// like c k^(-varsigma/d), severe ones like c exp(-k^(varsigma/d) / 2).
struct IllPosednessProfile {
  IllPosednessKind kind = IllPosednessKind::Mild;
  double varsigma = 1.0;
  double scale = 0.0;
  int d = 1;
  Vec mu;  // length = truncation length of the series

  int length() const { return static_cast<int>(mu.size()); }

  /// j-th largest singular value of the operator, indexing the constant as
  /// the first: s_1 = 1, s_{k+1} = mu_k, and zero beyond the truncation.
  double operator_singular_value(int j) const {
    if (j < 1) throw std::domain_error("operator_singular_value: j must be >= 1");
    if (j == 1) return 1.0;
    if (j - 2 < length()) return mu(j - 2);
    return 0.0;
  }

  static double decay(IllPosednessKind kind, double varsigma, int d, int k) {
    const double e = static_cast<double>(k);
    return kind == IllPosednessKind::Mild ? std::pow(e, -varsigma / d)
                                          : std::exp(-0.5 * std::pow(e, varsigma / d));
  }

  static IllPosednessProfile make(IllPosednessKind kind, double varsigma, double scale,
                                  int trunc, int d = 1) {
    if (varsigma <= 0.0) throw config_error("IllPosednessProfile: varsigma must be > 0");
    if (scale < 0.0 || scale > 1.0)
      throw config_error("IllPosednessProfile: scale must be in [0,1]");
    if (trunc < 1) throw config_error("IllPosednessProfile: truncation length must be >= 1");
    IllPosednessProfile p;
    p.kind = kind;
    p.varsigma = varsigma;
    p.scale = scale;
    p.d = d;
    p.mu.resize(trunc);
    for (int k = 1; k <= trunc; ++k) p.mu(k - 1) = scale * decay(kind, varsigma, d, k);
    return p;
  }

  /// Largest scale keeping the joint density positive: 2 sum mu_k = 0.9.
  static double max_scale(IllPosednessKind kind, double varsigma, int trunc, int d = 1) {
    double s = 0.0;
    for (int k = 1; k <= trunc; ++k) s += decay(kind, varsigma, d, k);
    return 0.45 / s;
  }
};

inline std::string to_string(IllPosednessKind k) {
  return k == IllPosednessKind::Mild ? "mild" : "severe";
}

}  // namespace npiv
