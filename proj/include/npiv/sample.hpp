#pragma once

#include <Eigen/Dense>

#include "npiv/numerics.hpp"

namespace npiv {

/// One dataset {(Y1_i, Y2_i, X_i)}: response, endogenous regressors in
/// [0,1]^d, instruments in [0,1]^{d_x}.
struct Sample {
  Vec y1;
  Mat y2;
  Mat x;

  Eigen::Index size() const { return y1.size(); }
};

}  // namespace npiv
