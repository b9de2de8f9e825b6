#pragma once

#include <stdexcept>
#include <string>

namespace npiv {

/// Invalid configuration (bad field values, inconsistent blocks). CLI exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Input data does not match the documented schema (e.g. CSV columns). CLI exit code 2.
class schema_error : public config_error {
 public:
  explicit schema_error(const std::string& what) : config_error(what) {}
};

/// Numerical failure (non-convergence, rank deficiency, domain violations). CLI exit code 4.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// The NPIV denominator matrix is numerically singular; carries the observed
/// smallest singular value of S-hat so callers can report the regularization
/// strength that failed. CLI exit code 3.
class illposedness_error : public std::runtime_error {
 public:
  illposedness_error(const std::string& what, double sigma_hat_jk)
      : std::runtime_error(what), sigma_hat_jk_(sigma_hat_jk) {}
  double sigma_hat_jk() const { return sigma_hat_jk_; }

 private:
  double sigma_hat_jk_;
};

}  // namespace npiv
