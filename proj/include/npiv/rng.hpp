#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace npiv {

/// Seeded random stream with fully specified draw algorithms, so that a
/// (config, seed) pair reproduces samples bit-for-bit. Replications use
/// independent streams: stream seed = base_seed + replication_index.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform draw in the open interval (0,1).
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Student-t with `dof` degrees of freedom (not standardized). Uses the
  /// polar representation: R^2 = dof*(u^(-2/dof) - 1) with a uniform angle,
  /// which reduces to Box-Muller as dof -> infinity. Consumes two uniforms.
  double student_t(double dof) {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(dof * (std::pow(u1, -2.0 / dof) - 1.0));
    return r * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace npiv
