#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "npiv/bspline.hpp"
#include "npiv/rng.hpp"

using namespace npiv;

namespace {

// Independent B-spline oracle via divided differences of truncated powers:
//   B_{j,m}(x) = (t_{j+m} - t_j) [t_j,...,t_{j+m}] (. - x)_+^{m-1}.
// Repeated knots take the derivative rule f^{(k)}(t)/k!. Long double keeps
// the divided-difference cancellation comfortably below 1e-12.

long double trunc_power_deriv(long double t, long double x, int m, int r) {
  // r-th derivative of (t - x)_+^{m-1} with respect to t
  if (r > m - 1) return 0.0L;
  long double diff = t - x;
  if (diff < 0.0L) return 0.0L;
  long double c = 1.0L;
  for (int i = 0; i < r; ++i) c *= static_cast<long double>(m - 1 - i);
  if (m - 1 - r == 0) return diff > 0.0L ? c : 0.0L;
  return c * std::pow(diff, static_cast<long double>(m - 1 - r));
}

double bspline_oracle(const KnotVector& kv, int j, int m, double x) {
  const int n = m + 1;  // knots t_j .. t_{j+m}
  std::vector<long double> t(n);
  for (int i = 0; i < n; ++i) t[i] = kv.knots[j + i];
  // dd[i][k] = divided difference over t_i..t_{i+k}
  std::vector<std::vector<long double>> dd(n, std::vector<long double>(n, 0.0L));
  long double fact = 1.0L;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    for (int i = 0; i + k < n; ++i) {
      if (t[i + k] == t[i]) {
        dd[i][k] = trunc_power_deriv(t[i], x, m, k) / fact;
      } else {
        dd[i][k] = (dd[i + 1][k - 1] - dd[i][k - 1]) / (t[i + k] - t[i]);
      }
    }
  }
  return static_cast<double>((t[m] - t[0]) * dd[0][m]);
}

}  // namespace

TEST_CASE("make_knots layout") {
  KnotVector kv = make_knots(2, 1);
  REQUIRE(kv.knots.size() == 5);
  CHECK(kv.knots[0] == 0.0);
  CHECK(kv.knots[1] == 0.0);
  CHECK(kv.knots[2] == Catch::Approx(0.5));
  CHECK(kv.knots[3] == 1.0);
  CHECK(kv.knots[4] == 1.0);
  CHECK(kv.dimension() == 3);

  KnotVector k1 = make_knots(1, 0);
  REQUIRE(k1.knots.size() == 2);
  CHECK(k1.knots[0] == 0.0);
  CHECK(k1.knots[1] == 1.0);

  for (int m = 1; m <= 6; ++m)
    for (int n : {0, 1, 5, 20}) CHECK(make_knots(m, n).mesh_ratio() == Catch::Approx(1.0));
}

TEST_CASE("linear hat functions") {
  KnotVector kv = make_knots(2, 0);
  Vec v = bspline_eval(kv, 0.25);
  REQUIRE(v.size() == 2);
  CHECK(v(0) == Catch::Approx(0.75).margin(1e-15));
  CHECK(v(1) == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("partition of unity, positivity, local support") {
  RngStream rng(21);
  for (int m = 1; m <= 6; ++m) {
    for (int n : {0, 1, 3, 9, 20}) {
      KnotVector kv = make_knots(m, n);
      for (int rep = 0; rep < 40; ++rep) {
        double x = rng.uniform();
        Vec v = bspline_eval(kv, x);
        CHECK(std::abs(v.sum() - 1.0) < 1e-12);
        CHECK(v.minCoeff() >= 0.0);
        CHECK((v.array() != 0.0).count() <= m);
      }
      // endpoints
      CHECK(bspline_eval(kv, 0.0)(0) == Catch::Approx(1.0));
      CHECK(bspline_eval(kv, 1.0)(kv.dimension() - 1) == Catch::Approx(1.0));
    }
  }
  CHECK_THROWS_AS(bspline_eval(make_knots(2, 0), 1.5), std::domain_error);
}

TEST_CASE("De Boor matches divided-difference oracle") {
  RngStream rng(22);
  double worst = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    int m = 1 + static_cast<int>(rng.uniform() * 6);
    if (m > 6) m = 6;
    int n = static_cast<int>(rng.uniform() * 21);
    if (n > 20) n = 20;
    double x = rng.uniform();
    KnotVector kv = make_knots(m, n);
    Vec v = bspline_eval(kv, x);
    int j = static_cast<int>(rng.uniform() * kv.dimension());
    if (j >= kv.dimension()) j = kv.dimension() - 1;
    double ref = bspline_oracle(kv, j, m, x);
    worst = std::max(worst, std::abs(v(j) - ref));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("fixed-point spline value vs oracle") {
  KnotVector kv = make_knots(4, 5);
  Vec v = bspline_eval(kv, 0.37);
  for (int j = 0; j < kv.dimension(); ++j)
    CHECK(std::abs(v(j) - bspline_oracle(kv, j, 4, 0.37)) < 1e-12);
}
