#include <cmath>
#include <vector>

#include "doctest.h"
#include "stbem/gauss.h"

namespace {

double integrate(const stbem::gauss_rule& rule, double (*f)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(rule.x[i]);
  return s;
}

}  // namespace

TEST_SUITE("gauss") {
  TEST_CASE("weights sum to interval length") {
    for (int n : {1, 2, 5, 8, 16, 32}) {
      const auto rule = stbem::gauss_legendre(n);
      REQUIRE(rule.x.size() == static_cast<std::size_t>(n));
      double s = 0.0;
      for (double w : rule.w) s += w;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
      for (double x : rule.x) {
        CHECK(x > 0.0);
        CHECK(x < 1.0);
      }
    }
  }

  TEST_CASE("polynomial exactness to degree 2n-1") {
    for (int n : {2, 4, 7, 12}) {
      const auto rule = stbem::gauss_legendre(n);
      for (int p = 0; p <= 2 * n - 1; ++p) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i)
          s += rule.w[i] * std::pow(rule.x[i], p);
        CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("subdivided rule reproduces piecewise integrals") {
    const auto rule = stbem::gauss_subdivided(8, {0.0, 0.3, 0.3, 0.7, 1.0});
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
      s += rule.w[i] * std::cos(3.0 * rule.x[i]);
    CHECK(s == doctest::Approx(std::sin(3.0) / 3.0).epsilon(1e-14));
    // duplicate breakpoints are collapsed: 3 panels of 8 points
    CHECK(rule.x.size() == 24);
  }

  TEST_CASE("graded rule handles endpoint log singularity") {
    // With 10 points per cell the error saturates near 5e-9: the cell next
    // to the singularity limits the rate regardless of the level count.
    const auto rule = stbem::gauss_graded(10, 12, 0.15, true);
    const double s = integrate(rule, [](double x) { return std::log(x); });
    CHECK(s == doctest::Approx(-1.0).epsilon(1e-8));
    const auto away = stbem::gauss_graded(10, 12, 0.15, false);
    const double s2 =
        integrate(away, [](double x) { return std::log1p(-x); });
    CHECK(s2 == doctest::Approx(-1.0).epsilon(1e-8));
    // Raising the per-cell order pushes the saturation level down.
    const auto fine = stbem::gauss_graded(16, 14, 0.15, true);
    const double s3 = integrate(fine, [](double x) { return std::log(x); });
    CHECK(s3 == doctest::Approx(-1.0).epsilon(1e-12));
  }
}
