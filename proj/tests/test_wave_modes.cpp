#include <cmath>
#include <initializer_list>

#include "data/kernel_reference.h"
#include "doctest.h"
#include "stbem/wave_modes.h"

TEST_SUITE("wave_modes") {
  TEST_CASE("frozen high-precision values") {
    for (const auto& row : stbem::testdata::kModeValues) {
      const int m = static_cast<int>(row[0]);
      const double v = stbem::wave_mode(m, row[1], row[2], row[3]);
      if (row[4] == 0.0) {
        CHECK(v == 0.0);
      } else {
        CHECK(v == doctest::Approx(row[4]).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("causal zero at and beyond the front") {
    for (int m = 0; m <= 5; ++m) {
      CHECK(stbem::wave_mode(m, 1.0, 1.3, 1.3) == 0.0);
      CHECK(stbem::wave_mode(m, 1.0, 2.0, 1.3) == 0.0);
      CHECK(stbem::wave_mode_dr(m, 1.0, 2.0, 1.3) == 0.0);
      CHECK(stbem::wave_mode(m, 0.0, 0.5, 1.3) == 0.0);
    }
  }

  TEST_CASE("levels are time antiderivatives of each other") {
    // d/dt g[m+1] = g[m] via central differences inside the light cone
    const double r = 0.4, c = 1.7;
    const double h = 1e-6;
    for (int m = 0; m <= 4; ++m) {
      for (double t : {0.3, 0.9, 2.2}) {
        const double fd = (stbem::wave_mode(m + 1, t + h, r, c) -
                           stbem::wave_mode(m + 1, t - h, r, c)) /
                          (2.0 * h);
        const double g = stbem::wave_mode(m, t, r, c);
        CHECK(fd == doctest::Approx(g).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("radial derivative matches finite differences") {
    const double c = 1.25, t = 1.1;
    const double h = 1e-6;
    for (int m = 0; m <= 5; ++m) {
      for (double r : {0.2, 0.55, 1.0}) {
        const double fd = (stbem::wave_mode(m, t, r + h, c) -
                           stbem::wave_mode(m, t, r - h, c)) /
                          (2.0 * h);
        const double g = stbem::wave_mode_dr(m, t, r, c);
        CHECK(fd == doctest::Approx(g).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("jet is consistent with value and derivatives") {
    const double c = 0.8, t = 2.3;
    const double h = 1e-5;
    for (int m = 0; m <= 5; ++m) {
      for (double r : {0.3, 0.9}) {
        const auto jet = stbem::wave_mode_jet(m, t, r, c);
        CHECK(jet.g0 == doctest::Approx(stbem::wave_mode(m, t, r, c)));
        CHECK(jet.g1 == doctest::Approx(stbem::wave_mode_dr(m, t, r, c)));
        const double fd2 = (stbem::wave_mode_dr(m, t, r + h, c) -
                            stbem::wave_mode_dr(m, t, r - h, c)) /
                           (2.0 * h);
        CHECK(jet.g2 == doctest::Approx(fd2).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("arrival continuity of antiderivative levels") {
    // g[m] -> 0 as r -> (c t)^- for m >= 1; the slowest level approaches
    // the front like sqrt(2 eps), so sample close enough for that branch
    // to fall below the bound.
    const double c = 1.0, t = 1.0;
    for (int m = 1; m <= 5; ++m) {
      const double near = stbem::wave_mode(m, t, 1.0 - 1e-8, c);
      const double far = stbem::wave_mode(m, t, 0.9, c);
      CHECK(std::abs(near) < std::abs(far));
      CHECK(std::abs(near) < 1e-3);
    }
  }
}
