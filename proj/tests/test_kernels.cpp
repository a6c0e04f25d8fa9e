#include <cmath>

#include "data/kernel_reference.h"
#include "data/potential_reference.h"
#include "doctest.h"
#include "stbem/kernels.h"
#include "stbem/material.h"
#include "stbem/wave_modes.h"

namespace {

stbem::material mat_of(double cp, double cs, double rho) {
  stbem::material m{cp, cs, rho};
  m.validate();
  return m;
}

// traction at y from the displacement kernel by finite differences in y
// (y-derivatives are negative difference derivatives)
void traction_fd(const stbem::material& mat, int m, double t, double d1,
                 double d2, const double ny[2], double out[2][2]) {
  const double h = 1e-6;
  const double lam = mat.lambda(), mu = mat.mu();
  double grad[2][2][2];  // grad[q][i][j] = d/dy_q G[i][j]
  for (int q = 0; q < 2; ++q) {
    double plus[2][2], minus[2][2];
    const double s1 = (q == 0) ? h : 0.0, s2 = (q == 1) ? h : 0.0;
    stbem::displacement_kernel(mat, m, t, d1 - s1, d2 - s2, plus);
    stbem::displacement_kernel(mat, m, t, d1 + s1, d2 + s2, minus);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        grad[q][i][j] = (plus[i][j] - minus[i][j]) / (2.0 * h);
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double div = grad[0][i][0] + grad[1][i][1];
      double sym = 0.0;
      for (int q = 0; q < 2; ++q)
        sym += ny[q] * (grad[q][i][j] + grad[j][i][q]);
      out[i][j] = lam * ny[j] * div + mu * sym;
    }
  }
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("potential jet against high-precision reference") {
    for (const auto& row : stbem::testdata::kPotentialJetValues) {
      const auto mat = mat_of(row[0], row[1], row[2]);
      const double t = row[3], r = row[4];
      const int m = static_cast<int>(row[5]);
      const auto jet = stbem::wave_potential_jet(mat, m, t, r);
      INFO("m=", m, " t=", t, " r=", r);
      CHECK(jet.phi == doctest::Approx(row[6]).epsilon(1e-11));
      CHECK(jet.dphi == doctest::Approx(row[7]).epsilon(1e-10));
      CHECK(jet.ddphi == doctest::Approx(row[8]).epsilon(1e-9));
      CHECK(jet.dddphi == doctest::Approx(row[9]).epsilon(1e-8));
    }
  }

  TEST_CASE("displacement kernel against frozen tensor values") {
    for (const auto& row : stbem::testdata::kTensorValues) {
      const auto mat = mat_of(row[3], row[4], row[5]);
      double out[2][2];
      stbem::displacement_kernel(mat, 0, row[0], row[1], row[2], out);
      CHECK(out[0][0] == doctest::Approx(row[6]).epsilon(1e-12));
      CHECK(out[0][1] == doctest::Approx(row[7]).epsilon(1e-12));
      CHECK(out[1][0] == doctest::Approx(row[8]).epsilon(1e-12));
      CHECK(out[1][1] == doctest::Approx(row[9]).epsilon(1e-12));
    }
  }

  TEST_CASE("level 1 equals the time integral of level 0") {
    for (const auto& row : stbem::testdata::kTimeQuadValues) {
      const auto mat = mat_of(row[3], row[4], row[5]);
      double out[2][2];
      stbem::displacement_kernel(mat, 1, row[0], row[1], row[2], out);
      CHECK(out[0][0] == doctest::Approx(row[6]).epsilon(1e-11));
      CHECK(out[0][1] == doctest::Approx(row[7]).epsilon(1e-11));
      CHECK(out[1][0] == doctest::Approx(row[8]).epsilon(1e-11));
      CHECK(out[1][1] == doctest::Approx(row[9]).epsilon(1e-11));
    }
  }

  TEST_CASE("displacement kernel symmetry and causality") {
    const auto mat = mat_of(2.0, 1.0, 1.5);
    double out[2][2];
    for (int m = 0; m <= 3; ++m) {
      stbem::displacement_kernel(mat, m, 0.2, 0.5, -0.3, out);
      // beyond the fast front: zero
      CHECK(out[0][0] == 0.0);
      CHECK(out[1][1] == 0.0);
      stbem::displacement_kernel(mat, m, 0.8, 0.5, -0.3, out);
      CHECK(out[0][1] == out[1][0]);
      CHECK(std::isfinite(out[0][0]));
    }
    // between the fronts only the fast wave contributes
    stbem::displacement_kernel(mat, 0, 0.4, 0.5, -0.3, out);
    CHECK(out[0][0] != 0.0);
  }

  TEST_CASE("traction kernel matches finite differences of displacement") {
    const double ny[2] = {0.6, -0.8};
    const auto mat = mat_of(2.0, 1.0, 1.5);
    const auto mat2 = mat_of(2.75, 1.32, 0.87);
    struct pt {
      const stbem::material& m;
      int level;
      double t, d1, d2;
    };
    const pt pts[] = {{mat, 2, 0.8, 0.3, -0.2},  {mat, 2, 1.4, -0.5, 0.45},
                      {mat, 3, 0.8, 0.3, -0.2},  {mat2, 2, 1.1, 0.25, 0.4},
                      {mat2, 3, 0.33, 0.41, 0.1}};
    for (const auto& p : pts) {
      double ref[2][2], got[2][2];
      traction_fd(p.m, p.level, p.t, p.d1, p.d2, ny, ref);
      stbem::traction_kernel(p.m, p.level, p.t, p.d1, p.d2, ny, got);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          INFO("level=", p.level, " t=", p.t, " i=", i, " j=", j);
          CHECK(got[i][j] == doctest::Approx(ref[i][j]).epsilon(1e-7));
        }
    }
  }

  TEST_CASE("hypersingular parts reproduce the raw kernel pointwise") {
    // W = ds_x ds_y [dd] + ds_x [du] + ds_y [ud] + uu with the arc-length
    // derivatives applied by finite differences along the tangents
    const auto mat = mat_of(2.0, 1.0, 1.5);
    const double nx[2] = {0.28, 0.96}, ny[2] = {-0.8, 0.6};
    const double tx[2] = {nx[1], -nx[0]}, ty[2] = {ny[1], -ny[0]};
    const double t = 0.9;
    const double h = 1e-5;
    for (const auto& d : {std::pair{0.31, -0.22}, std::pair{-0.4, 0.33}}) {
      const double d1 = d.first, d2 = d.second;
      double raw[2][2];
      stbem::double_traction_kernel_fd(mat, t, d1, d2, nx, ny, raw);

      auto parts_at = [&](double a, double b) {
        stbem::hypersingular_parts p;
        stbem::hypersingular_kernel(mat, t, a, b, nx, ny, p);
        return p;
      };
      const auto pc = parts_at(d1, d2);
      const auto pxp = parts_at(d1 + h * tx[0], d2 + h * tx[1]);
      const auto pxm = parts_at(d1 - h * tx[0], d2 - h * tx[1]);
      // ds_y = -ty . grad_d
      const auto pyp = parts_at(d1 - h * ty[0], d2 - h * ty[1]);
      const auto pym = parts_at(d1 + h * ty[0], d2 + h * ty[1]);
      const auto pxpyp = parts_at(d1 + h * (tx[0] - ty[0]), d2 + h * (tx[1] - ty[1]));
      const auto pxpym = parts_at(d1 + h * (tx[0] + ty[0]), d2 + h * (tx[1] + ty[1]));
      const auto pxmyp = parts_at(d1 - h * (tx[0] + ty[0]), d2 - h * (tx[1] + ty[1]));
      const auto pxmym = parts_at(d1 - h * (tx[0] - ty[0]), d2 - h * (tx[1] - ty[1]));
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
          const double dsdsdd = (pxpyp.dd[k][j] - pxpym.dd[k][j] -
                                 pxmyp.dd[k][j] + pxmym.dd[k][j]) /
                                (4.0 * h * h);
          const double dsdu = (pxp.du[k][j] - pxm.du[k][j]) / (2.0 * h);
          const double dsud = (pyp.ud[k][j] - pym.ud[k][j]) / (2.0 * h);
          const double sum = dsdsdd + dsdu + dsud + pc.uu[k][j];
          INFO("k=", k, " j=", j, " d=(", d1, ",", d2, ")");
          CHECK(sum == doctest::Approx(raw[k][j]).epsilon(2e-5));
        }
    }
  }

  TEST_CASE("hypersingular parts stay bounded near the diagonal") {
    const auto mat = mat_of(2.0, 1.0, 1.5);
    const double nx[2] = {0.0, 1.0}, ny[2] = {0.0, 1.0};
    stbem::hypersingular_parts p;
    for (double r : {1e-2, 1e-4, 1e-6}) {
      stbem::hypersingular_kernel(mat, 1.0, r, 0.0, nx, ny, p);
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
          CHECK(std::isfinite(p.dd[k][j]));
          CHECK(std::abs(p.dd[k][j]) < 1e3);  // log growth only
          CHECK(std::abs(p.uu[k][j]) < 1e3);
        }
    }
  }
}
