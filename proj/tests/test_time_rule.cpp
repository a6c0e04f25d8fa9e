#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "stbem/gauss.h"
#include "stbem/kernels.h"
#include "stbem/material.h"

namespace {

using stbem::material;
using stbem::toeplitz_kind;

const material kMat{2.0, 1.0, 1.5};

// Integrates a 2x2 matrix kernel of time over [a, b], clamped to t >= 0.
// arrivals lists the times where the integrand switches on with
// inverse-square-root behaviour; substituting t = t* + u^2 on the cell
// right of each arrival makes the integrand analytic, so a fixed-order
// Gauss rule reaches machine accuracy.
template <typename F>
void window_integral(F&& f, double a, double b,
                     const std::vector<double>& arrivals, double out[2][2]) {
  out[0][0] = out[0][1] = out[1][0] = out[1][1] = 0.0;
  a = std::max(a, 0.0);
  if (b <= a) return;
  std::vector<double> cuts = {a, b};
  for (double t : arrivals) {
    if (t > a && t < b) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  const stbem::gauss_rule& rule = stbem::gauss_legendre(48);
  double val[2][2];
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double p = cuts[c], q = cuts[c + 1];
    const bool sing =
        std::any_of(arrivals.begin(), arrivals.end(),
                    [&](double t) { return std::abs(t - p) < 1e-14; });
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      double t = 0.0, w = 0.0;
      if (sing) {
        const double umax = std::sqrt(q - p);
        const double u = umax * rule.x[i];
        t = p + u * u;
        w = umax * rule.w[i] * 2.0 * u;
      } else {
        t = p + (q - p) * rule.x[i];
        w = (q - p) * rule.w[i];
      }
      f(t, val);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) out[k][j] += w * val[k][j];
      }
    }
  }
}

double max_abs(const double m[2][2]) {
  return std::max(std::max(std::abs(m[0][0]), std::abs(m[0][1])),
                  std::max(std::abs(m[1][0]), std::abs(m[1][1])));
}

double max_abs_diff(const double a[2][2], const double b[2][2]) {
  double e = 0.0;
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(a[k][j] - b[k][j]));
  }
  return e;
}

}  // namespace

TEST_SUITE("time_rule") {
  TEST_CASE("weights are exactly zero before the leading front arrives") {
    const double dt = 0.1, d1 = 0.6, d2 = 0.8;  // r = 1, first arrival 0.5
    const double nx[2] = {0.0, 1.0}, ny[2] = {1.0, 0.0};
    for (std::size_t lag : {0u, 1u, 3u}) {  // cp (lag+1) dt <= 0.8 < r
      for (toeplitz_kind kind :
           {toeplitz_kind::single_layer, toeplitz_kind::double_layer,
            toeplitz_kind::adjoint_double_layer}) {
        double out[2][2];
        stbem::time_integrated_kernel(kind, kMat, lag, dt, d1, d2, nx, ny,
                                      out);
        for (int k = 0; k < 2; ++k) {
          for (int j = 0; j < 2; ++j) CHECK(out[k][j] == 0.0);
        }
      }
      stbem::hypersingular_parts parts;
      stbem::time_integrated_hypersingular(kMat, lag, dt, d1, d2, nx, ny,
                                           parts);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) {
          CHECK(parts.dd[k][j] == 0.0);
          CHECK(parts.du[k][j] == 0.0);
          CHECK(parts.ud[k][j] == 0.0);
          CHECK(parts.uu[k][j] == 0.0);
        }
      }
    }
  }

  TEST_CASE("weights match direct time integration of the kernel levels") {
    // The lag-n weight is a second difference of an exact antiderivative,
    // so it must equal the difference of two window integrals of the
    // level below.  The windows straddle both wavefront arrivals here.
    const double d1 = 0.3, d2 = 0.4, r = 0.5, dt = 0.2;
    const std::vector<double> arrivals = {r / kMat.cp, r / kMat.cs};
    const double nx[2] = {-0.8, 0.6}, ny[2] = {0.6, 0.8};

    for (std::size_t lag : {1u, 2u, 3u, 5u}) {
      const double t0 = (double(lag) - 1.0) * dt;
      const double t1 = double(lag) * dt;
      const double t2 = (double(lag) + 1.0) * dt;

      double v[2][2], wa[2][2], wb[2][2], ref[2][2];
      stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, lag,
                                    dt, d1, d2, nx, ny, v);
      auto g0 = [&](double t, double o[2][2]) {
        stbem::displacement_kernel(kMat, 0, t, d1, d2, o);
      };
      window_integral(g0, t0, t1, arrivals, wa);
      window_integral(g0, t1, t2, arrivals, wb);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) ref[k][j] = -(wb[k][j] - wa[k][j]);
      }
      CHECK(max_abs_diff(v, ref) < 1e-12 * std::max(max_abs(ref), 1.0));

      double kv[2][2];
      stbem::time_integrated_kernel(toeplitz_kind::double_layer, kMat, lag,
                                    dt, d1, d2, nx, ny, kv);
      auto k1 = [&](double t, double o[2][2]) {
        stbem::traction_kernel(kMat, 1, t, d1, d2, ny, o);
      };
      window_integral(k1, t0, t1, arrivals, wa);
      window_integral(k1, t1, t2, arrivals, wb);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) ref[k][j] = -(wb[k][j] - wa[k][j]) / dt;
      }
      CHECK(max_abs_diff(kv, ref) < 1e-12 * std::max(max_abs(ref), 1.0));
    }

    // Lag 0 keeps only the first window (history before t = 0 is empty).
    const double dt0 = 0.3;  // first arrival 0.25 lies inside [0, 0.3]
    double v0[2][2], w0[2][2], ref0[2][2];
    stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, 0, dt0,
                                  d1, d2, nx, ny, v0);
    window_integral([&](double t, double o[2][2]) {
      stbem::displacement_kernel(kMat, 0, t, d1, d2, o);
    }, 0.0, dt0, arrivals, w0);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) ref0[k][j] = -w0[k][j];
    }
    CHECK(max_abs_diff(v0, ref0) < 1e-12 * std::max(max_abs(ref0), 1.0));
  }

  TEST_CASE("adjoint weights transpose the double-layer weights") {
    const double dt = 0.2;
    const double nx[2] = {0.28, -0.96}, ny[2] = {0.6, 0.8};
    for (std::size_t lag : {0u, 1u, 2u, 4u}) {
      for (const auto& d : std::vector<std::array<double, 2>>{
               {0.3, 0.4}, {-0.2, 0.5}, {0.7, -0.1}}) {
        double adj[2][2], dl[2][2];
        stbem::time_integrated_kernel(toeplitz_kind::adjoint_double_layer,
                                      kMat, lag, dt, d[0], d[1], nx, ny,
                                      adj);
        // Same material, reversed difference vector, and the test-side
        // normal playing the trial role.
        stbem::time_integrated_kernel(toeplitz_kind::double_layer, kMat,
                                      lag, dt, -d[0], -d[1], ny, nx, dl);
        for (int k = 0; k < 2; ++k) {
          for (int j = 0; j < 2; ++j) CHECK(adj[k][j] == -dl[j][k]);
        }
      }
    }
  }

  TEST_CASE("weights telescope to the kernel antiderivatives") {
    // Summing the second differences over all lags collapses to a first
    // difference of the antiderivative at the last two grid times; this
    // pins the causal clipping and the lag bookkeeping exactly.
    const double d1 = 0.3, d2 = -0.4, dt = 0.2;
    const std::size_t K = 12;
    const double nx[2] = {0.0, -1.0}, ny[2] = {0.8, 0.6};
    const double tK = double(K) * dt, tK1 = double(K + 1) * dt;

    double sum_v[2][2] = {{0, 0}, {0, 0}}, sum_k[2][2] = {{0, 0}, {0, 0}};
    stbem::hypersingular_parts sum_w{};
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        sum_w.dd[k][j] = sum_w.du[k][j] = sum_w.ud[k][j] = sum_w.uu[k][j] =
            0.0;
      }
    }
    for (std::size_t lag = 0; lag <= K; ++lag) {
      double out[2][2];
      stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, lag,
                                    dt, d1, d2, nx, ny, out);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) sum_v[k][j] += out[k][j];
      }
      stbem::time_integrated_kernel(toeplitz_kind::double_layer, kMat, lag,
                                    dt, d1, d2, nx, ny, out);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) sum_k[k][j] += out[k][j];
      }
      stbem::hypersingular_parts parts;
      stbem::time_integrated_hypersingular(kMat, lag, dt, d1, d2, nx, ny,
                                           parts);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) {
          sum_w.dd[k][j] += parts.dd[k][j];
          sum_w.du[k][j] += parts.du[k][j];
          sum_w.ud[k][j] += parts.ud[k][j];
          sum_w.uu[k][j] += parts.uu[k][j];
        }
      }
    }

    double ga[2][2], gb[2][2], ref[2][2];
    stbem::displacement_kernel(kMat, 1, tK1, d1, d2, ga);
    stbem::displacement_kernel(kMat, 1, tK, d1, d2, gb);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) ref[k][j] = -(ga[k][j] - gb[k][j]);
    }
    CHECK(max_abs_diff(sum_v, ref) < 1e-13);

    stbem::traction_kernel(kMat, 2, tK1, d1, d2, ny, ga);
    stbem::traction_kernel(kMat, 2, tK, d1, d2, ny, gb);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        ref[k][j] = -(ga[k][j] - gb[k][j]) / dt;
      }
    }
    CHECK(max_abs_diff(sum_k, ref) < 1e-12);

    stbem::hypersingular_parts pa, pb;
    stbem::hypersingular_kernel(kMat, tK1, d1, d2, nx, ny, pa);
    stbem::hypersingular_kernel(kMat, tK, d1, d2, nx, ny, pb);
    const double s = dt * dt;
    double err = 0.0;
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        err = std::max(err, std::abs(s * sum_w.dd[k][j] -
                                     (pa.dd[k][j] - pb.dd[k][j])));
        err = std::max(err, std::abs(s * sum_w.du[k][j] -
                                     (pa.du[k][j] - pb.du[k][j])));
        err = std::max(err, std::abs(s * sum_w.ud[k][j] -
                                     (pa.ud[k][j] - pb.ud[k][j])));
        err = std::max(err, std::abs(s * sum_w.uu[k][j] -
                                     (pa.uu[k][j] - pb.uu[k][j])));
      }
    }
    CHECK(err < 1e-12);
  }

  TEST_CASE("single-layer weight vanishes continuously at the front") {
    const double dt = 0.2;
    const std::size_t lag = 3;
    const double nx[2] = {0.0, 1.0}, ny[2] = {1.0, 0.0};
    const double rstar = kMat.cp * double(lag + 1) * dt;

    auto probe = [&](double rel) {
      const double r = rstar * (1.0 - rel);
      double out[2][2];
      stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, lag,
                                    dt, 0.6 * r, 0.8 * r, nx, ny, out);
      return max_abs(out);
    };
    const double near2 = probe(1e-2);
    const double near4 = probe(1e-4);
    // Square-root onset: the magnitude drops by ~10 per factor 100 of
    // distance to the front.
    CHECK(near4 < 0.2 * near2);
    CHECK(probe(1e-6) < 3e-5);

    double out[2][2];
    const double r = rstar * (1.0 + 1e-12);
    stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, lag,
                                  dt, 0.6 * r, 0.8 * r, nx, ny, out);
    CHECK(max_abs(out) == 0.0);
  }

  TEST_CASE("long-time cumulative sums reach the static kernel") {
    // With a constant-in-time density, marching sums of the single-layer
    // weights telescope twice; the difference between two observation
    // points converges to the plane-strain static fundamental solution
    // difference at rate (r / (c t))^2.  This ties the entire weight
    // family to the correct physical limit.
    const double mu = kMat.rho * kMat.cs * kMat.cs;
    const double lam = kMat.rho * (kMat.cp * kMat.cp - 2.0 * kMat.cs * kMat.cs);
    const double nu = lam / (2.0 * (lam + mu));
    const double r1 = 0.3, e1[2] = {1.0, 0.0};
    const double r2 = 0.7, e2[2] = {0.6, 0.8};
    auto kelvin = [&](double r, const double e[2], int k, int j) {
      const double pref = 1.0 / (8.0 * std::numbers::pi * mu * (1.0 - nu));
      return pref * ((3.0 - 4.0 * nu) * (-std::log(r)) * (k == j) +
                     e[k] * e[j]);
    };

    const double dt = 1.0;
    const std::size_t K = 1000;
    const double dummy[2] = {1.0, 0.0};
    double s1a[2][2] = {{0, 0}, {0, 0}}, s2a[2][2] = {{0, 0}, {0, 0}};
    double s1b[2][2] = {{0, 0}, {0, 0}}, s2b[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t lag = 0; lag <= K; ++lag) {
      double out[2][2];
      stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, lag,
                                    dt, r1 * e1[0], r1 * e1[1], dummy,
                                    dummy, out);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) {
          s1a[k][j] += out[k][j];
          s2a[k][j] += s1a[k][j];
        }
      }
      stbem::time_integrated_kernel(toeplitz_kind::single_layer, kMat, lag,
                                    dt, r2 * e2[0], r2 * e2[1], dummy,
                                    dummy, out);
      for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) {
          s1b[k][j] += out[k][j];
          s2b[k][j] += s1b[k][j];
        }
      }
    }
    // Double cumulative sum equals minus the level-1 kernel at the final
    // time, so the b-minus-a difference approaches the static difference.
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        const double dyn = s2b[k][j] - s2a[k][j];
        const double stat = kelvin(r1, e1, k, j) - kelvin(r2, e2, k, j);
        CHECK(dyn == doctest::Approx(stat).epsilon(2e-6));
      }
    }
  }
}
