#include "stbem/kernels.h"

#include <cmath>
#include <stdexcept>

#include "stbem/wave_modes.h"

namespace stbem {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Below this ratio of r to the slow-wave radius the plain difference
// gP[m] - gS[m] loses digits (the third derivative worst of all) and the
// regrouped closed form takes over; above it the plain difference is the
// better-conditioned of the two.
constexpr double kRegroupRatio = 0.5;

inline void zero2x2(double out[2][2]) {
  out[0][0] = out[0][1] = out[1][0] = out[1][1] = 0.0;
}

// arccosh(z) - log(2z) for z >= 1: the part of the arrival factor that
// vanishes as z -> infinity.  The tail series keeps it accurate where the
// log difference would cancel.
double arccosh_defect(double z) {
  if (z < 10.0) return std::acosh(z) - std::log(2.0 * z);
  const double y = 1.0 / (z * z);
  // sum over n >= 1 of binom(2n, n) / (4^n 2n) * y^n, through n = 8
  double s = 6435.0 / 524288.0;
  s = s * y + 429.0 / 28672.0;
  s = s * y + 77.0 / 4096.0;
  s = s * y + 63.0 / 2560.0;
  s = s * y + 35.0 / 1024.0;
  s = s * y + 5.0 / 96.0;
  s = s * y + 3.0 / 32.0;
  s = s * y + 1.0 / 4.0;
  return -s * y;
}

}  // namespace

potential_jet wave_potential_jet(const material& mat, int m, double t,
                                 double r) {
  potential_jet jet;
  if (!(r > 0.0) || mat.cp * t <= r) return jet;
  if (m < 2 || m > 5) {
    throw std::invalid_argument("potential level must be 2 to 5");
  }
  const double cp2 = mat.cp * mat.cp, cs2 = mat.cs * mat.cs;
  if (r < kRegroupRatio * mat.cs * t) {
    // Write each mode as A ach + B w^3 + (gamma + delta u / c^2) w with
    // A = a + b u / c^2 + d u^2 / c^4, u = r^2, w = sqrt(1 - (r/ct)^2) and
    // ach = log(2t/r) + log(c) + defect.  In the difference of the two
    // speeds the pure number a multiplies log(cp/cs) exactly and every
    // remaining piece is O(r^2 log r), so nothing cancels:
    //   w_P - w_S           = (rhoS^2 - rhoP^2) / (w_P + w_S)
    //   w_P^3 - w_S^3       = (w_P - w_S)(w_P^2 + w_P w_S + w_S^2)
    //   defect'             = -r / (c^2 t^2 w (1 + w)).
    const double u = r * r, t2 = t * t;
    const double cp4 = cp2 * cp2, cs4 = cs2 * cs2;
    const double k1 = 1.0 / cp2 - 1.0 / cs2;
    const double k2 = 1.0 / cp4 - 1.0 / cs4;
    const double lk1 = std::log(mat.cp) / cp2 - std::log(mat.cs) / cs2;
    const double lk2 = std::log(mat.cp) / cp4 - std::log(mat.cs) / cs4;
    const double lr = std::log(mat.cp / mat.cs);
    double a, b, d, bq, gamma, delta;
    switch (m) {
      case 2:
        a = t, b = 0.0, d = 0.0, bq = 0.0, gamma = -t, delta = 0.0;
        break;
      case 3:
        a = 0.5 * t2, b = 0.25, d = 0.0, bq = 0.0;
        gamma = -0.75 * t2, delta = 0.0;
        break;
      case 4:
        a = t2 * t / 6.0, b = 0.25 * t, d = 0.0;
        bq = -11.0 * t2 * t / 36.0, gamma = 0.0, delta = -5.0 * t / 12.0;
        break;
      default:
        a = t2 * t2 / 24.0, b = 0.125 * t2, d = 1.0 / 64.0;
        bq = -25.0 * t2 * t2 / 288.0, gamma = 0.0;
        delta = -35.0 * t2 / 192.0;
        break;
    }
    const double rhop2 = u / (cp2 * t2), rhos2 = u / (cs2 * t2);
    const double wp = std::sqrt(1.0 - rhop2), ws = std::sqrt(1.0 - rhos2);
    const double defp = arccosh_defect(mat.cp * t / r);
    const double defs = arccosh_defect(mat.cs * t / r);
    const double ap = a + u * (b + u * d / cp2) / cp2;
    const double as = a + u * (b + u * d / cs2) / cs2;
    const double dap = 2.0 * r * b / cp2 + 4.0 * r * u * d / cp4;
    const double das = 2.0 * r * b / cs2 + 4.0 * r * u * d / cs4;
    const double ddefp = -r / (cp2 * t2 * wp * (1.0 + wp));
    const double ddefs = -r / (cs2 * t2 * ws * (1.0 + ws));
    const double da = u * b * k1 + u * u * d * k2;
    const double dda = 2.0 * r * b * k1 + 4.0 * r * u * d * k2;
    const double lg = std::log(2.0 * t / r);
    const double dw = -(u / t2) * k1 / (wp + ws);
    const double dw3 = dw * (wp * wp + wp * ws + ws * ws);
    const double wk1 = wp / cp2 - ws / cs2;
    const double iwk1 = 1.0 / (cp2 * wp) - 1.0 / (cs2 * ws);
    const double iwk2 = 1.0 / (cp4 * wp) - 1.0 / (cs4 * ws);
    jet.phi = da * lg + a * lr + u * b * lk1 + u * u * d * lk2 +
              (ap * defp - as * defs) + bq * dw3 + gamma * dw +
              delta * u * wk1;
    jet.dphi = dda * lg - da / r + 2.0 * r * b * lk1 + 4.0 * r * u * d * lk2 +
               (dap * defp - das * defs) + (ap * ddefp - as * ddefs) -
               bq * (3.0 * r / t2) * wk1 - gamma * (r / t2) * iwk1 +
               delta * (2.0 * r * wk1 - u * (r / t2) * iwk2);
  } else {
    jet.phi = wave_mode(m, t, r, mat.cp) - wave_mode(m, t, r, mat.cs);
    jet.dphi = wave_mode_dr(m, t, r, mat.cp) - wave_mode_dr(m, t, r, mat.cs);
  }
  // Higher derivatives through the radial wave equation
  //   phi'' = -phi'/r + psi,  psi = gP[m-2]/cp^2 - gS[m-2]/cs^2,
  // whose right-hand side mixes unequal speed weights and stays well
  // conditioned at small r.
  const double psi = wave_mode(m - 2, t, r, mat.cp) / cp2 -
                     wave_mode(m - 2, t, r, mat.cs) / cs2;
  const double dpsi = wave_mode_dr(m - 2, t, r, mat.cp) / cp2 -
                      wave_mode_dr(m - 2, t, r, mat.cs) / cs2;
  jet.ddphi = -jet.dphi / r + psi;
  jet.dddphi = jet.dphi / (r * r) - jet.ddphi / r + dpsi;
  return jet;
}

void displacement_kernel(const material& mat, int m, double t, double d1,
                         double d2, double out[2][2]) {
  zero2x2(out);
  const double r = std::hypot(d1, d2);
  if (!(r > 0.0) || mat.cp * t <= r) return;
  const potential_jet jet = wave_potential_jet(mat, m + 2, t, r);
  const double a = wave_mode(m, t, r, mat.cs) / (mat.cs * mat.cs);
  const double e1 = d1 / r, e2 = d2 / r;
  const double hrr = jet.ddphi;     // radial Hessian eigenvalue
  const double htt = jet.dphi / r;  // transverse Hessian eigenvalue
  const double scale = 1.0 / (kTwoPi * mat.rho);
  out[0][0] = scale * (a + hrr * e1 * e1 + htt * e2 * e2);
  out[0][1] = scale * (hrr - htt) * e1 * e2;
  out[1][0] = out[0][1];
  out[1][1] = scale * (a + hrr * e2 * e2 + htt * e1 * e1);
}

void traction_kernel(const material& mat, int m, double t, double d1,
                     double d2, const double ny[2], double out[2][2]) {
  zero2x2(out);
  const double r = std::hypot(d1, d2);
  if (!(r > 0.0) || mat.cp * t <= r) return;
  const potential_jet jet = wave_potential_jet(mat, m + 2, t, r);
  const double cp2 = mat.cp * mat.cp, cs2 = mat.cs * mat.cs;
  const double ap = wave_mode_dr(m, t, r, mat.cs) / cs2;
  const double bp = wave_mode_dr(m, t, r, mat.cp) / cp2;
  const double lam = mat.lambda(), mu = mat.mu();
  const double e[2] = {d1 / r, d2 / r};
  const double ne = ny[0] * e[0] + ny[1] * e[1];
  const double w2 = (jet.ddphi - jet.dphi / r) / r;
  const double w3 = jet.dddphi;
  const double scale = -1.0 / (kTwoPi * mat.rho);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double dij = (i == j) ? 1.0 : 0.0;
      // (ny . grad) of the Hessian of the potential
      const double third =
          w3 * ne * e[i] * e[j] +
          w2 * (ny[i] * e[j] + ny[j] * e[i] + dij * ne - 3.0 * ne * e[i] * e[j]);
      out[i][j] = scale * (lam * ny[j] * e[i] * bp + mu * dij * ne * ap +
                           mu * ny[i] * e[j] * ap + 2.0 * mu * third);
    }
  }
}

void hypersingular_kernel(const material& mat, double t, double d1, double d2,
                          const double nx[2], const double ny[2],
                          hypersingular_parts& out) {
  zero2x2(out.dd);
  zero2x2(out.du);
  zero2x2(out.ud);
  zero2x2(out.uu);
  const double r = std::hypot(d1, d2);
  if (!(r > 0.0) || mat.cp * t <= r) return;
  const double tx[2] = {nx[1], -nx[0]};  // tau = R(-90) n
  const double ty[2] = {ny[1], -ny[0]};
  const potential_jet jet5 = wave_potential_jet(mat, 5, t, r);
  const double gp3 = wave_mode(3, t, r, mat.cp);
  const double gp3p = wave_mode_dr(3, t, r, mat.cp);
  const double gs3p = wave_mode_dr(3, t, r, mat.cs);
  const double gp1 = wave_mode(1, t, r, mat.cp);
  const double gs1 = wave_mode(1, t, r, mat.cs);
  const double cp2 = mat.cp * mat.cp, cs2 = mat.cs * mat.cs;
  const double cs4 = cs2 * cs2;
  const double rho2 = mat.rho * mat.rho;
  const double e[2] = {d1 / r, d2 / r};
  const double hrr = jet5.ddphi, htt = jet5.dphi / r;
  const double scale = 1.0 / (kTwoPi * mat.rho);
  const double cdel = 4.0 * cs2 * rho2 * (cs2 - cp2) / cp2;
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      const double dkj = (k == j) ? 1.0 : 0.0;
      const double hess5 = hrr * e[k] * e[j] + htt * (dkj - e[k] * e[j]);
      out.dd[k][j] = scale * (-4.0 * cs4 * rho2 * hess5 + cdel * dkj * gp3);
      out.du[k][j] = scale * 2.0 * cs2 * rho2 *
                     (-ty[k] * e[j] * gp3p + ty[j] * e[k] * gs3p);
      out.ud[k][j] = scale * 2.0 * cs2 * rho2 *
                     (tx[j] * e[k] * gp3p - tx[k] * e[j] * gs3p);
      out.uu[k][j] =
          -scale * rho2 * (nx[k] * ny[j] * gp1 + tx[k] * ty[j] * gs1);
    }
  }
}

void double_traction_kernel_fd(const material& mat, double t, double d1,
                               double d2, const double nx[2],
                               const double ny[2], double out[2][2]) {
  zero2x2(out);
  const double r = std::hypot(d1, d2);
  if (!(r > 0.0) || mat.cp * t <= r) return;
  const double h = 1e-6 * r;
  const double lam = mat.lambda(), mu = mat.mu();
  // grad[m][i][j] = d/d(d_m) of traction_kernel[i][j] (x-derivative)
  double grad[2][2][2];
  for (int m = 0; m < 2; ++m) {
    double plus[2][2], minus[2][2];
    const double s1 = (m == 0) ? h : 0.0, s2 = (m == 1) ? h : 0.0;
    traction_kernel(mat, 3, t, d1 + s1, d2 + s2, ny, plus);
    traction_kernel(mat, 3, t, d1 - s1, d2 - s2, ny, minus);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        grad[m][i][j] = (plus[i][j] - minus[i][j]) / (2.0 * h);
  }
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      const double div = grad[0][0][j] + grad[1][1][j];
      double sym = 0.0;
      for (int m = 0; m < 2; ++m)
        sym += nx[m] * (grad[m][k][j] + grad[k][m][j]);
      out[k][j] = lam * nx[k] * div + mu * sym;
    }
  }
}

wavefront_flags classify_wavefront(const material& mat, double t, double r,
                                   double rel_tol) {
  wavefront_flags f;
  const double rp = mat.cp * t;
  const double rs = mat.cs * t;
  if (rp <= r) {
    f.before_p = true;
  } else if (rs <= r) {
    f.between = true;
  } else {
    f.after_s = true;
  }
  const double scale = std::max(rp, r);
  f.near_front = std::abs(rp - r) <= rel_tol * scale ||
                 std::abs(rs - r) <= rel_tol * scale;
  return f;
}

void time_integrated_kernel(toeplitz_kind kind, const material& mat,
                            std::size_t lag, double dt, double d1, double d2,
                            const double nx[2], const double ny[2],
                            double out[2][2]) {
  zero2x2(out);
  const double n = static_cast<double>(lag);
  const double times[3] = {(n + 1.0) * dt, n * dt, (n - 1.0) * dt};
  const double coeff[3] = {1.0, -2.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    const double t = times[k];
    if (t <= 0.0) continue;
    double val[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    switch (kind) {
      case toeplitz_kind::single_layer:
        displacement_kernel(mat, 1, t, d1, d2, val);
        break;
      case toeplitz_kind::double_layer:
        traction_kernel(mat, 2, t, d1, d2, ny, val);
        break;
      case toeplitz_kind::adjoint_double_layer: {
        double base[2][2];
        traction_kernel(mat, 2, t, -d1, -d2, nx, base);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) val[i][j] = base[j][i];
        break;
      }
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out[i][j] += coeff[k] * val[i][j];
  }
  double scale = 1.0;
  switch (kind) {
    case toeplitz_kind::single_layer:
      scale = -1.0;
      break;
    case toeplitz_kind::double_layer:
      scale = -1.0 / dt;
      break;
    case toeplitz_kind::adjoint_double_layer:
      scale = 1.0 / dt;
      break;
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] *= scale;
}

void time_integrated_hypersingular(const material& mat, std::size_t lag,
                                   double dt, double d1, double d2,
                                   const double nx[2], const double ny[2],
                                   hypersingular_parts& out) {
  zero2x2(out.dd);
  zero2x2(out.du);
  zero2x2(out.ud);
  zero2x2(out.uu);
  const double n = static_cast<double>(lag);
  const double times[3] = {(n + 1.0) * dt, n * dt, (n - 1.0) * dt};
  const double coeff[3] = {1.0, -2.0, 1.0};
  const double scale = 1.0 / (dt * dt);
  for (int k = 0; k < 3; ++k) {
    const double t = times[k];
    if (t <= 0.0) continue;
    hypersingular_parts val;
    hypersingular_kernel(mat, t, d1, d2, nx, ny, val);
    const double c = coeff[k] * scale;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        out.dd[i][j] += c * val.dd[i][j];
        out.du[i][j] += c * val.du[i][j];
        out.ud[i][j] += c * val.ud[i][j];
        out.uu[i][j] += c * val.uu[i][j];
      }
    }
  }
}

}  // namespace stbem
