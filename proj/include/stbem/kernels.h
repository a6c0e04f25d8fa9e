#pragma once

#include "stbem/material.h"

namespace stbem {

/**
 * Radial jet of the mode-difference potential  phi_m(r) = gP[m] - gS[m]
 * at fixed time, where gP/gS are the wave modes at the two speeds.
 *
 * The difference cancels the leading log/pole behaviour of the individual
 * modes; evaluating it naively near r = 0 loses most significant digits, so
 * value and first derivative switch to an exactly regrouped closed form
 * away from the slow front and the higher derivatives are recovered from
 * the radial wave equation
 *   phi'' = -phi'/r + (gP[m-2]/cp^2 - gS[m-2]/cs^2).
 */
struct potential_jet {
  double phi = 0.0;     //!< phi_m(r)
  double dphi = 0.0;    //!< d/dr phi_m
  double ddphi = 0.0;   //!< d^2/dr^2 phi_m
  double dddphi = 0.0;  //!< d^3/dr^3 phi_m
};

/// Jet of phi_m for m in {2, 3, 4, 5}; causal zero when cp t <= r.
potential_jet wave_potential_jet(const material& mat, int m, double t,
                                 double r);

/**
 * Displacement kernel (level-m antiderivative family of the elastodynamic
 * fundamental solution):
 *   G_kj = (1/2 pi rho) [ delta_kj gS[m]/cs^2 + Hess_kj(phi_{m+2}) ].
 * Level 1 is the kernel of the single-layer blocks in the energetic scheme.
 */
void displacement_kernel(const material& mat, int m, double t, double d1,
                         double d2, double out[2][2]);

/**
 * Single-traction kernel: traction operator applied at the trial point y
 * with outward normal ny to the second index of the displacement kernel
 * (the derivative with respect to y is the negative difference derivative).
 * Level 2 is the kernel of the double-layer blocks.
 */
void traction_kernel(const material& mat, int m, double t, double d1,
                     double d2, const double ny[2], double out[2][2]);

/**
 * Integrated-by-parts representation of the double-traction (hypersingular)
 * kernel at base level 3.  The raw kernel decomposes pointwise as
 *   W_kj = ds ds'[dd_kj] + ds[du_kj] + ds'[ud_kj] + uu_kj
 * with ds, ds' the arc-length derivatives along the elements at x resp. y
 * taken in the direction of tau = R(-90) n.  The Galerkin bilinear form of
 * W therefore reads, with v' = dv/ds and u' = du/ds':
 *   <W u, v> = int int ( v'_k dd_kj u'_j - v'_k du_kj u_j
 *                        - v_k ud_kj u'_j + v_k uu_kj u_j ).
 * All four kernels are at worst log-singular on the diagonal.
 */
struct hypersingular_parts {
  double dd[2][2];
  double du[2][2];
  double ud[2][2];
  double uu[2][2];
};

void hypersingular_kernel(const material& mat, double t, double d1, double d2,
                          const double nx[2], const double ny[2],
                          hypersingular_parts& out);

/**
 * Raw double-traction kernel (traction at x applied to the first index of
 * the single-traction kernel), evaluated by central finite differences of
 * the analytic traction kernel.  1/r^2-singular; only used by tests as an
 * independent cross-check of the integrated-by-parts representation.
 */
void double_traction_kernel_fd(const material& mat, double t, double d1,
                               double d2, const double nx[2],
                               const double ny[2], double out[2][2]);

/// Position of a space-time point relative to the two wavefronts.
struct wavefront_flags {
  bool before_p = false;  //!< cp t <= r: causal zero
  bool between = false;   //!< cs t <= r < cp t: only the fast front arrived
  bool after_s = false;   //!< r < cs t: both fronts arrived
  bool near_front = false;  //!< within rel_tol of either front
};

wavefront_flags classify_wavefront(const material& mat, double t, double r,
                                   double rel_tol = 1e-9);

enum class toeplitz_kind { single_layer, double_layer, adjoint_double_layer };

/**
 * Time-integrated Galerkin kernels of the marching scheme.  With the
 * second difference in the lag index,
 *   D2[F](n) = F((n+1) dt) - 2 F(n dt) + F((n-1) dt),   F(t <= 0) = 0,
 * the exact pairing of a time-convolution kernel against the indicator /
 * derivative-of-ramp bases reduces to
 *   single layer          -D2[G at level 1](n)
 *   double layer          -(1/dt) D2[T_y G at level 2](n)
 *   adjoint double layer  +(1/dt) D2[(T_y G)(t, -d, nx)^T at level 2](n).
 * nx is used only by the adjoint kind, ny only by the double layer.
 */
void time_integrated_kernel(toeplitz_kind kind, const material& mat,
                            std::size_t lag, double dt, double d1, double d2,
                            const double nx[2], const double ny[2],
                            double out[2][2]);

/**
 * Same second-difference rule for the integrated-by-parts hypersingular
 * parts: +(1/dt^2) D2[base-level parts](n).  The Galerkin form of the
 * time-integrated double-traction operator uses these with the same
 * derivative/value pattern as hypersingular_kernel.
 */
void time_integrated_hypersingular(const material& mat, std::size_t lag,
                                   double dt, double d1, double d2,
                                   const double nx[2], const double ny[2],
                                   hypersingular_parts& out);

}  // namespace stbem
