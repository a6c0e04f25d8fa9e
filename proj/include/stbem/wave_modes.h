#pragma once

namespace stbem {

/**
 * Time-antiderivative family of the 2D wave kernel for speed c.
 *
 * Level 0 is the fundamental causal kernel c / sqrt(c^2 t^2 - r^2) (up to
 * the 1/2pi scaling applied by the boundary kernels); level m is its m-fold
 * antiderivative in t with value 0 at t = r/c.  All levels vanish for
 * c t <= r (causality).  Closed forms use q = sqrt(c^2 t^2 - r^2) and
 * arccosh(c t / r).
 */
double wave_mode(int m, double t, double r, double c);

/**
 * Radial derivative d/dr of wave_mode.  Uses the Euler relation for the
 * homogeneous family (g[m] is homogeneous of degree m-1 in (t, r)):
 * d/dr g[m] = ((m-1) g[m] - t g[m-1]) / r.
 */
double wave_mode_dr(int m, double t, double r, double c);

/**
 * Values and first two radial derivatives of one level, sharing the
 * intermediate quantities; g2 is obtained from the radial wave equation
 * g'' = -g'/r + g[m-2]/c^2.
 */
struct mode_jet {
  double g0 = 0.0;   //!< g[m](t, r)
  double g1 = 0.0;   //!< d/dr g[m]
  double g2 = 0.0;   //!< d^2/dr^2 g[m]
};

mode_jet wave_mode_jet(int m, double t, double r, double c);

}  // namespace stbem
