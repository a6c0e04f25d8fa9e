#include "stbem/wave_modes.h"

#include <cmath>
#include <stdexcept>

namespace stbem {

namespace {

inline double acosh_pos(double x) { return std::log(x + std::sqrt(x * x - 1.0)); }

}  // namespace

double wave_mode(int m, double t, double r, double c) {
  const double ct = c * t;
  if (!(ct > r) || !(r > 0.0)) {
    return 0.0;
  }
  const double q = std::sqrt(ct * ct - r * r);
  const double ach = acosh_pos(ct / r);
  const double c2 = c * c;
  switch (m) {
    case 0:
      return c / q;
    case 1:
      return ach;
    case 2:
      return t * ach - q / c;
    case 3:
      return (0.5 * t * t + 0.25 * r * r / c2) * ach - 0.75 * t * q / c;
    case 4: {
      const double q3 = q * q * q;
      return (t * t * t / 6.0 + 0.25 * r * r * t / c2) * ach
             - (11.0 / 36.0) * q3 / (c2 * c) - (5.0 / 12.0) * r * r * q / (c2 * c);
    }
    case 5: {
      const double q3 = q * q * q;
      const double r2 = r * r;
      return (t * t * t * t / 24.0 + 0.125 * r2 * t * t / c2
              + r2 * r2 / (64.0 * c2 * c2)) * ach
             - (25.0 / 288.0) * t * q3 / (c2 * c)
             - (35.0 / 192.0) * r2 * t * q / (c2 * c);
    }
    default:
      throw std::invalid_argument("wave_mode: level out of range");
  }
}

double wave_mode_dr(int m, double t, double r, double c) {
  const double ct = c * t;
  if (!(ct > r) || !(r > 0.0)) {
    return 0.0;
  }
  if (m == 0) {
    const double q = std::sqrt(ct * ct - r * r);
    return c * r / (q * q * q);
  }
  return (static_cast<double>(m - 1) * wave_mode(m, t, r, c)
          - t * wave_mode(m - 1, t, r, c)) / r;
}

mode_jet wave_mode_jet(int m, double t, double r, double c) {
  mode_jet jet;
  const double ct = c * t;
  if (!(ct > r) || !(r > 0.0)) {
    return jet;
  }
  jet.g0 = wave_mode(m, t, r, c);
  jet.g1 = wave_mode_dr(m, t, r, c);
  if (m >= 2) {
    jet.g2 = -jet.g1 / r + wave_mode(m - 2, t, r, c) / (c * c);
  } else {
    const double q = std::sqrt(ct * ct - r * r);
    const double q3 = q * q * q;
    if (m == 0) {
      jet.g2 = c / q3 + 3.0 * c * r * r / (q3 * q * q);
    } else {
      jet.g2 = ct / (r * r * q) - ct / q3;
    }
  }
  return jet;
}

}  // namespace stbem
