#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace stbem {

/**
 * Homogeneous isotropic elastic material, parametrized by the two wave
 * speeds and the mass density.  The Lame constants follow from
 * lambda = rho (cp^2 - 2 cs^2), mu = rho cs^2.
 */
struct material {
  double cp = 0.0;    //!< pressure wave speed
  double cs = 0.0;    //!< shear wave speed
  double rho = 0.0;   //!< mass density

  material() = default;

  material(double cp_, double cs_, double rho_) : cp(cp_), cs(cs_), rho(rho_) {
    validate();
  }

  void validate() const {
    if (!(rho > 0.0)) {
      throw std::invalid_argument("material: density must be positive, got "
                                  + std::to_string(rho));
    }
    if (!(cs > 0.0) || !(cp > cs)) {
      throw std::invalid_argument(
          "material: wave speeds must satisfy cp > cs > 0, got cp = "
          + std::to_string(cp) + ", cs = " + std::to_string(cs));
    }
  }

  double lambda() const { return rho * (cp * cp - 2.0 * cs * cs); }

  double mu() const { return rho * cs * cs; }

  /// Young's modulus (plane strain relations), occasionally useful in setups.
  double young() const {
    const double l = lambda(), m = mu();
    return m * (3.0 * l + 2.0 * m) / (l + m);
  }

  double poisson() const {
    const double l = lambda(), m = mu();
    return 0.5 * l / (l + m);
  }

  /// Construct from Young's modulus, Poisson ratio and density (plane strain).
  static material from_young_poisson(double e, double nu, double rho_) {
    if (!(rho_ > 0.0) || !(e > 0.0) || !(nu > -1.0) || !(nu >= 0.0)
        || !(nu < 0.5)) {
      throw std::invalid_argument("material: need E > 0, 0 <= nu < 0.5, "
                                  "rho > 0");
    }
    const double l = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double m = 0.5 * e / (1.0 + nu);
    return material(std::sqrt((l + 2.0 * m) / rho_), std::sqrt(m / rho_),
                    rho_);
  }
};

}  // namespace stbem
