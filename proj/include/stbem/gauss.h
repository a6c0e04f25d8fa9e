#pragma once

#include <cstddef>
#include <vector>

namespace stbem {

/**
 * Gauss-Legendre quadrature rule on [0, 1].
 *
 * Nodes are computed by Newton iteration on the Legendre polynomial with
 * Chebyshev initial guesses; rules are cached per order.
 */
struct gauss_rule {
  std::vector<double> x;   //!< nodes in (0, 1)
  std::vector<double> w;   //!< weights, summing to 1
};

/// Returns the cached n-point Gauss-Legendre rule on [0, 1].
const gauss_rule& gauss_legendre(std::size_t n);

/**
 * Composite rule on [0, 1] subdivided at the given interior breakpoints
 * (values outside (0, 1) are ignored), with an n-point rule per cell.
 */
gauss_rule gauss_subdivided(std::size_t n, std::vector<double> breakpoints);

/**
 * Geometrically graded composite rule on [0, 1] concentrating cells toward
 * the endpoint `toward_zero ? 0 : 1`; `levels` cells with ratio `ratio`,
 * n points per cell.  Used for log-singular integrands.
 */
gauss_rule gauss_graded(std::size_t n, std::size_t levels, double ratio,
                        bool toward_zero);

}  // namespace stbem
