// Uniform time grid, the two temporal basis families of the energetic
// scheme, and the spatial approximation spaces:
//   psi    traction density: piecewise linear, discontinuous across
//          elements (optionally piecewise constant);
//   u      displacement trace: continuous piecewise linear, vanishing
//          on the closure of the Dirichlet part;
//   lambda contact multiplier: piecewise constant per contact element,
//          resolved into (normal, tangential) scalar components;
//   utilde relative displacement on the contact part (two-body case):
//          continuous piecewise linear, vanishing at the boundary of an
//          open contact part (hats of interior contact nodes).
// Vector coefficient layout is component-major: all x coefficients of a
// field, then all y coefficients (for lambda: all normal, then all
// tangential).

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "stbem/mesh.h"

namespace stbem {

struct time_grid {
  double horizon = 0.0;   // final time T
  std::size_t steps = 0;  // number of uniform steps N
  double dt = 0.0;

  time_grid() = default;
  time_grid(double T, std::size_t N);

  double node(std::size_t l) const { return static_cast<double>(l) * dt; }
};

// Indicator of [t_l, t_{l+1}); the left endpoint is included (the
// Heaviside convention H[0] = 1).
double basis_v(const time_grid& grid, std::size_t l, double t);

// Ramp: 0 before t_l, linear to 1 at t_{l+1}, constant 1 afterward.
// Its time derivative is basis_v / dt.
double basis_r(const time_grid& grid, std::size_t l, double t);

constexpr std::size_t kNoDof = std::numeric_limits<std::size_t>::max();

struct space_bases {
  bool psi_linear = true;

  // Scalar counts per component.
  std::size_t m_psi = 0;
  std::size_t m_u = 0;
  std::size_t m_lambda = 0;
  std::size_t m_utilde = 0;

  std::vector<std::size_t> u_dof_of_node;   // kNoDof when excluded
  std::vector<std::size_t> u_node_of_dof;
  std::vector<std::size_t> lambda_elem;             // dof -> element index
  std::vector<std::size_t> lambda_dof_of_elem;      // kNoDof off contact
  std::vector<std::size_t> utilde_dof_of_node;      // kNoDof when excluded
  std::vector<std::size_t> utilde_node_of_dof;

  // Per-element scalar shape function count for the psi space.
  std::size_t psi_shapes_per_element() const { return psi_linear ? 2 : 1; }
};

space_bases build_space_bases(const boundary_mesh& mesh,
                              bool psi_linear = true);

// A scalar shape function restricted to one element, linear in the
// travel parameter s in [0,1] from node_a to node_b:
//   value(s) = val_a + (val_b - val_a) * s.
// dtau is the arc-length derivative taken along the element's stored
// tangent (which is minus the travel direction for interior bodies).
struct local_shape {
  std::size_t dof = kNoDof;
  double val_a = 0.0;
  double val_b = 0.0;
  double dtau = 0.0;
};

// Shape functions of the psi space supported on element e (1 or 2).
void psi_local_shapes(const space_bases& bases, const boundary_mesh& mesh,
                      std::size_t e, std::vector<local_shape>& out);

// Hat functions of the u space alive on element e (0, 1 or 2 entries;
// Dirichlet-excluded nodes are skipped).
void u_local_shapes(const space_bases& bases, const boundary_mesh& mesh,
                    std::size_t e, std::vector<local_shape>& out);

// Hat restrictions of the utilde space alive on contact element e.
void utilde_local_shapes(const space_bases& bases, const boundary_mesh& mesh,
                         std::size_t e, std::vector<local_shape>& out);

bool is_contact_part(boundary_part part);

}  // namespace stbem
