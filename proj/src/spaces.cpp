#include "stbem/spaces.h"

#include <cmath>
#include <stdexcept>

namespace stbem {

time_grid::time_grid(double T, std::size_t N) : horizon(T), steps(N) {
  if (!(T > 0.0) || N < 1) {
    throw std::invalid_argument("time grid needs T > 0 and N >= 1");
  }
  dt = T / static_cast<double>(N);
}

double basis_v(const time_grid& grid, std::size_t l, double t) {
  const double a = grid.node(l);
  const double b = grid.node(l + 1);
  return (t >= a && t < b) ? 1.0 : 0.0;
}

double basis_r(const time_grid& grid, std::size_t l, double t) {
  const double a = grid.node(l);
  if (t <= a) return 0.0;
  const double s = (t - a) / grid.dt;
  return s < 1.0 ? s : 1.0;
}

bool is_contact_part(boundary_part part) {
  return part == boundary_part::contact_unilateral ||
         part == boundary_part::contact_bilateral;
}

space_bases build_space_bases(const boundary_mesh& mesh, bool psi_linear) {
  space_bases bases;
  bases.psi_linear = psi_linear;
  const std::size_t ne = mesh.n_elements();
  const std::size_t nn = mesh.n_nodes();

  bases.m_psi = psi_linear ? 2 * ne : ne;

  // Nodes touching a Dirichlet element carry no displacement dof
  // (the trace space vanishes on the closure of the Dirichlet part).
  std::vector<bool> touches_dirichlet(nn, false);
  std::vector<bool> touches_contact(nn, false);
  std::vector<bool> touches_noncontact(nn, false);
  for (std::size_t e = 0; e < ne; ++e) {
    for (const std::size_t node : mesh.elements[e]) {
      if (mesh.part[e] == boundary_part::dirichlet) {
        touches_dirichlet[node] = true;
      }
      if (is_contact_part(mesh.part[e])) {
        touches_contact[node] = true;
      } else {
        touches_noncontact[node] = true;
      }
    }
  }

  bases.u_dof_of_node.assign(nn, kNoDof);
  for (std::size_t node = 0; node < nn; ++node) {
    if (!touches_dirichlet[node]) {
      bases.u_dof_of_node[node] = bases.u_node_of_dof.size();
      bases.u_node_of_dof.push_back(node);
    }
  }
  bases.m_u = bases.u_node_of_dof.size();

  bases.lambda_dof_of_elem.assign(ne, kNoDof);
  for (std::size_t e = 0; e < ne; ++e) {
    if (is_contact_part(mesh.part[e])) {
      bases.lambda_dof_of_elem[e] = bases.lambda_elem.size();
      bases.lambda_elem.push_back(e);
    }
  }
  bases.m_lambda = bases.lambda_elem.size();

  // The relative-displacement trace is supported on the contact part and
  // continuous on the whole interface, where it vanishes off the contact
  // part; nodes on the boundary of an open contact part therefore carry
  // no dof.  Its hats are then full interface hats, so extending a
  // coefficient vector by zero into the displacement space is exact.
  bases.utilde_dof_of_node.assign(nn, kNoDof);
  for (std::size_t node = 0; node < nn; ++node) {
    if (touches_contact[node] && !touches_noncontact[node] &&
        !touches_dirichlet[node]) {
      bases.utilde_dof_of_node[node] = bases.utilde_node_of_dof.size();
      bases.utilde_node_of_dof.push_back(node);
    }
  }
  bases.m_utilde = bases.utilde_node_of_dof.size();

  return bases;
}

namespace {

// Arc-length derivative along the stored tangent of a shape that is
// linear in the travel parameter.  The travel-direction derivative is
// (val_b - val_a) / h; the stored tangent is the travel direction
// rotated by 180 degrees exactly when tangent . travel < 0.
double tangent_derivative(const boundary_mesh& mesh, std::size_t e,
                          double val_a, double val_b) {
  const point2 a = mesh.node_a(e);
  const point2 b = mesh.node_b(e);
  const double h = mesh.length[e];
  const double tx = (b[0] - a[0]) / h;
  const double ty = (b[1] - a[1]) / h;
  const double along =
      mesh.tangent[e][0] * tx + mesh.tangent[e][1] * ty;  // +1 or -1
  return along * (val_b - val_a) / h;
}

}  // namespace

void psi_local_shapes(const space_bases& bases, const boundary_mesh& mesh,
                      std::size_t e, std::vector<local_shape>& out) {
  out.clear();
  if (bases.psi_linear) {
    out.push_back({2 * e, 1.0, 0.0, tangent_derivative(mesh, e, 1.0, 0.0)});
    out.push_back({2 * e + 1, 0.0, 1.0,
                   tangent_derivative(mesh, e, 0.0, 1.0)});
  } else {
    out.push_back({e, 1.0, 1.0, 0.0});
  }
}

void u_local_shapes(const space_bases& bases, const boundary_mesh& mesh,
                    std::size_t e, std::vector<local_shape>& out) {
  out.clear();
  const std::size_t node_a = mesh.elements[e][0];
  const std::size_t node_b = mesh.elements[e][1];
  if (bases.u_dof_of_node[node_a] != kNoDof) {
    out.push_back({bases.u_dof_of_node[node_a], 1.0, 0.0,
                   tangent_derivative(mesh, e, 1.0, 0.0)});
  }
  if (bases.u_dof_of_node[node_b] != kNoDof) {
    out.push_back({bases.u_dof_of_node[node_b], 0.0, 1.0,
                   tangent_derivative(mesh, e, 0.0, 1.0)});
  }
}

void utilde_local_shapes(const space_bases& bases, const boundary_mesh& mesh,
                         std::size_t e, std::vector<local_shape>& out) {
  out.clear();
  const std::size_t node_a = mesh.elements[e][0];
  const std::size_t node_b = mesh.elements[e][1];
  if (bases.utilde_dof_of_node[node_a] != kNoDof) {
    out.push_back({bases.utilde_dof_of_node[node_a], 1.0, 0.0,
                   tangent_derivative(mesh, e, 1.0, 0.0)});
  }
  if (bases.utilde_dof_of_node[node_b] != kNoDof) {
    out.push_back({bases.utilde_dof_of_node[node_b], 0.0, 1.0,
                   tangent_derivative(mesh, e, 0.0, 1.0)});
  }
}

}  // namespace stbem
