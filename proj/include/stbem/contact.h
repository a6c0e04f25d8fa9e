// Outer projection iterations for the frictional contact conditions:
// repeatedly solve the marching system with the current multiplier as a
// boundary force, update the multiplier by a scaled constraint residual
// and project it onto the admissible set of the friction law.
//
// Multiplier layout per step: (normal components of all contact
// elements, then tangential components).  Normal components are
// projected to [0, inf); tangential ones are clamped to a per-element
// threshold: zero (frictionless), a fixed bound (Tresca) or the
// coefficient times the freshly projected normal component (Coulomb).

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stbem/assembly.h"
#include "stbem/mot_solver.h"

namespace stbem {

struct contact_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class friction_law_kind { frictionless, tresca, coulomb };

struct friction_law {
  friction_law_kind kind = friction_law_kind::frictionless;
  // Tresca: tangential threshold per contact element (size 1 values are
  // broadcast).  Coulomb: friction coefficient.
  std::vector<double> value;

  static friction_law none() { return {}; }
  static friction_law tresca(double f) {
    return {friction_law_kind::tresca, {f}};
  }
  static friction_law tresca_per_element(std::vector<double> f) {
    return {friction_law_kind::tresca, std::move(f)};
  }
  static friction_law coulomb(double fc) {
    return {friction_law_kind::coulomb, {fc}};
  }
  double at(std::size_t j) const {
    return value.size() == 1 ? value[0] : value.at(j);
  }
};

struct uzawa_config {
  double rho = 1.0;          // update step
  double eps = 1e-6;         // relative stopping tolerance
  std::size_t max_iters = 500;
  // Coulomb threshold from the previous iterate's normal components
  // instead of the freshly projected ones.
  bool coulomb_previous_iterate = false;
};

struct uzawa_trace_row {
  std::size_t iter = 0;
  double residual = 0.0;        // stopping metric of this iteration
  double correction = 0.0;      // inf-norm change made by the projection
  double penetration = 0.0;     // worst element-integrated violation
};

struct uzawa_result {
  std::vector<Eigen::VectorXd> x;       // system slices per step
  std::vector<Eigen::VectorXd> lambda;  // multiplier slices per step
  std::size_t iters = 0;
  bool converged = false;
  std::vector<uzawa_trace_row> trace;
};

struct uzawa_divergence : contact_error {
  uzawa_divergence(const std::string& msg, std::vector<uzawa_trace_row> t)
      : contact_error(msg), trace(std::move(t)) {}
  std::vector<uzawa_trace_row> trace;
};

// Scalar normal gap at a boundary point with outward unit normal
// (nx, ny): the admissible displacements satisfy  -u.n >= gap.
using gap_function =
    std::function<double(double x, double y, double nx, double ny, double t)>;

// Unit outward normal at a mesh node: normalized average of the normals
// of the adjacent elements, restricted to participating contact
// elements when a mask (indexed by multiplier element, i.e. aligned
// with bases.lambda_elem) is given.  Zero vector when no adjacent
// element participates.
point2 node_normal(const boundary_mesh& mesh, const space_bases& bases,
                   std::size_t node,
                   const std::vector<bool>* lambda_mask = nullptr);

// Gap interpolant as increment coefficients in the displacement layout
// (u dofs, or utilde dofs when utilde_space): at every participating
// contact node the vector -g(node, t) * node_normal carries the scalar
// gap in the normal slot and zero tangentially; summing the increments
// up to step l reproduces the nodal values at t_{l+1}.  All other slots
// are zero.
std::vector<Eigen::VectorXd> interpolate_gap(
    const boundary_mesh& mesh, const space_bases& bases,
    const time_grid& grid, const gap_function& gap,
    bool utilde_space = false,
    const std::vector<bool>* lambda_mask = nullptr);

// Componentwise projection of one multiplier slice: normal components
// to max(., 0), tangential ones clamped to thresholds (>= 0 each).
void project_multiplier(Eigen::VectorXd& slice, std::size_t m_lambda,
                        const std::vector<double>& thresholds);

// Thresholds for the tangential clamp given the (already projected)
// normal components of the same slice.
std::vector<double> tangential_thresholds(const friction_law& law,
                                          const Eigen::VectorXd& slice,
                                          std::size_t m_lambda);

// Runs the projection iterations on a built system.  rhs are the load
// slices without multiplier contribution; gap holds the increment
// coefficients matching the constrained displacement space (u for the
// one-body system, utilde for the two-body one).  Throws
// uzawa_divergence with the residual trace when max_iters is exceeded.
uzawa_result uzawa_solve(const block_system& system,
                         const mot_solver& solver,
                         const std::vector<Eigen::VectorXd>& rhs,
                         const std::vector<Eigen::VectorXd>& gap,
                         const friction_law& law, const uzawa_config& cfg,
                         const std::vector<bool>* lambda_mask = nullptr);

// Complementarity and feasibility measures of a converged pair, all
// signed so that values <= tolerance mean the property holds.
struct kkt_report {
  double tol_c = 0.0;
  double min_normal_multiplier = 0.0;   // expected >= -1e-12
  double max_tangential_excess = 0.0;   // |tangential| - threshold, <= 1e-10
  double max_penetration = 0.0;         // nodal g - u_perp, <= tol_c
  double worst_complementarity = 0.0;   // sum_j |L_perp_j * mean_gap_j|
                                        // over |Lambda|_1, <= tol_c
  double max_stick_violation = 0.0;     // tangential speed where strictly
                                        // below the threshold, <= tol_c
};

kkt_report check_kkt(const boundary_mesh& mesh, const space_bases& bases,
                     const time_grid& grid, const block_system& system,
                     const uzawa_result& result,
                     const std::vector<Eigen::VectorXd>& gap,
                     const friction_law& law, double eps,
                     const std::vector<bool>* lambda_mask = nullptr);

}  // namespace stbem
