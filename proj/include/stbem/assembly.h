// Galerkin assembly of the energetic space-time boundary element system.
//
// The retarded single-layer, double-layer and (integrated-by-parts)
// double-traction operators paired with the indicator / ramp time bases
// collapse to block-Toeplitz families in the lag index; this module
// assembles those spatial blocks, the coupling masses, the load moments,
// and composes them into the marching system of either formulation for
// the one-body (rigid obstacle) and two-body (interface) problems.
//
// Coefficient layout is component-major per field; a space-time slice of
// the one-body system is (psi_x, psi_y, u_x, u_y) and of the two-body
// system (psi1, u, psi2, utilde) with the same component-major rule
// inside each field.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stbem/kernels.h"
#include "stbem/mesh.h"
#include "stbem/quadrature.h"
#include "stbem/spaces.h"

namespace stbem {

struct assembly_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct assembly_config {
  quadrature_config quad{};
  // 0 uses all available threads; any positive value is honoured
  // exactly.  Results are bitwise independent of the thread count.
  int threads = 0;
  // Assemble for the complementary body: element normals (and with them
  // the stored tangents) are reversed.
  bool flip_normal = false;
};

// Toeplitz families of the pure operator pairings (no jump or coupling
// masses):
//   V[n]  traction-type test x traction-type trial   (2 m_psi)^2
//   K[n]  traction-type test x displacement trial    (2 m_psi) x (2 m_u)
//   W[n]  displacement test  x displacement trial    (2 m_u)^2
struct operator_blocks {
  std::size_t steps = 0;
  std::size_t m_psi = 0;
  std::size_t m_u = 0;
  std::vector<Eigen::MatrixXd> V, K, W;
};

operator_blocks assemble_operator_blocks(const boundary_mesh& mesh,
                                         const space_bases& bases,
                                         const material& mat,
                                         const time_grid& grid,
                                         const assembly_config& cfg = {});

// Serial reference implementation: evaluates the time-integrated
// kernels per lag directly instead of staging all time nodes per pair.
// Slower, kept as an independent cross-check and benchmark baseline.
operator_blocks assemble_operator_blocks_reference(
    const boundary_mesh& mesh, const space_bases& bases, const material& mat,
    const time_grid& grid, const assembly_config& cfg = {});

// <psi-basis, u-basis> L2 pairing on the boundary, exact closed form.
Eigen::MatrixXd assemble_mass_psi_u(const boundary_mesh& mesh,
                                    const space_bases& bases);

// Contact pairing rows: for each multiplier element e, row (e, normal)
// integrates -n . (vector hat) over e and row (m_lambda + e, tangential)
// integrates tau . (vector hat).  Columns are u dofs, or utilde dofs
// when utilde_columns is set.  This matrix is both the spatial part of
// the constraint map and (transposed) the multiplier force coupling.
Eigen::MatrixXd assemble_contact_pairing(const boundary_mesh& mesh,
                                         const space_bases& bases,
                                         bool utilde_columns);

// Surface traction density evaluated at a point of a given element
// (the element index lets piecewise definitions avoid geometric
// point-membership tests).
using load_function = std::function<void(
    std::size_t element, double x, double y, double t, double out[2])>;

// Moments of the surface load against displacement hats in space and
// derivative-of-ramp bases in time: one vector of size 2 m_u per step,
// entry (c, a) = int_Gamma hat_a f_c averaged over the step interval.
std::vector<Eigen::VectorXd> assemble_load_moments(
    const boundary_mesh& mesh, const space_bases& bases,
    const time_grid& grid, const load_function& f,
    std::size_t space_order = 8, std::size_t time_order = 8);

enum class formulation_kind { symmetric, nonsymmetric };

// Marching system S[0] X_l = F_l + coupling * Lambda_l - sum_{j>=1}
// S[j] X_{l-j}.  mtilde maps a displacement-type slice (u for one body,
// utilde for two bodies) to multiplier space; coupling scatters a
// multiplier slice into the right-hand side.
struct block_system {
  formulation_kind formulation = formulation_kind::nonsymmetric;
  bool bilateral = false;
  std::size_t steps = 0;
  std::size_t dim = 0;
  std::size_t m_psi = 0, m_u = 0, m_lambda = 0, m_utilde = 0;
  std::size_t psi1_offset = 0, u_offset = 0, psi2_offset = 0,
              utilde_offset = 0;
  std::vector<Eigen::MatrixXd> S;
  Eigen::MatrixXd coupling;     // dim x (2 m_lambda)
  Eigen::MatrixXd mtilde;       // (2 m_lambda) x (2 m_u or 2 m_utilde)
  Eigen::MatrixXd mass_psi_u;   // (2 m_psi) x (2 m_u)
  Eigen::MatrixXd extension;    // (2 m_u) x (2 m_utilde), two-body only
};

block_system build_unilateral_system(const boundary_mesh& mesh,
                                     const space_bases& bases,
                                     const material& mat,
                                     const time_grid& grid,
                                     formulation_kind formulation,
                                     const assembly_config& cfg = {});

// Two-body problem on a shared interface mesh: body 1 uses the mesh
// normals, body 2 the reversed ones.  Unknowns are the two traction
// densities, the body-1 trace u and the relative trace utilde.
block_system build_bilateral_system(const boundary_mesh& mesh,
                                    const space_bases& bases,
                                    const material& mat1,
                                    const material& mat2,
                                    const time_grid& grid,
                                    formulation_kind formulation,
                                    const assembly_config& cfg = {});

// Maps per-step load moments (size 2 m_u) into system right-hand sides:
// the trace-test rows receive +moments, the relative-trace rows of the
// two-body system receive -extension^T * moments.
std::vector<Eigen::VectorXd> compose_rhs(
    const block_system& system,
    const std::vector<Eigen::VectorXd>& moments_u);

}  // namespace stbem
