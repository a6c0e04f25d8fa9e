// Derived quantities of a finished run: boundary energy over time,
// pointwise displacement traces, deformation snapshots, convergence
// tables, and the CSV/SVG writers the command line tool emits.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "stbem/assembly.h"
#include "stbem/contact.h"
#include "stbem/mesh.h"
#include "stbem/spaces.h"

namespace stbem {

struct diagnostics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Traction slices (2 m_psi per step) and displacement-increment slices
// (2 m_u per step) cut out of full system solutions.
std::vector<Eigen::VectorXd> traction_slices(const block_system& system,
                                             const std::vector<Eigen::VectorXd>& x);
std::vector<Eigen::VectorXd> displacement_increments(
    const block_system& system, const std::vector<Eigen::VectorXd>& x);

// Running sums of the increments: entry l holds the displacement at
// time node l+1.
std::vector<Eigen::VectorXd> accumulate_increments(
    const std::vector<Eigen::VectorXd>& increments);

// Cumulative work of the boundary tractions against the velocity,
// E[m] = int_0^{t_m} int_Gamma psi . du/dt, evaluated exactly in the
// piecewise-constant / piecewise-linear time bases.  E[0] = 0; for a
// two-body system both boundary terms are summed.
std::vector<double> energy_history(const block_system& system,
                                   const std::vector<Eigen::VectorXd>& x);

// Step-summed relative difference between two displacement histories
// on the same discretization: sum_l |a_l - b_l| / sum_l |a_l| in the
// Euclidean norm.  The first history is the reference.
double relative_history_difference(const std::vector<Eigen::VectorXd>& a,
                                   const std::vector<Eigen::VectorXd>& b);

// ---------------------------------------------------------------------------
// Convergence sweeps
// ---------------------------------------------------------------------------

struct sweep_level {
  double h = 0.0;      // mesh width
  double dt = 0.0;     // time step
  double energy = 0.0; // E(T) of this level
};

struct sweep_row {
  double h = 0.0, dt = 0.0;
  double err2 = 0.0;   // squared relative energy error vs the finest level
};

struct sweep_result {
  std::vector<sweep_row> rows;  // coarse to fine, finest level excluded
  double slope = 0.0;           // least-squares slope of log err2 vs log h
  bool monotone = true;         // err2 decreasing towards finer grids
};

// Levels ordered coarse to fine; the finest entry is the reference.
// Needs at least 3 levels (2 fit points).
sweep_result convergence_table(const std::vector<sweep_level>& levels);

// ---------------------------------------------------------------------------
// Pointwise traces and snapshots
// ---------------------------------------------------------------------------

// Displacement at a fixed boundary point for every time node; row 0 is
// the zero initial state, row m the value at t_m.  cumulative holds
// accumulate_increments of the nodal history.  Throws when the point
// lies on no boundary element.
std::vector<std::array<double, 2>> trace_at_point(
    const boundary_mesh& mesh, const space_bases& bases,
    const std::vector<Eigen::VectorXd>& cumulative, point2 p);

// Node positions displaced by magnification * u(t_step).
std::vector<point2> deformation_snapshot(
    const boundary_mesh& mesh, const space_bases& bases,
    const Eigen::VectorXd& cumulative_at_step, double magnification);

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

void write_energy_csv(std::ostream& out, const time_grid& grid,
                      const std::vector<double>& energy);

void write_trace_csv(std::ostream& out, const time_grid& grid,
                     const std::vector<std::array<double, 2>>& trace);

void write_sweep_csv(std::ostream& out, const sweep_result& sweep);

// One row per (time node, multiplier element): normal and tangential
// multiplier components with the element midpoint.
void write_multiplier_csv(std::ostream& out, const boundary_mesh& mesh,
                          const space_bases& bases, const time_grid& grid,
                          const std::vector<Eigen::VectorXd>& lambda);

void write_uzawa_trace_csv(std::ostream& out,
                           const std::vector<uzawa_trace_row>& trace);

// Closed outline of the displaced boundary; when obstacle_height is
// finite a horizontal obstacle line is drawn as well.
void write_snapshot_svg(std::ostream& out, const boundary_mesh& mesh,
                        const std::vector<point2>& displaced,
                        double obstacle_height);

}  // namespace stbem
