#include "stbem/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace stbem {

std::vector<Eigen::VectorXd> traction_slices(
    const block_system& system, const std::vector<Eigen::VectorXd>& x) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(x.size());
  for (const Eigen::VectorXd& slice : x) {
    out.push_back(slice.segment(system.psi1_offset, 2 * system.m_psi));
  }
  return out;
}

std::vector<Eigen::VectorXd> displacement_increments(
    const block_system& system, const std::vector<Eigen::VectorXd>& x) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(x.size());
  for (const Eigen::VectorXd& slice : x) {
    out.push_back(slice.segment(system.u_offset, 2 * system.m_u));
  }
  return out;
}

std::vector<Eigen::VectorXd> accumulate_increments(
    const std::vector<Eigen::VectorXd>& increments) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(increments.size());
  Eigen::VectorXd run;
  for (const Eigen::VectorXd& inc : increments) {
    if (run.size() == 0) run = Eigen::VectorXd::Zero(inc.size());
    run += inc;
    out.push_back(run);
  }
  return out;
}

std::vector<double> energy_history(const block_system& system,
                                   const std::vector<Eigen::VectorXd>& x) {
  std::vector<double> energy(x.size() + 1, 0.0);
  double e = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    const Eigen::VectorXd psi =
        x[l].segment(system.psi1_offset, 2 * system.m_psi);
    const Eigen::VectorXd u = x[l].segment(system.u_offset, 2 * system.m_u);
    e += psi.dot(system.mass_psi_u * u);
    if (system.bilateral) {
      const Eigen::VectorXd psi2 =
          x[l].segment(system.psi2_offset, 2 * system.m_psi);
      const Eigen::VectorXd ut =
          x[l].segment(system.utilde_offset, 2 * system.m_utilde);
      const Eigen::VectorXd u2 = u - system.extension * ut;
      e += psi2.dot(system.mass_psi_u * u2);
    }
    energy[l + 1] = e;
  }
  return energy;
}

double relative_history_difference(const std::vector<Eigen::VectorXd>& a,
                                   const std::vector<Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw diagnostics_error(
        "relative_history_difference: histories differ in length");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (a[l].size() != b[l].size()) {
      throw diagnostics_error(
          "relative_history_difference: slice sizes differ");
    }
    num += (a[l] - b[l]).norm();
    den += a[l].norm();
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

sweep_result convergence_table(const std::vector<sweep_level>& levels) {
  if (levels.size() < 3) {
    throw diagnostics_error(
        "convergence_table: need at least 3 levels (2 error points plus "
        "the reference)");
  }
  const double e_ref = levels.back().energy;
  if (e_ref == 0.0) {
    throw diagnostics_error(
        "convergence_table: reference energy is zero; relative errors "
        "are undefined");
  }
  sweep_result result;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double rel = (levels[i].energy - e_ref) / e_ref;
    result.rows.push_back({levels[i].h, levels[i].dt, rel * rel});
  }
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
    if (result.rows[i].err2 < result.rows[i + 1].err2) {
      result.monotone = false;
    }
  }
  // Least-squares slope of log(err2) against log(h).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const sweep_row& row : result.rows) {
    if (row.err2 <= 0.0) continue;  // exact by luck; no information
    const double lx = std::log(row.h), ly = std::log(row.err2);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) {
    throw diagnostics_error(
        "convergence_table: fewer than 2 nonzero error points");
  }
  const double denom = n * sxx - sx * sx;
  result.slope = (n * sxy - sx * sy) / denom;
  return result;
}

std::vector<std::array<double, 2>> trace_at_point(
    const boundary_mesh& mesh, const space_bases& bases,
    const std::vector<Eigen::VectorXd>& cumulative, point2 p) {
  // Locate the element carrying the point.
  std::size_t elem = mesh.n_elements();
  double s_loc = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const point2 a = mesh.node_a(e), b = mesh.node_b(e);
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double s = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2;
    s = std::clamp(s, 0.0, 1.0);
    const double ex = a[0] + s * dx - p[0];
    const double ey = a[1] + s * dy - p[1];
    const double dist = std::hypot(ex, ey);
    if (dist < best) {
      best = dist;
      elem = e;
      s_loc = s;
    }
  }
  if (!(best <= 1e-9 * std::max(mesh.h_max, 1.0))) {
    throw diagnostics_error("trace_at_point: point (" + std::to_string(p[0]) +
                            ", " + std::to_string(p[1]) +
                            ") lies on no boundary element");
  }

  std::vector<local_shape> shapes;
  u_local_shapes(bases, mesh, elem, shapes);
  const std::size_t mu = bases.m_u;
  std::vector<std::array<double, 2>> rows(cumulative.size() + 1,
                                          {0.0, 0.0});
  for (std::size_t l = 0; l < cumulative.size(); ++l) {
    double ux = 0.0, uy = 0.0;
    for (const local_shape& sh : shapes) {
      const double val = sh.val_a + (sh.val_b - sh.val_a) * s_loc;
      ux += val * cumulative[l](sh.dof);
      uy += val * cumulative[l](mu + sh.dof);
    }
    rows[l + 1] = {ux, uy};
  }
  return rows;
}

std::vector<point2> deformation_snapshot(
    const boundary_mesh& mesh, const space_bases& bases,
    const Eigen::VectorXd& cumulative_at_step, double magnification) {
  const std::size_t mu = bases.m_u;
  std::vector<point2> out(mesh.n_nodes());
  for (std::size_t node = 0; node < mesh.n_nodes(); ++node) {
    double ux = 0.0, uy = 0.0;
    const std::size_t dof = bases.u_dof_of_node[node];
    if (dof != kNoDof) {
      ux = cumulative_at_step(dof);
      uy = cumulative_at_step(mu + dof);
    }
    out[node] = {mesh.nodes[node][0] + magnification * ux,
                 mesh.nodes[node][1] + magnification * uy};
  }
  return out;
}

namespace {

void csv_prec(std::ostream& out) { out.precision(16); }

}  // namespace

void write_energy_csv(std::ostream& out, const time_grid& grid,
                      const std::vector<double>& energy) {
  csv_prec(out);
  out << "t,E\n";
  for (std::size_t m = 0; m < energy.size(); ++m) {
    out << grid.node(m) << ',' << energy[m] << '\n';
  }
}

void write_trace_csv(std::ostream& out, const time_grid& grid,
                     const std::vector<std::array<double, 2>>& trace) {
  csv_prec(out);
  out << "t,ux,uy\n";
  for (std::size_t m = 0; m < trace.size(); ++m) {
    out << grid.node(m) << ',' << trace[m][0] << ',' << trace[m][1] << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const sweep_result& sweep) {
  csv_prec(out);
  out << "h,dt,err2,slope\n";
  for (const sweep_row& row : sweep.rows) {
    out << row.h << ',' << row.dt << ',' << row.err2 << ',' << sweep.slope
        << '\n';
  }
}

void write_multiplier_csv(std::ostream& out, const boundary_mesh& mesh,
                          const space_bases& bases, const time_grid& grid,
                          const std::vector<Eigen::VectorXd>& lambda) {
  csv_prec(out);
  out << "t,element,x_mid,y_mid,lambda_n,lambda_t\n";
  const std::size_t ml = bases.m_lambda;
  for (std::size_t l = 0; l < lambda.size(); ++l) {
    for (std::size_t j = 0; j < ml; ++j) {
      const std::size_t e = bases.lambda_elem[j];
      const point2 a = mesh.node_a(e), b = mesh.node_b(e);
      out << grid.node(l + 1) << ',' << e << ','
          << 0.5 * (a[0] + b[0]) << ',' << 0.5 * (a[1] + b[1]) << ','
          << lambda[l](j) << ',' << lambda[l](ml + j) << '\n';
    }
  }
}

void write_uzawa_trace_csv(std::ostream& out,
                           const std::vector<uzawa_trace_row>& trace) {
  csv_prec(out);
  out << "iter,residual,correction,penetration\n";
  for (const uzawa_trace_row& row : trace) {
    out << row.iter << ',' << row.residual << ',' << row.correction << ','
        << row.penetration << '\n';
  }
}

void write_snapshot_svg(std::ostream& out, const boundary_mesh& mesh,
                        const std::vector<point2>& displaced,
                        double obstacle_height) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const point2& p : displaced) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  if (std::isfinite(obstacle_height)) {
    ymin = std::min(ymin, obstacle_height);
    ymax = std::max(ymax, obstacle_height);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double pad = 0.1 * span;
  xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;
  const double scale = 560.0 / (xmax - xmin);
  const double height = (ymax - ymin) * scale;
  const auto X = [&](double x) { return (x - xmin) * scale; };
  // SVG y grows downward; flip so the drawing is upright.
  const auto Y = [&](double y) { return (ymax - y) * scale; };

  out.precision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\""
      << height << "\" viewBox=\"0 0 560 " << height << "\">\n";
  out << "<polygon fill=\"#dce8f5\" stroke=\"#1f4e79\" stroke-width=\"1.5\""
      << " points=\"";
  // Traverse nodes in boundary travel order via the element chain.
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const point2& p = displaced[mesh.elements[e][0]];
    out << X(p[0]) << ',' << Y(p[1]) << ' ';
  }
  out << "\"/>\n";
  if (std::isfinite(obstacle_height)) {
    out << "<line x1=\"0\" y1=\"" << Y(obstacle_height) << "\" x2=\"560\""
        << " y2=\"" << Y(obstacle_height)
        << "\" stroke=\"#8a2d2d\" stroke-width=\"2\""
        << " stroke-dasharray=\"8 4\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace stbem
