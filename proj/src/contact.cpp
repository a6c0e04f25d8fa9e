#include "stbem/contact.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace stbem {

namespace {

void validate_law(const friction_law& law) {
  for (double v : law.value) {
    if (!(v >= 0.0)) {
      throw contact_error("friction thresholds must be nonnegative");
    }
  }
  if (law.kind != friction_law_kind::frictionless && law.value.empty()) {
    throw contact_error("friction law needs threshold values");
  }
}

bool dof_masked(const std::vector<bool>* mask, std::size_t j) {
  return mask != nullptr && j < mask->size() && !(*mask)[j];
}

}  // namespace

point2 node_normal(const boundary_mesh& mesh, const space_bases& bases,
                   std::size_t node, const std::vector<bool>* lambda_mask) {
  double nx = 0.0, ny = 0.0;
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    if (!is_contact_part(mesh.part[e])) continue;
    const std::size_t ld = bases.lambda_dof_of_elem[e];
    if (ld != kNoDof && dof_masked(lambda_mask, ld)) continue;
    if (mesh.elements[e][0] == node || mesh.elements[e][1] == node) {
      nx += mesh.normal[e][0];
      ny += mesh.normal[e][1];
    }
  }
  const double len = std::hypot(nx, ny);
  if (len == 0.0) return {0.0, 0.0};
  return {nx / len, ny / len};
}

std::vector<Eigen::VectorXd> interpolate_gap(
    const boundary_mesh& mesh, const space_bases& bases,
    const time_grid& grid, const gap_function& gap, bool utilde_space,
    const std::vector<bool>* lambda_mask) {
  const std::size_t m =
      utilde_space ? bases.m_utilde : bases.m_u;
  std::vector<Eigen::VectorXd> out(grid.steps,
                                   Eigen::VectorXd::Zero(2 * m));

  std::vector<bool> node_in(mesh.n_nodes(), false);
  for (std::size_t ld = 0; ld < bases.m_lambda; ++ld) {
    if (dof_masked(lambda_mask, ld)) continue;
    const std::size_t e = bases.lambda_elem[ld];
    node_in[mesh.elements[e][0]] = true;
    node_in[mesh.elements[e][1]] = true;
  }

  for (std::size_t node = 0; node < mesh.n_nodes(); ++node) {
    if (!node_in[node]) continue;
    const std::size_t dof = utilde_space ? bases.utilde_dof_of_node[node]
                                         : bases.u_dof_of_node[node];
    if (dof == kNoDof) continue;
    const point2 nrm = node_normal(mesh, bases, node, lambda_mask);
    if (nrm[0] == 0.0 && nrm[1] == 0.0) continue;
    const double x = mesh.nodes[node][0], y = mesh.nodes[node][1];
    double prev = 0.0;
    for (std::size_t l = 0; l < grid.steps; ++l) {
      const double val = gap(x, y, nrm[0], nrm[1], grid.node(l + 1));
      const double inc = (l == 0) ? val : val - prev;
      prev = val;
      out[l](dof) += -inc * nrm[0];
      out[l](m + dof) += -inc * nrm[1];
    }
  }
  return out;
}

void project_multiplier(Eigen::VectorXd& slice, std::size_t m_lambda,
                        const std::vector<double>& thresholds) {
  if (slice.size() != static_cast<Eigen::Index>(2 * m_lambda) ||
      thresholds.size() != m_lambda) {
    throw contact_error("projection dimension mismatch");
  }
  for (std::size_t j = 0; j < m_lambda; ++j) {
    if (!(thresholds[j] >= 0.0)) {
      throw contact_error("negative tangential threshold");
    }
    slice(j) = std::max(slice(j), 0.0);
    slice(m_lambda + j) =
        std::clamp(slice(m_lambda + j), -thresholds[j], thresholds[j]);
  }
}

std::vector<double> tangential_thresholds(const friction_law& law,
                                          const Eigen::VectorXd& slice,
                                          std::size_t m_lambda) {
  std::vector<double> thr(m_lambda, 0.0);
  switch (law.kind) {
    case friction_law_kind::frictionless:
      break;
    case friction_law_kind::tresca:
      for (std::size_t j = 0; j < m_lambda; ++j) thr[j] = law.at(j);
      break;
    case friction_law_kind::coulomb:
      for (std::size_t j = 0; j < m_lambda; ++j) {
        thr[j] = law.at(j) * std::max(slice(j), 0.0);
      }
      break;
  }
  return thr;
}

uzawa_result uzawa_solve(const block_system& system,
                         const mot_solver& solver,
                         const std::vector<Eigen::VectorXd>& rhs,
                         const std::vector<Eigen::VectorXd>& gap,
                         const friction_law& law, const uzawa_config& cfg,
                         const std::vector<bool>* lambda_mask) {
  if (!(cfg.rho > 0.0) || !(cfg.eps > 0.0) || cfg.max_iters < 1) {
    throw contact_error("projection iteration config invalid");
  }
  validate_law(law);
  const std::size_t n = rhs.size();
  const std::size_t ml = system.m_lambda;
  const std::size_t disp_off =
      system.bilateral ? system.utilde_offset : system.u_offset;
  const std::size_t disp_len =
      2 * (system.bilateral ? system.m_utilde : system.m_u);
  if (gap.size() != n) throw contact_error("gap slice count mismatch");
  for (const auto& g : gap) {
    if (g.size() != static_cast<Eigen::Index>(disp_len)) {
      throw contact_error("gap dimension mismatch");
    }
  }

  uzawa_result res;
  if (ml == 0) {
    res.x = solver.solve(rhs);
    res.lambda.assign(n, Eigen::VectorXd());
    res.iters = 1;
    res.converged = true;
    return res;
  }

  std::vector<Eigen::VectorXd> lambda(n, Eigen::VectorXd::Zero(2 * ml));
  std::vector<Eigen::VectorXd> cur(n);

  for (std::size_t k = 0; k < cfg.max_iters; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      cur[l] = rhs[l] + system.coupling * lambda[l];
    }
    std::vector<Eigen::VectorXd> x = solver.solve(cur);

    double diff2 = 0.0, norm2 = 0.0, correction = 0.0, penetration = 0.0;
    Eigen::VectorXd ucum = Eigen::VectorXd::Zero(disp_len);
    Eigen::VectorXd gcum = Eigen::VectorXd::Zero(disp_len);
    std::vector<Eigen::VectorXd> fresh(n);
    for (std::size_t l = 0; l < n; ++l) {
      const Eigen::VectorXd disp = x[l].segment(disp_off, disp_len);
      Eigen::VectorXd w =
          lambda[l] - cfg.rho * (system.mtilde * (disp - gap[l]));
      Eigen::VectorXd projected = w;
      for (std::size_t j = 0; j < ml; ++j) {
        projected(j) = std::max(projected(j), 0.0);
      }
      const Eigen::VectorXd& thr_src =
          cfg.coulomb_previous_iterate ? lambda[l] : projected;
      const std::vector<double> thr =
          tangential_thresholds(law, thr_src, ml);
      for (std::size_t j = 0; j < ml; ++j) {
        projected(ml + j) =
            std::clamp(projected(ml + j), -thr[j], thr[j]);
        if (dof_masked(lambda_mask, j)) {
          projected(j) = 0.0;
          projected(ml + j) = 0.0;
        }
      }
      correction =
          std::max(correction, (projected - w).lpNorm<Eigen::Infinity>());
      diff2 += (projected - lambda[l]).squaredNorm();
      norm2 += projected.squaredNorm();

      ucum += disp;
      gcum += gap[l];
      const Eigen::VectorXd mean_gap = system.mtilde * (gcum - ucum);
      for (std::size_t j = 0; j < ml; ++j) {
        if (dof_masked(lambda_mask, j)) continue;
        penetration = std::max(penetration, mean_gap(j));
      }
      fresh[l] = std::move(projected);
    }
    lambda = std::move(fresh);
    const double residual = std::sqrt(diff2);
    const double denom = std::sqrt(norm2);
    const double metric = denom > 0.0 ? residual / denom : residual;
    res.trace.push_back({k, metric, correction, penetration});
    if (metric <= cfg.eps) {
      for (std::size_t l = 0; l < n; ++l) {
        cur[l] = rhs[l] + system.coupling * lambda[l];
      }
      res.x = solver.solve(cur);
      res.lambda = std::move(lambda);
      res.iters = k + 1;
      res.converged = true;
      return res;
    }
  }
  throw uzawa_divergence("projection iterations did not converge within " +
                             std::to_string(cfg.max_iters) + " iterations",
                         res.trace);
}

kkt_report check_kkt(const boundary_mesh& mesh, const space_bases& bases,
                     const time_grid& grid, const block_system& system,
                     const uzawa_result& result,
                     const std::vector<Eigen::VectorXd>& gap,
                     const friction_law& law, double eps,
                     const std::vector<bool>* lambda_mask) {
  kkt_report rep;
  const std::size_t ml = system.m_lambda;
  const std::size_t n = result.lambda.size();
  const std::size_t disp_off =
      system.bilateral ? system.utilde_offset : system.u_offset;
  const std::size_t m =
      system.bilateral ? system.m_utilde : system.m_u;
  const std::size_t disp_len = 2 * m;

  double gap_inf = 0.0;
  for (const auto& g : gap) {
    gap_inf = std::max(gap_inf, g.lpNorm<Eigen::Infinity>());
  }
  rep.tol_c = 10.0 * eps * std::max(gap_inf, 1.0);
  rep.min_normal_multiplier = 0.0;
  rep.max_tangential_excess = -1e300;

  std::vector<std::size_t> contact_nodes;
  {
    std::vector<bool> node_in(mesh.n_nodes(), false);
    for (std::size_t ld = 0; ld < ml; ++ld) {
      if (dof_masked(lambda_mask, ld)) continue;
      const std::size_t e = bases.lambda_elem[ld];
      node_in[mesh.elements[e][0]] = true;
      node_in[mesh.elements[e][1]] = true;
    }
    for (std::size_t nd = 0; nd < mesh.n_nodes(); ++nd) {
      if (node_in[nd]) contact_nodes.push_back(nd);
    }
  }

  Eigen::VectorXd ucum = Eigen::VectorXd::Zero(disp_len);
  Eigen::VectorXd gcum = Eigen::VectorXd::Zero(disp_len);
  for (std::size_t l = 0; l < n; ++l) {
    const Eigen::VectorXd& lam = result.lambda[l];
    if (lam.size() == 0) continue;
    const Eigen::VectorXd disp = result.x[l].segment(disp_off, disp_len);
    ucum += disp;
    gcum += gap[l];

    const std::vector<double> thr = tangential_thresholds(law, lam, ml);
    const Eigen::VectorXd mean_gap_vec = system.mtilde * (gcum - ucum);
    const Eigen::VectorXd slip_vec = system.mtilde * disp;
    double comp_sum = 0.0;
    for (std::size_t j = 0; j < ml; ++j) {
      if (dof_masked(lambda_mask, j)) continue;
      const double h = mesh.length[bases.lambda_elem[j]];
      rep.min_normal_multiplier =
          std::min(rep.min_normal_multiplier, lam(j));
      rep.max_tangential_excess = std::max(
          rep.max_tangential_excess, std::abs(lam(ml + j)) - thr[j]);
      comp_sum += std::abs(lam(j) * mean_gap_vec(j) / h);
      if (law.kind != friction_law_kind::frictionless &&
          thr[j] - std::abs(lam(ml + j)) > rep.tol_c) {
        const double speed =
            std::abs(slip_vec(ml + j) / h) / grid.dt;
        rep.max_stick_violation =
            std::max(rep.max_stick_violation, speed);
      }
    }
    const double lam_l1 = lam.lpNorm<1>();
    rep.worst_complementarity = std::max(
        rep.worst_complementarity, comp_sum / std::max(lam_l1, 1e-300));

    for (const std::size_t nd : contact_nodes) {
      const std::size_t dof = system.bilateral
                                  ? bases.utilde_dof_of_node[nd]
                                  : bases.u_dof_of_node[nd];
      if (dof == kNoDof) continue;
      const point2 nrm = node_normal(mesh, bases, nd, lambda_mask);
      const double uperp = -(nrm[0] * ucum(dof) + nrm[1] * ucum(m + dof));
      const double gval = -(nrm[0] * gcum(dof) + nrm[1] * gcum(m + dof));
      rep.max_penetration =
          std::max(rep.max_penetration, gval - uperp);
    }
  }
  if (rep.max_tangential_excess == -1e300) rep.max_tangential_excess = 0.0;
  return rep;
}

}  // namespace stbem
