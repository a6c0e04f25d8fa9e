#include "stbem/assembly.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace stbem {

namespace {

// Sorted wavefront radii c * t_m for both speeds and all time nodes.
std::vector<double> wavefront_radii(const material& mat,
                                    const time_grid& grid) {
  std::vector<double> radii;
  radii.reserve(2 * grid.steps);
  for (std::size_t m = 1; m <= grid.steps; ++m) {
    radii.push_back(mat.cs * grid.node(m));
    radii.push_back(mat.cp * grid.node(m));
  }
  std::sort(radii.begin(), radii.end());
  std::vector<double> out;
  for (double r : radii) {
    if (out.empty() || r - out.back() > 1e-12 * r) out.push_back(r);
  }
  return out;
}

// int_0^1 (a0 + (a1-a0) s)(b0 + (b1-b0) s) ds, exact.
double linear_product_integral(double a0, double a1, double b0, double b1) {
  return a0 * b0 + 0.5 * (a0 * (b1 - b0) + b0 * (a1 - a0)) +
         (a1 - a0) * (b1 - b0) / 3.0;
}

// Per-pair staging of the three kernel families at all time nodes.
// Row-major 4x4 tiles per node: index i = comp * n_test + shape on the
// test side, j likewise on the trial side.
struct pair_stager {
  std::size_t steps = 0;       // N
  std::vector<double> vm, km, wm;

  void reset(std::size_t n_nodes) {
    vm.assign(n_nodes * 16, 0.0);
    km.assign(n_nodes * 16, 0.0);
    wm.assign(n_nodes * 16, 0.0);
  }
};

// Cached kernel evaluations for one difference vector at all time
// nodes; the coincident rule alternates between +d and -d, so two slots
// suffice to make every evaluation hit after the first pass.
struct kernel_cache_slot {
  double d1 = std::numeric_limits<double>::quiet_NaN();
  double d2 = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> g1, k2, hp;  // 4 / 4 / 16 doubles per node
};

struct pair_workspace {
  std::vector<local_shape> psx, psy, usx, usy;
  pair_stager stage;
  kernel_cache_slot cache[2];
  int next_slot = 0;
  std::vector<double> lv, lk, lw;  // combined per-lag tiles
};

struct pair_context {
  const material* mat = nullptr;
  const time_grid* grid = nullptr;
  element_geometry gx, gy;
  std::size_t mlo = 1;   // first time node that can be causal
  bool need_k = false;
  bool need_w = false;
};

void evaluate_time_nodes(const pair_context& ctx, kernel_cache_slot& slot,
                         double d1, double d2) {
  const std::size_t n_nodes = ctx.grid->steps + 1;
  slot.d1 = d1;
  slot.d2 = d2;
  slot.g1.assign(n_nodes * 4, 0.0);
  slot.k2.assign(n_nodes * 4, 0.0);
  slot.hp.assign(n_nodes * 16, 0.0);
  const double r = std::hypot(d1, d2);
  const double nx[2] = {ctx.gx.normal[0], ctx.gx.normal[1]};
  const double ny[2] = {ctx.gy.normal[0], ctx.gy.normal[1]};
  for (std::size_t m = ctx.mlo; m < n_nodes; ++m) {
    const double t = ctx.grid->node(m);
    if (ctx.mat->cp * t <= r) continue;
    double g1[2][2];
    displacement_kernel(*ctx.mat, 1, t, d1, d2, g1);
    double* gs = slot.g1.data() + m * 4;
    gs[0] = g1[0][0];
    gs[1] = g1[0][1];
    gs[2] = g1[1][0];
    gs[3] = g1[1][1];
    if (ctx.need_k) {
      double k2[2][2];
      traction_kernel(*ctx.mat, 2, t, d1, d2, ny, k2);
      double* ks = slot.k2.data() + m * 4;
      ks[0] = k2[0][0];
      ks[1] = k2[0][1];
      ks[2] = k2[1][0];
      ks[3] = k2[1][1];
    }
    if (ctx.need_w) {
      hypersingular_parts hp;
      hypersingular_kernel(*ctx.mat, t, d1, d2, nx, ny, hp);
      double* hs = slot.hp.data() + m * 16;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          hs[4 * (2 * i + j) + 0] = hp.dd[i][j];
          hs[4 * (2 * i + j) + 1] = hp.du[i][j];
          hs[4 * (2 * i + j) + 2] = hp.ud[i][j];
          hs[4 * (2 * i + j) + 3] = hp.uu[i][j];
        }
      }
    }
  }
}

// Computes the staged moment tiles for one element pair.  Shape dtau
// values in ws.usx / ws.usy must already carry the normal-flip sign.
void stage_pair(const pair_context& ctx, const std::vector<double>& radii,
                const quadrature_config& quad, pair_workspace& ws) {
  const std::size_t n_nodes = ctx.grid->steps + 1;
  ws.stage.reset(n_nodes);
  ws.cache[0].d1 = std::numeric_limits<double>::quiet_NaN();
  ws.cache[1].d1 = std::numeric_limits<double>::quiet_NaN();
  ws.next_slot = 0;

  const std::size_t npsx = ws.psx.size(), npsy = ws.psy.size();
  const std::size_t nusx = ws.usx.size(), nusy = ws.usy.size();

  auto fn = [&](double s, double sq, double w) {
    const point2 x = ctx.gx.at(s);
    const point2 y = ctx.gy.at(sq);
    const double d1 = x[0] - y[0];
    const double d2 = x[1] - y[1];

    kernel_cache_slot* slot = nullptr;
    for (auto& c : ws.cache) {
      if (c.d1 == d1 && c.d2 == d2) {
        slot = &c;
        break;
      }
    }
    if (slot == nullptr) {
      slot = &ws.cache[ws.next_slot];
      ws.next_slot ^= 1;
      evaluate_time_nodes(ctx, *slot, d1, d2);
    }

    double pvx[2], pvy[2], uvx[2], uvy[2], udx[2], udy[2];
    for (std::size_t a = 0; a < npsx; ++a)
      pvx[a] = ws.psx[a].val_a + (ws.psx[a].val_b - ws.psx[a].val_a) * s;
    for (std::size_t a = 0; a < npsy; ++a)
      pvy[a] = ws.psy[a].val_a + (ws.psy[a].val_b - ws.psy[a].val_a) * sq;
    for (std::size_t a = 0; a < nusx; ++a) {
      uvx[a] = ws.usx[a].val_a + (ws.usx[a].val_b - ws.usx[a].val_a) * s;
      udx[a] = ws.usx[a].dtau;
    }
    for (std::size_t a = 0; a < nusy; ++a) {
      uvy[a] = ws.usy[a].val_a + (ws.usy[a].val_b - ws.usy[a].val_a) * sq;
      udy[a] = ws.usy[a].dtau;
    }

    const double r = std::hypot(d1, d2);
    for (std::size_t m = ctx.mlo; m < n_nodes; ++m) {
      if (ctx.mat->cp * ctx.grid->node(m) <= r) continue;
      const double* gs = slot->g1.data() + m * 4;
      double* vm = ws.stage.vm.data() + m * 16;
      for (int ci = 0; ci < 2; ++ci) {
        for (std::size_t ai = 0; ai < npsx; ++ai) {
          const double tw = w * pvx[ai];
          const std::size_t row = ci * npsx + ai;
          for (int cj = 0; cj < 2; ++cj) {
            const double kv = tw * gs[2 * ci + cj];
            for (std::size_t aj = 0; aj < npsy; ++aj) {
              vm[4 * row + cj * npsy + aj] += kv * pvy[aj];
            }
          }
        }
      }
      if (ctx.need_k && nusy > 0) {
        const double* ks = slot->k2.data() + m * 4;
        double* km = ws.stage.km.data() + m * 16;
        for (int ci = 0; ci < 2; ++ci) {
          for (std::size_t ai = 0; ai < npsx; ++ai) {
            const double tw = w * pvx[ai];
            const std::size_t row = ci * npsx + ai;
            for (int cj = 0; cj < 2; ++cj) {
              const double kv = tw * ks[2 * ci + cj];
              for (std::size_t aj = 0; aj < nusy; ++aj) {
                km[4 * row + cj * nusy + aj] += kv * uvy[aj];
              }
            }
          }
        }
      }
      if (ctx.need_w && nusx > 0 && nusy > 0) {
        const double* hs = slot->hp.data() + m * 16;
        double* wmm = ws.stage.wm.data() + m * 16;
        for (int ci = 0; ci < 2; ++ci) {
          for (int cj = 0; cj < 2; ++cj) {
            const double* q = hs + 4 * (2 * ci + cj);
            for (std::size_t ai = 0; ai < nusx; ++ai) {
              for (std::size_t aj = 0; aj < nusy; ++aj) {
                const double val =
                    udx[ai] * udy[aj] * q[0] - udx[ai] * uvy[aj] * q[1] -
                    uvx[ai] * udy[aj] * q[2] + uvx[ai] * uvy[aj] * q[3];
                wmm[4 * (ci * nusx + ai) + cj * nusy + aj] += w * val;
              }
            }
          }
        }
      }
    }
  };

  pair_quadrature(ctx.gx, ctx.gy, radii, quad, fn);
}

// Second difference in the time-node index applied to the staged tiles,
// with the family-specific scaling.
void combine_lags(const pair_context& ctx, pair_workspace& ws) {
  const std::size_t n = ctx.grid->steps;
  const double dt = ctx.grid->dt;
  ws.lv.assign(n * 16, 0.0);
  ws.lk.assign(n * 16, 0.0);
  ws.lw.assign(n * 16, 0.0);
  for (std::size_t lag = 0; lag < n; ++lag) {
    const double* vp = ws.stage.vm.data() + (lag + 1) * 16;
    const double* v0 = ws.stage.vm.data() + lag * 16;
    const double* kp = ws.stage.km.data() + (lag + 1) * 16;
    const double* k0 = ws.stage.km.data() + lag * 16;
    const double* wp = ws.stage.wm.data() + (lag + 1) * 16;
    const double* w0 = ws.stage.wm.data() + lag * 16;
    const double* vmm = lag > 0 ? ws.stage.vm.data() + (lag - 1) * 16 : nullptr;
    const double* kmm = lag > 0 ? ws.stage.km.data() + (lag - 1) * 16 : nullptr;
    const double* wmm = lag > 0 ? ws.stage.wm.data() + (lag - 1) * 16 : nullptr;
    for (int i = 0; i < 16; ++i) {
      const double dv = vp[i] - 2.0 * v0[i] + (vmm ? vmm[i] : 0.0);
      const double dk = kp[i] - 2.0 * k0[i] + (kmm ? kmm[i] : 0.0);
      const double dw = wp[i] - 2.0 * w0[i] + (wmm ? wmm[i] : 0.0);
      ws.lv[lag * 16 + i] = -dv;
      ws.lk[lag * 16 + i] = -dk / dt;
      ws.lw[lag * 16 + i] = dw / (dt * dt);
    }
  }
}

void scatter_pair(const pair_context& ctx, const space_bases& bases,
                  const pair_workspace& ws, operator_blocks& out) {
  const std::size_t n = ctx.grid->steps;
  const std::size_t mp = bases.m_psi, mu = bases.m_u;
  const std::size_t npsx = ws.psx.size(), npsy = ws.psy.size();
  const std::size_t nusx = ws.usx.size(), nusy = ws.usy.size();
  double rmin = 0.0, rmax = 0.0;
  pair_distance_range(ctx.gx, ctx.gy, rmin, rmax);
  for (std::size_t lag = 0; lag < n; ++lag) {
    if (ctx.mat->cp * ctx.grid->node(lag + 1) <= rmin) continue;
    const double* lv = ws.lv.data() + lag * 16;
    const double* lk = ws.lk.data() + lag * 16;
    const double* lw = ws.lw.data() + lag * 16;
    for (int ci = 0; ci < 2; ++ci) {
      for (std::size_t ai = 0; ai < npsx; ++ai) {
        const std::size_t row = ci * mp + ws.psx[ai].dof;
        for (int cj = 0; cj < 2; ++cj) {
          for (std::size_t aj = 0; aj < npsy; ++aj) {
            out.V[lag](row, cj * mp + ws.psy[aj].dof) +=
                lv[4 * (ci * npsx + ai) + cj * npsy + aj];
          }
          if (ctx.need_k) {
            for (std::size_t aj = 0; aj < nusy; ++aj) {
              out.K[lag](row, cj * mu + ws.usy[aj].dof) +=
                  lk[4 * (ci * npsx + ai) + cj * nusy + aj];
            }
          }
        }
      }
      if (ctx.need_w) {
        for (std::size_t ai = 0; ai < nusx; ++ai) {
          const std::size_t row = ci * mu + ws.usx[ai].dof;
          for (int cj = 0; cj < 2; ++cj) {
            for (std::size_t aj = 0; aj < nusy; ++aj) {
              out.W[lag](row, cj * mu + ws.usy[aj].dof) +=
                  lw[4 * (ci * nusx + ai) + cj * nusy + aj];
            }
          }
        }
      }
    }
  }
}

struct assembly_plan {
  bool need_k = true;
  bool need_w = true;
};

operator_blocks assemble_blocks_impl(const boundary_mesh& mesh,
                                     const space_bases& bases,
                                     const material& mat,
                                     const time_grid& grid,
                                     const assembly_config& cfg,
                                     const assembly_plan& plan) {
  mat.validate();
  const std::size_t ne = mesh.n_elements();
  if (ne == 0) throw assembly_error("assembly needs a non-empty mesh");
  operator_blocks out;
  out.steps = grid.steps;
  out.m_psi = bases.m_psi;
  out.m_u = bases.m_u;
  const std::size_t np = 2 * bases.m_psi, nu = 2 * bases.m_u;
  out.V.assign(grid.steps, Eigen::MatrixXd::Zero(np, np));
  if (plan.need_k) out.K.assign(grid.steps, Eigen::MatrixXd::Zero(np, nu));
  if (plan.need_w) out.W.assign(grid.steps, Eigen::MatrixXd::Zero(nu, nu));

  const std::vector<double> radii = wavefront_radii(mat, grid);
  const double horizon_reach = mat.cp * grid.node(grid.steps);
  const long n_pairs = static_cast<long>(ne) * static_cast<long>(ne);
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  const double tsign = cfg.flip_normal ? -1.0 : 1.0;

#pragma omp parallel num_threads(threads)
  {
    pair_workspace ws;
#pragma omp for ordered schedule(dynamic)
    for (long p = 0; p < n_pairs; ++p) {
      const std::size_t ex = static_cast<std::size_t>(p) / ne;
      const std::size_t ey = static_cast<std::size_t>(p) % ne;
      pair_context ctx;
      ctx.mat = &mat;
      ctx.grid = &grid;
      ctx.gx = element_geometry_of(mesh, ex, cfg.flip_normal);
      ctx.gy = element_geometry_of(mesh, ey, cfg.flip_normal);
      double rmin = 0.0, rmax = 0.0;
      pair_distance_range(ctx.gx, ctx.gy, rmin, rmax);
      bool causal = rmin < horizon_reach;
      if (causal) {
        psi_local_shapes(bases, mesh, ex, ws.psx);
        psi_local_shapes(bases, mesh, ey, ws.psy);
        u_local_shapes(bases, mesh, ex, ws.usx);
        u_local_shapes(bases, mesh, ey, ws.usy);
        for (auto& sh : ws.usx) sh.dtau *= tsign;
        for (auto& sh : ws.usy) sh.dtau *= tsign;
        ctx.need_k = plan.need_k && !ws.usy.empty();
        ctx.need_w = plan.need_w && !ws.usx.empty() && !ws.usy.empty();
        ctx.mlo = 1;
        while (ctx.mlo <= grid.steps &&
               mat.cp * grid.node(ctx.mlo) <= rmin) {
          ++ctx.mlo;
        }
        if (ctx.mlo > grid.steps) {
          causal = false;
        } else {
          stage_pair(ctx, radii, cfg.quad, ws);
          combine_lags(ctx, ws);
        }
      }
#pragma omp ordered
      {
        if (causal) scatter_pair(ctx, bases, ws, out);
      }
    }
  }
  return out;
}

}  // namespace

operator_blocks assemble_operator_blocks(const boundary_mesh& mesh,
                                         const space_bases& bases,
                                         const material& mat,
                                         const time_grid& grid,
                                         const assembly_config& cfg) {
  return assemble_blocks_impl(mesh, bases, mat, grid, cfg, {});
}

operator_blocks assemble_operator_blocks_reference(
    const boundary_mesh& mesh, const space_bases& bases, const material& mat,
    const time_grid& grid, const assembly_config& cfg) {
  mat.validate();
  const std::size_t ne = mesh.n_elements();
  if (ne == 0) throw assembly_error("assembly needs a non-empty mesh");
  operator_blocks out;
  out.steps = grid.steps;
  out.m_psi = bases.m_psi;
  out.m_u = bases.m_u;
  const std::size_t np = 2 * bases.m_psi, nu = 2 * bases.m_u;
  out.V.assign(grid.steps, Eigen::MatrixXd::Zero(np, np));
  out.K.assign(grid.steps, Eigen::MatrixXd::Zero(np, nu));
  out.W.assign(grid.steps, Eigen::MatrixXd::Zero(nu, nu));

  const std::vector<double> radii = wavefront_radii(mat, grid);
  const double tsign = cfg.flip_normal ? -1.0 : 1.0;
  std::vector<local_shape> psx, psy, usx, usy;

  for (std::size_t ex = 0; ex < ne; ++ex) {
    for (std::size_t ey = 0; ey < ne; ++ey) {
      const element_geometry gx = element_geometry_of(mesh, ex,
                                                      cfg.flip_normal);
      const element_geometry gy = element_geometry_of(mesh, ey,
                                                      cfg.flip_normal);
      double rmin = 0.0, rmax = 0.0;
      pair_distance_range(gx, gy, rmin, rmax);
      psi_local_shapes(bases, mesh, ex, psx);
      psi_local_shapes(bases, mesh, ey, psy);
      u_local_shapes(bases, mesh, ex, usx);
      u_local_shapes(bases, mesh, ey, usy);
      for (auto& sh : usx) sh.dtau *= tsign;
      for (auto& sh : usy) sh.dtau *= tsign;
      const double nxv[2] = {gx.normal[0], gx.normal[1]};
      const double nyv[2] = {gy.normal[0], gy.normal[1]};
      const std::size_t mp = bases.m_psi, mu = bases.m_u;

      for (std::size_t lag = 0; lag < grid.steps; ++lag) {
        if (mat.cp * grid.node(lag + 1) <= rmin) continue;
        auto fn2 = [&](double s, double sq, double w) {
          const point2 x = gx.at(s);
          const point2 y = gy.at(sq);
          const double d1 = x[0] - y[0];
          const double d2 = x[1] - y[1];
          double v2[2][2], k2[2][2];
          time_integrated_kernel(toeplitz_kind::single_layer, mat, lag,
                                 grid.dt, d1, d2, nxv, nyv, v2);
          time_integrated_kernel(toeplitz_kind::double_layer, mat, lag,
                                 grid.dt, d1, d2, nxv, nyv, k2);
          hypersingular_parts hp;
          time_integrated_hypersingular(mat, lag, grid.dt, d1, d2, nxv, nyv,
                                        hp);
          for (int ci = 0; ci < 2; ++ci) {
            for (int cj = 0; cj < 2; ++cj) {
              for (std::size_t ai = 0; ai < psx.size(); ++ai) {
                const double va =
                    psx[ai].val_a + (psx[ai].val_b - psx[ai].val_a) * s;
                const std::size_t row = ci * mp + psx[ai].dof;
                for (std::size_t aj = 0; aj < psy.size(); ++aj) {
                  const double vb =
                      psy[aj].val_a + (psy[aj].val_b - psy[aj].val_a) * sq;
                  out.V[lag](row, cj * mp + psy[aj].dof) +=
                      w * va * vb * v2[ci][cj];
                }
                for (std::size_t aj = 0; aj < usy.size(); ++aj) {
                  const double vb =
                      usy[aj].val_a + (usy[aj].val_b - usy[aj].val_a) * sq;
                  out.K[lag](row, cj * mu + usy[aj].dof) +=
                      w * va * vb * k2[ci][cj];
                }
              }
              for (std::size_t ai = 0; ai < usx.size(); ++ai) {
                const double va =
                    usx[ai].val_a + (usx[ai].val_b - usx[ai].val_a) * s;
                const double da = usx[ai].dtau;
                const std::size_t row = ci * mu + usx[ai].dof;
                for (std::size_t aj = 0; aj < usy.size(); ++aj) {
                  const double vb =
                      usy[aj].val_a + (usy[aj].val_b - usy[aj].val_a) * sq;
                  const double db = usy[aj].dtau;
                  out.W[lag](row, cj * mu + usy[aj].dof) +=
                      w * (da * db * hp.dd[ci][cj] -
                           da * vb * hp.du[ci][cj] -
                           va * db * hp.ud[ci][cj] +
                           va * vb * hp.uu[ci][cj]);
                }
              }
            }
          }
        };
        pair_quadrature(gx, gy, radii, cfg.quad, fn2);
      }
    }
  }
  return out;
}

Eigen::MatrixXd assemble_mass_psi_u(const boundary_mesh& mesh,
                                    const space_bases& bases) {
  const std::size_t mp = bases.m_psi, mu = bases.m_u;
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(2 * mp, 2 * mu);
  std::vector<local_shape> ps, us;
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    psi_local_shapes(bases, mesh, e, ps);
    u_local_shapes(bases, mesh, e, us);
    const double h = mesh.length[e];
    for (const auto& a : ps) {
      for (const auto& b : us) {
        const double val =
            h * linear_product_integral(a.val_a, a.val_b, b.val_a, b.val_b);
        for (int c = 0; c < 2; ++c) {
          mass(c * mp + a.dof, c * mu + b.dof) += val;
        }
      }
    }
  }
  return mass;
}

Eigen::MatrixXd assemble_contact_pairing(const boundary_mesh& mesh,
                                         const space_bases& bases,
                                         bool utilde_columns) {
  const std::size_t ml = bases.m_lambda;
  const std::size_t mc = utilde_columns ? bases.m_utilde : bases.m_u;
  Eigen::MatrixXd pairing = Eigen::MatrixXd::Zero(2 * ml, 2 * mc);
  std::vector<local_shape> shapes;
  for (std::size_t ld = 0; ld < ml; ++ld) {
    const std::size_t e = bases.lambda_elem[ld];
    if (utilde_columns) {
      utilde_local_shapes(bases, mesh, e, shapes);
    } else {
      u_local_shapes(bases, mesh, e, shapes);
    }
    const double h = mesh.length[e];
    for (const auto& sh : shapes) {
      const double integral = 0.5 * h * (sh.val_a + sh.val_b);
      for (int c = 0; c < 2; ++c) {
        pairing(ld, c * mc + sh.dof) += -mesh.normal[e][c] * integral;
        pairing(ml + ld, c * mc + sh.dof) += mesh.tangent[e][c] * integral;
      }
    }
  }
  return pairing;
}

std::vector<Eigen::VectorXd> assemble_load_moments(
    const boundary_mesh& mesh, const space_bases& bases,
    const time_grid& grid, const load_function& f, std::size_t space_order,
    std::size_t time_order) {
  const std::size_t mu = bases.m_u;
  std::vector<Eigen::VectorXd> moments(grid.steps,
                                       Eigen::VectorXd::Zero(2 * mu));
  const gauss_rule& srule = gauss_legendre(space_order);
  const gauss_rule& trule = gauss_legendre(time_order);
  std::vector<local_shape> us;
  double fv[2];
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    u_local_shapes(bases, mesh, e, us);
    if (us.empty()) continue;
    const double h = mesh.length[e];
    const point2 a = mesh.node_a(e);
    const point2 b = mesh.node_b(e);
    for (std::size_t i = 0; i < srule.x.size(); ++i) {
      const double s = srule.x[i];
      const double x = a[0] + s * (b[0] - a[0]);
      const double y = a[1] + s * (b[1] - a[1]);
      const double ws = h * srule.w[i];
      for (std::size_t l = 0; l < grid.steps; ++l) {
        for (std::size_t q = 0; q < trule.x.size(); ++q) {
          const double t = grid.node(l) + trule.x[q] * grid.dt;
          f(e, x, y, t, fv);
          const double wt = ws * trule.w[q];
          for (const auto& sh : us) {
            const double val = sh.val_a + (sh.val_b - sh.val_a) * s;
            moments[l](sh.dof) += wt * val * fv[0];
            moments[l](mu + sh.dof) += wt * val * fv[1];
          }
        }
      }
    }
  }
  return moments;
}

namespace {

Eigen::MatrixXd utilde_extension(const space_bases& bases) {
  const std::size_t mu = bases.m_u, mt = bases.m_utilde;
  Eigen::MatrixXd ext = Eigen::MatrixXd::Zero(2 * mu, 2 * mt);
  for (std::size_t j = 0; j < mt; ++j) {
    const std::size_t node = bases.utilde_node_of_dof[j];
    const std::size_t i = bases.u_dof_of_node[node];
    if (i == kNoDof) {
      throw assembly_error(
          "contact node excluded from the displacement space");
    }
    for (int c = 0; c < 2; ++c) ext(c * mu + i, c * mt + j) = 1.0;
  }
  return ext;
}

}  // namespace

block_system build_unilateral_system(const boundary_mesh& mesh,
                                     const space_bases& bases,
                                     const material& mat,
                                     const time_grid& grid,
                                     formulation_kind formulation,
                                     const assembly_config& cfg) {
  block_system sys;
  sys.formulation = formulation;
  sys.bilateral = false;
  sys.steps = grid.steps;
  sys.m_psi = bases.m_psi;
  sys.m_u = bases.m_u;
  sys.m_lambda = bases.m_lambda;
  sys.m_utilde = 0;
  const std::size_t np = 2 * bases.m_psi, nu = 2 * bases.m_u;
  sys.dim = np + nu;
  sys.psi1_offset = 0;
  sys.u_offset = np;

  assembly_plan plan;
  plan.need_w = (formulation == formulation_kind::symmetric);
  const operator_blocks blocks =
      assemble_blocks_impl(mesh, bases, mat, grid, cfg, plan);
  sys.mass_psi_u = assemble_mass_psi_u(mesh, bases);
  sys.mtilde = assemble_contact_pairing(mesh, bases, false);

  sys.coupling = Eigen::MatrixXd::Zero(sys.dim, 2 * bases.m_lambda);
  sys.coupling.block(sys.u_offset, 0, nu, 2 * bases.m_lambda) =
      sys.mtilde.transpose();

  sys.S.assign(grid.steps, Eigen::MatrixXd::Zero(sys.dim, sys.dim));
  for (std::size_t n = 0; n < grid.steps; ++n) {
    Eigen::MatrixXd& s = sys.S[n];
    s.block(0, 0, np, np) = blocks.V[n];
    s.block(0, np, np, nu) = -blocks.K[n];
    if (formulation == formulation_kind::symmetric) {
      s.block(np, 0, nu, np) = -blocks.K[n].transpose();
      s.block(np, np, nu, nu) = blocks.W[n];
      if (n == 0) {
        s.block(0, np, np, nu) += 0.5 * sys.mass_psi_u;
        s.block(np, 0, nu, np) += 0.5 * sys.mass_psi_u.transpose();
      }
    } else {
      if (n == 0) {
        s.block(0, np, np, nu) += 0.5 * sys.mass_psi_u;
        s.block(np, 0, nu, np) = sys.mass_psi_u.transpose();
      }
    }
  }
  return sys;
}

block_system build_bilateral_system(const boundary_mesh& mesh,
                                    const space_bases& bases,
                                    const material& mat1,
                                    const material& mat2,
                                    const time_grid& grid,
                                    formulation_kind formulation,
                                    const assembly_config& cfg) {
  block_system sys;
  sys.formulation = formulation;
  sys.bilateral = true;
  sys.steps = grid.steps;
  sys.m_psi = bases.m_psi;
  sys.m_u = bases.m_u;
  sys.m_lambda = bases.m_lambda;
  sys.m_utilde = bases.m_utilde;
  const std::size_t np = 2 * bases.m_psi, nu = 2 * bases.m_u;
  const std::size_t nt = 2 * bases.m_utilde;
  sys.dim = 2 * np + nu + nt;
  sys.psi1_offset = 0;
  sys.u_offset = np;
  sys.psi2_offset = np + nu;
  sys.utilde_offset = 2 * np + nu;

  assembly_plan plan;
  plan.need_w = (formulation == formulation_kind::symmetric);
  assembly_config cfg1 = cfg;
  cfg1.flip_normal = false;
  assembly_config cfg2 = cfg;
  cfg2.flip_normal = true;
  const operator_blocks b1 =
      assemble_blocks_impl(mesh, bases, mat1, grid, cfg1, plan);
  const operator_blocks b2 =
      assemble_blocks_impl(mesh, bases, mat2, grid, cfg2, plan);
  sys.mass_psi_u = assemble_mass_psi_u(mesh, bases);
  sys.mtilde = assemble_contact_pairing(mesh, bases, true);
  sys.extension = utilde_extension(bases);

  sys.coupling = Eigen::MatrixXd::Zero(sys.dim, 2 * bases.m_lambda);
  sys.coupling.block(sys.utilde_offset, 0, nt, 2 * bases.m_lambda) =
      sys.mtilde.transpose();

  const Eigen::MatrixXd& ext = sys.extension;
  const Eigen::MatrixXd mt = sys.mass_psi_u.transpose();
  sys.S.assign(grid.steps, Eigen::MatrixXd::Zero(sys.dim, sys.dim));
  for (std::size_t n = 0; n < grid.steps; ++n) {
    Eigen::MatrixXd& s = sys.S[n];
    const double delta = (n == 0) ? 1.0 : 0.0;
    const std::size_t op1 = sys.psi1_offset, ou = sys.u_offset;
    const std::size_t op2 = sys.psi2_offset, ot = sys.utilde_offset;

    s.block(op1, op1, np, np) = b1.V[n];
    s.block(op1, ou, np, nu) = -b1.K[n] + delta * 0.5 * sys.mass_psi_u;
    s.block(op2, ou, np, nu) = -b2.K[n] + delta * 0.5 * sys.mass_psi_u;
    s.block(op2, op2, np, np) = b2.V[n];
    s.block(op2, ot, np, nt) =
        (b2.K[n] - delta * 0.5 * sys.mass_psi_u) * ext;

    if (formulation == formulation_kind::symmetric) {
      s.block(ou, op1, nu, np) = -b1.K[n].transpose() + delta * 0.5 * mt;
      s.block(ou, ou, nu, nu) = b1.W[n] + b2.W[n];
      s.block(ou, op2, nu, np) = -b2.K[n].transpose() + delta * 0.5 * mt;
      s.block(ou, ot, nu, nt) = -b2.W[n] * ext;
      s.block(ot, ou, nt, nu) = -ext.transpose() * b2.W[n];
      s.block(ot, op2, nt, np) =
          ext.transpose() * (b2.K[n].transpose() - delta * 0.5 * mt);
      s.block(ot, ot, nt, nt) = ext.transpose() * b2.W[n] * ext;
    } else if (n == 0) {
      s.block(ou, op1, nu, np) = mt;
      s.block(ou, op2, nu, np) = mt;
      s.block(ot, op2, nt, np) = -ext.transpose() * mt;
    }
  }
  return sys;
}

std::vector<Eigen::VectorXd> compose_rhs(
    const block_system& system,
    const std::vector<Eigen::VectorXd>& moments_u) {
  std::vector<Eigen::VectorXd> rhs(moments_u.size(),
                                   Eigen::VectorXd::Zero(system.dim));
  for (std::size_t l = 0; l < moments_u.size(); ++l) {
    rhs[l].segment(system.u_offset, 2 * system.m_u) = moments_u[l];
    if (system.bilateral) {
      rhs[l].segment(system.utilde_offset, 2 * system.m_utilde) =
          -system.extension.transpose() * moments_u[l];
    }
  }
  return rhs;
}

}  // namespace stbem
