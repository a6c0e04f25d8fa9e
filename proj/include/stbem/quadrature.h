// Spatial quadrature for Galerkin element pairs.  Integrands are
// piecewise smooth between wavefront circles r = c * t_k and have at
// most logarithmic singularities on the diagonal after the energetic
// time combination, so three rules cover all cases:
//   separated  - tensor Gauss with subdivision at wavefront breakpoints
//                (outer direction: endpoint and tangency crossings;
//                inner direction: exact circle crossings per outer
//                point);
//   coincident - correlation variable w = s - s' with symmetric
//                geometric grading toward w = 0 merged with wavefront
//                breakpoints (the kernel is constant along the inner
//                translation direction, so evaluations cache well);
//   adjacent   - tensor product of rules graded geometrically toward
//                the shared corner, merged with wavefront breakpoints.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "stbem/gauss.h"
#include "stbem/mesh.h"

namespace stbem {

struct quadrature_config {
  std::size_t gauss_order = 16;    // points per smooth cell
  std::size_t graded_order = 8;    // points per graded cell
  std::size_t graded_levels = 14;  // geometric refinement levels
  double grading_ratio = 0.2;
};

// Minimal element frame used by the quadrature drivers; decoupled from
// boundary_mesh so tests can build arbitrary pairs directly.
struct element_geometry {
  point2 a{};
  point2 b{};        // endpoints in travel order
  point2 normal{};   // unit normal passed to the kernels
  point2 tangent{};  // = (normal_y, -normal_x)
  double h = 0.0;

  point2 at(double s) const {
    return {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
  }
};

element_geometry element_geometry_of(const boundary_mesh& mesh,
                                     std::size_t e, bool flip_normal = false);

enum class pair_kind { separated, coincident, adjacent };

struct pair_relation {
  pair_kind kind = pair_kind::separated;
  // For adjacent pairs: parameter value (0 or 1) of the shared point on
  // each element.
  double shared_s = 0.0;
  double shared_sq = 0.0;
};

// Classification by node coordinates (tolerance relative to h).
pair_relation classify_pair(const element_geometry& gx,
                            const element_geometry& gy);

// Min/max distance between the two segments.
void pair_distance_range(const element_geometry& gx,
                         const element_geometry& gy, double& rmin,
                         double& rmax);

// --- breakpoint helpers (exposed for tests) -------------------------------

// Sorted parameters in (0,1) where |g.at(s) - p| = radius.
void circle_crossings(const element_geometry& g, const point2& p,
                      double radius, std::vector<double>& out);

// Sorted parameters in (0,1) where the distance from gx.at(s) to the
// segment gy equals radius (endpoint distances and interior tangency).
void outer_breakpoints(const element_geometry& gx,
                       const element_geometry& gy, double radius,
                       std::vector<double>& out);

// Builds a sorted, deduplicated cell decomposition of [0,1] from
// breakpoints.
std::vector<double> make_cells(std::vector<double> breakpoints);

// Geometric cell decomposition of [0,1] refined toward 0 (toward_zero)
// or toward 1.
std::vector<double> graded_cells(std::size_t levels, double ratio,
                                 bool toward_zero);

// --- drivers --------------------------------------------------------------

// Tensor Gauss over a separated pair with wavefront subdivision.  radii
// must be sorted ascending; only radii intersecting the pair's distance
// range are used.  fn(s, sq, weight) receives travel parameters on gx
// and gy; weight includes both Jacobians h_x * h_y.
template <typename F>
void separated_pair_quadrature(const element_geometry& gx,
                               const element_geometry& gy,
                               const std::vector<double>& radii,
                               const quadrature_config& cfg, F&& fn) {
  double rmin = 0.0, rmax = 0.0;
  pair_distance_range(gx, gy, rmin, rmax);
  std::vector<double> active;
  for (double rho : radii) {
    if (rho > rmin && rho < rmax) active.push_back(rho);
  }

  std::vector<double> outer;
  for (double rho : active) outer_breakpoints(gx, gy, rho, outer);
  const std::vector<double> outer_cells = make_cells(std::move(outer));

  const gauss_rule& rule = gauss_legendre(cfg.gauss_order);
  std::vector<double> inner;
  for (std::size_t c = 0; c + 1 < outer_cells.size(); ++c) {
    const double s0 = outer_cells[c];
    const double ws = outer_cells[c + 1] - s0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double s = s0 + ws * rule.x[i];
      const double wi = ws * rule.w[i];
      const point2 x = gx.at(s);
      inner.clear();
      for (double rho : active) circle_crossings(gy, x, rho, inner);
      const std::vector<double> inner_cells = make_cells(std::move(inner));
      inner.clear();
      for (std::size_t d = 0; d + 1 < inner_cells.size(); ++d) {
        const double q0 = inner_cells[d];
        const double wq = inner_cells[d + 1] - q0;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
          const double sq = q0 + wq * rule.x[j];
          fn(s, sq, wi * wq * rule.w[j] * gx.h * gy.h);
        }
      }
    }
  }
}

// Coincident pair (gx and gy describe the same element).  Integrates in
// the correlation variable w = s - sq with geometric grading toward
// w = 0 on both signs, then in the translation variable with plain
// Gauss (shape products are polynomials).  For fixed w the difference
// x(s) - y(sq) is constant, so kernel evaluations repeat along the
// inner loop and profit from a last-point cache in the callback.
template <typename F>
void coincident_pair_quadrature(const element_geometry& g,
                                const std::vector<double>& radii,
                                const quadrature_config& cfg, F&& fn) {
  std::vector<double> cells = graded_cells(cfg.graded_levels,
                                           cfg.grading_ratio, true);
  for (double rho : radii) {
    const double w = rho / g.h;
    if (w > 0.0 && w < 1.0) cells.push_back(w);
  }
  cells = make_cells(std::move(cells));

  const gauss_rule& wrule = gauss_legendre(cfg.graded_order);
  const gauss_rule& srule = gauss_legendre(4);
  for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
    const double w0 = cells[c];
    const double dw = cells[c + 1] - w0;
    for (std::size_t i = 0; i < wrule.x.size(); ++i) {
      const double w = w0 + dw * wrule.x[i];
      const double wgt = dw * wrule.w[i];
      // s ranges over [w, 1]; both signs of the correlation variable.
      const double span = 1.0 - w;
      if (span <= 0.0) continue;
      for (std::size_t j = 0; j < srule.x.size(); ++j) {
        const double s = w + span * srule.x[j];
        const double wj = wgt * span * srule.w[j] * g.h * g.h;
        fn(s, s - w, wj);      // s > sq branch
        fn(s - w, s, wj);      // s < sq branch
      }
    }
  }
}

// Adjacent pair sharing one endpoint.  Tensor product of rules graded
// toward the shared corner, with wavefront breakpoints merged in.
template <typename F>
void adjacent_pair_quadrature(const element_geometry& gx,
                              const element_geometry& gy,
                              const pair_relation& rel,
                              const std::vector<double>& radii,
                              const quadrature_config& cfg, F&& fn) {
  const bool sx_zero = rel.shared_s == 0.0;
  const bool sq_zero = rel.shared_sq == 0.0;
  std::vector<double> xcells = graded_cells(cfg.graded_levels,
                                            cfg.grading_ratio, sx_zero);
  std::vector<double> ycells = graded_cells(cfg.graded_levels,
                                            cfg.grading_ratio, sq_zero);
  for (double rho : radii) {
    outer_breakpoints(gx, gy, rho, xcells);
    outer_breakpoints(gy, gx, rho, ycells);
  }
  xcells = make_cells(std::move(xcells));
  ycells = make_cells(std::move(ycells));

  const gauss_rule& rule = gauss_legendre(cfg.graded_order);
  for (std::size_t c = 0; c + 1 < xcells.size(); ++c) {
    const double s0 = xcells[c];
    const double ws = xcells[c + 1] - s0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double s = s0 + ws * rule.x[i];
      const double wi = ws * rule.w[i];
      for (std::size_t d = 0; d + 1 < ycells.size(); ++d) {
        const double q0 = ycells[d];
        const double wq = ycells[d + 1] - q0;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
          const double sq = q0 + wq * rule.x[j];
          fn(s, sq, wi * wq * rule.w[j] * gx.h * gy.h);
        }
      }
    }
  }
}

// Dispatches on the pair relation.
template <typename F>
void pair_quadrature(const element_geometry& gx, const element_geometry& gy,
                     const std::vector<double>& radii,
                     const quadrature_config& cfg, F&& fn) {
  const pair_relation rel = classify_pair(gx, gy);
  switch (rel.kind) {
    case pair_kind::separated:
      separated_pair_quadrature(gx, gy, radii, cfg, fn);
      break;
    case pair_kind::coincident:
      coincident_pair_quadrature(gx, radii, cfg, fn);
      break;
    case pair_kind::adjacent:
      adjacent_pair_quadrature(gx, gy, rel, radii, cfg, fn);
      break;
  }
}

}  // namespace stbem
