#include "stbem/quadrature.h"

namespace stbem {

namespace {

constexpr double kMergeTol = 1e-12;

double dot(const point2& u, const point2& v) {
  return u[0] * v[0] + u[1] * v[1];
}

point2 diff(const point2& u, const point2& v) {
  return {u[0] - v[0], u[1] - v[1]};
}

bool same_point(const point2& p, const point2& q, double scale) {
  return std::hypot(p[0] - q[0], p[1] - q[1]) <= 1e-12 * scale;
}

// Distance from point p to the segment g.
double point_segment_distance(const point2& p, const element_geometry& g) {
  const point2 ab = diff(g.b, g.a);
  const point2 ap = diff(p, g.a);
  const double t = std::clamp(dot(ap, ab) / dot(ab, ab), 0.0, 1.0);
  const point2 c = g.at(t);
  return std::hypot(p[0] - c[0], p[1] - c[1]);
}

}  // namespace

element_geometry element_geometry_of(const boundary_mesh& mesh,
                                     std::size_t e, bool flip_normal) {
  element_geometry g;
  g.a = mesh.node_a(e);
  g.b = mesh.node_b(e);
  g.h = mesh.length[e];
  const double sgn = flip_normal ? -1.0 : 1.0;
  g.normal = {sgn * mesh.normal[e][0], sgn * mesh.normal[e][1]};
  g.tangent = {g.normal[1], -g.normal[0]};
  return g;
}

pair_relation classify_pair(const element_geometry& gx,
                            const element_geometry& gy) {
  const double scale = std::max(gx.h, gy.h);
  pair_relation rel;
  if (same_point(gx.a, gy.a, scale) && same_point(gx.b, gy.b, scale)) {
    rel.kind = pair_kind::coincident;
    return rel;
  }
  // One shared endpoint: record its parameter on each element.
  const bool aa = same_point(gx.a, gy.a, scale);
  const bool ab = same_point(gx.a, gy.b, scale);
  const bool ba = same_point(gx.b, gy.a, scale);
  const bool bb = same_point(gx.b, gy.b, scale);
  const int count = int(aa) + int(ab) + int(ba) + int(bb);
  if (count == 1) {
    rel.kind = pair_kind::adjacent;
    rel.shared_s = (ba || bb) ? 1.0 : 0.0;
    rel.shared_sq = (ab || bb) ? 1.0 : 0.0;
    return rel;
  }
  rel.kind = pair_kind::separated;
  return rel;
}

void pair_distance_range(const element_geometry& gx,
                         const element_geometry& gy, double& rmin,
                         double& rmax) {
  rmax = 0.0;
  for (const point2& p : {gx.a, gx.b}) {
    for (const point2& q : {gy.a, gy.b}) {
      rmax = std::max(rmax, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
  }
  rmin = std::min({point_segment_distance(gx.a, gy),
                   point_segment_distance(gx.b, gy),
                   point_segment_distance(gy.a, gx),
                   point_segment_distance(gy.b, gx)});
}

void circle_crossings(const element_geometry& g, const point2& p,
                      double radius, std::vector<double>& out) {
  // |g.a + s (g.b - g.a) - p|^2 = radius^2, quadratic in s.
  const point2 ab = diff(g.b, g.a);
  const point2 ap = diff(g.a, p);
  const double aa = dot(ab, ab);
  const double bb = 2.0 * dot(ap, ab);
  const double cc = dot(ap, ap) - radius * radius;
  const double disc = bb * bb - 4.0 * aa * cc;
  if (disc <= 0.0) return;
  const double sq = std::sqrt(disc);
  for (const double s : {(-bb - sq) / (2.0 * aa), (-bb + sq) / (2.0 * aa)}) {
    if (s > 0.0 && s < 1.0) out.push_back(s);
  }
}

void outer_breakpoints(const element_geometry& gx,
                       const element_geometry& gy, double radius,
                       std::vector<double>& out) {
  // Crossings of the distance to either endpoint of gy.
  circle_crossings(gx, gy.a, radius, out);
  circle_crossings(gx, gy.b, radius, out);
  // Tangency: distance from gx.at(s) to the line through gy equals
  // radius with the foot inside the segment.  The signed distance is
  // linear in s.
  const point2 n = gy.normal;
  const double d0 = dot(diff(gx.a, gy.a), n);
  const double d1 = dot(diff(gx.b, gy.a), n);
  const point2 tau = diff(gy.b, gy.a);
  const double tt = dot(tau, tau);
  for (const double target : {radius, -radius}) {
    if (d1 == d0) continue;
    const double s = (target - d0) / (d1 - d0);
    if (s <= 0.0 || s >= 1.0) continue;
    const point2 x = gx.at(s);
    const double foot = dot(diff(x, gy.a), tau) / tt;
    if (foot > 0.0 && foot < 1.0) out.push_back(s);
  }
}

std::vector<double> make_cells(std::vector<double> breakpoints) {
  breakpoints.push_back(0.0);
  breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  std::vector<double> cells;
  for (double b : breakpoints) {
    const double v = std::clamp(b, 0.0, 1.0);
    if (cells.empty() || v - cells.back() > kMergeTol) {
      cells.push_back(v);
    }
  }
  if (cells.size() < 2) cells = {0.0, 1.0};
  return cells;
}

std::vector<double> graded_cells(std::size_t levels, double ratio,
                                 bool toward_zero) {
  std::vector<double> cells;
  cells.push_back(0.0);
  double edge = 1.0;
  std::vector<double> marks;
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    edge *= ratio;
    marks.push_back(edge);
  }
  for (auto it = marks.rbegin(); it != marks.rend(); ++it) {
    cells.push_back(toward_zero ? *it : 1.0 - *it);
  }
  cells.push_back(1.0);
  std::sort(cells.begin(), cells.end());
  return cells;
}

}  // namespace stbem
