#include "stbem/mesh.h"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace stbem {

namespace {

double cross(const point2& o, const point2& a, const point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Proper or improper intersection test for closed segments [a,b], [c,d].
bool segments_intersect(const point2& a, const point2& b, const point2& c,
                        const point2& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](const point2& p, const point2& q, const point2& r) {
    return std::min(p[0], r[0]) <= q[0] && q[0] <= std::max(p[0], r[0]) &&
           std::min(p[1], r[1]) <= q[1] && q[1] <= std::max(p[1], r[1]);
  };
  if (d1 == 0 && on_segment(c, a, d)) return true;
  if (d2 == 0 && on_segment(c, b, d)) return true;
  if (d3 == 0 && on_segment(a, c, b)) return true;
  if (d4 == 0 && on_segment(a, d, b)) return true;
  return false;
}

void validate_simple_polygon(const std::vector<point2>& v) {
  const std::size_t m = v.size();
  if (m < 3) {
    throw geometry_error("polygon needs at least 3 vertices");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const point2& a = v[i];
    const point2& b = v[(i + 1) % m];
    if (std::hypot(b[0] - a[0], b[1] - a[1]) <= 0.0) {
      throw geometry_error("polygon has a zero-length side");
    }
  }
  // Non-adjacent side pairs must not touch.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent =
          (j == i + 1) || (i == 0 && j == m - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m])) {
        throw geometry_error("polygon is self-intersecting");
      }
    }
  }
  double area2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const point2& a = v[i];
    const point2& b = v[(i + 1) % m];
    area2 += a[0] * b[1] - b[0] * a[1];
  }
  if (area2 <= 0.0) {
    throw geometry_error(
        "polygon vertices must be ordered counterclockwise");
  }
}

void finalize_frames(boundary_mesh& mesh) {
  const std::size_t ne = mesh.n_elements();
  mesh.normal.resize(ne);
  mesh.tangent.resize(ne);
  mesh.length.resize(ne);
  mesh.h_max = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    const point2 a = mesh.node_a(e);
    const point2 b = mesh.node_b(e);
    const double h = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (h <= 0.0) {
      throw geometry_error("mesh element has zero length");
    }
    const double dx = (b[0] - a[0]) / h;
    const double dy = (b[1] - a[1]) / h;
    mesh.length[e] = h;
    mesh.h_max = std::max(mesh.h_max, h);
    // Outward normal for a counterclockwise chain: travel rotated -90.
    mesh.normal[e] = {dy, -dx};
    // Stored tangent: normal rotated -90 (equals minus the travel
    // direction); arc-length derivatives in the bilinear forms are
    // taken along this tangent.
    mesh.tangent[e] = {-dx, -dy};
  }
}

}  // namespace

std::string part_name(boundary_part part) {
  switch (part) {
    case boundary_part::dirichlet: return "Dirichlet";
    case boundary_part::neumann: return "Neumann";
    case boundary_part::contact_unilateral: return "ContactUnilateral";
    case boundary_part::body_interface: return "Interface";
    case boundary_part::contact_bilateral: return "ContactBilateral";
  }
  throw std::logic_error("unknown boundary part");
}

boundary_part part_from_name(const std::string& name) {
  if (name == "Dirichlet") return boundary_part::dirichlet;
  if (name == "Neumann") return boundary_part::neumann;
  if (name == "ContactUnilateral") return boundary_part::contact_unilateral;
  if (name == "Interface") return boundary_part::body_interface;
  if (name == "ContactBilateral") return boundary_part::contact_bilateral;
  throw geometry_error("unknown boundary part name: " + name);
}

element_frame_data element_frame(const boundary_mesh& mesh, std::size_t i) {
  if (i >= mesh.n_elements()) {
    throw std::out_of_range("element index out of range");
  }
  const point2 a = mesh.node_a(i);
  const point2 b = mesh.node_b(i);
  return element_frame_data{
      {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])},
      mesh.normal[i],
      mesh.tangent[i],
      mesh.length[i],
  };
}

boundary_mesh build_polygon_mesh(const std::vector<point2>& vertices,
                                 std::size_t n_per_side,
                                 const std::vector<boundary_part>& parts) {
  if (n_per_side < 1) {
    throw geometry_error("n_per_side must be at least 1");
  }
  const std::size_t m = vertices.size();
  if (!(parts.size() == m || parts.size() == 1)) {
    throw geometry_error("need one part tag per side (or a single tag)");
  }
  validate_simple_polygon(vertices);

  boundary_mesh mesh;
  mesh.closed = true;
  mesh.nodes.reserve(m * n_per_side);
  mesh.elements.reserve(m * n_per_side);
  mesh.part.reserve(m * n_per_side);
  for (std::size_t side = 0; side < m; ++side) {
    const point2& a = vertices[side];
    const point2& b = vertices[(side + 1) % m];
    const boundary_part tag = parts.size() == 1 ? parts[0] : parts[side];
    for (std::size_t k = 0; k < n_per_side; ++k) {
      const double s = static_cast<double>(k) / n_per_side;
      mesh.nodes.push_back(
          {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])});
      mesh.part.push_back(tag);
    }
  }
  const std::size_t total = mesh.nodes.size();
  for (std::size_t k = 0; k < total; ++k) {
    mesh.elements.push_back({k, (k + 1) % total});
  }
  finalize_frames(mesh);
  return mesh;
}

boundary_mesh build_circle_mesh(point2 center, double radius,
                                std::size_t n_elements, boundary_part part) {
  if (radius <= 0.0) {
    throw geometry_error("circle radius must be positive");
  }
  if (n_elements < 3) {
    throw geometry_error("circle mesh needs at least 3 elements");
  }
  boundary_mesh mesh;
  mesh.closed = true;
  mesh.nodes.reserve(n_elements);
  for (std::size_t k = 0; k < n_elements; ++k) {
    const double theta =
        2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_elements);
    mesh.nodes.push_back({center[0] + radius * std::cos(theta),
                          center[1] + radius * std::sin(theta)});
  }
  for (std::size_t k = 0; k < n_elements; ++k) {
    mesh.elements.push_back({k, (k + 1) % n_elements});
    mesh.part.push_back(part);
  }
  finalize_frames(mesh);
  return mesh;
}

void export_mesh_csv(const boundary_mesh& mesh, std::ostream& out) {
  out << "element_id,x0,y0,x1,y1,part,nx,ny\n";
  out.precision(17);
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const point2 a = mesh.node_a(e);
    const point2 b = mesh.node_b(e);
    out << e << ',' << a[0] << ',' << a[1] << ',' << b[0] << ',' << b[1]
        << ',' << part_name(mesh.part[e]) << ',' << mesh.normal[e][0] << ','
        << mesh.normal[e][1] << '\n';
  }
}

}  // namespace stbem
