// Boundary meshes of straight segments with part labeling, outward
// normals and tangents.  Conventions: interior bodies are described by
// counterclockwise node chains; the outward normal of an element with
// travel direction d is n = (d_y, -d_x) (rotate -90 deg), and the stored
// tangent is the normal rotated by -90 deg again, tangent = (n_y, -n_x).
// The (tangent, normal) pair is right-handed; all tangential quantities
// (frictional traction, slip velocity) use this tangent sign globally.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace stbem {

// Raised for invalid geometry input (self-intersections, degenerate
// sides, wrong orientation).
struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class boundary_part {
  dirichlet,
  neumann,
  contact_unilateral,
  body_interface,
  contact_bilateral,
};

// Canonical names used in mesh CSV exports and scenario files.
std::string part_name(boundary_part part);
boundary_part part_from_name(const std::string& name);

using point2 = std::array<double, 2>;

struct boundary_mesh {
  std::vector<point2> nodes;
  // Ordered node index pairs in travel order along the boundary.
  std::vector<std::array<std::size_t, 2>> elements;
  std::vector<boundary_part> part;
  std::vector<point2> normal;   // outward unit normal
  std::vector<point2> tangent;  // = normal rotated by -90 deg
  std::vector<double> length;
  double h_max = 0.0;
  bool closed = false;

  std::size_t n_elements() const { return elements.size(); }
  std::size_t n_nodes() const { return nodes.size(); }

  point2 node_a(std::size_t e) const { return nodes[elements[e][0]]; }
  point2 node_b(std::size_t e) const { return nodes[elements[e][1]]; }
};

struct element_frame_data {
  point2 midpoint;
  point2 normal;
  point2 tangent;
  double length;
};

element_frame_data element_frame(const boundary_mesh& mesh, std::size_t i);

// Uniformly subdivides each polygon side into n_per_side elements.
// Vertices must trace a simple closed polygon counterclockwise; parts
// holds one tag per side (or a single tag applied to every side).
boundary_mesh build_polygon_mesh(const std::vector<point2>& vertices,
                                 std::size_t n_per_side,
                                 const std::vector<boundary_part>& parts);

// Regular inscribed polygon approximating a circle, counterclockwise,
// with a single part tag for all elements.
boundary_mesh build_circle_mesh(point2 center, double radius,
                                std::size_t n_elements,
                                boundary_part part);

// CSV export with columns element_id,x0,y0,x1,y1,part,nx,ny.
void export_mesh_csv(const boundary_mesh& mesh, std::ostream& out);

}  // namespace stbem
