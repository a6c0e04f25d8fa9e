// Declarative run descriptions: geometry, materials, loads, gap,
// friction law, discretization and solver parameters, parsed from a
// sectioned key-value text format (documented in the README) or built
// from the bundled example constructors.  A validated scenario is
// immutable and can be serialized back to text (round-trip stable) or
// to JSON for provenance next to run outputs.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "stbem/assembly.h"
#include "stbem/contact.h"
#include "stbem/material.h"
#include "stbem/mesh.h"
#include "stbem/spaces.h"

namespace stbem {

struct scenario_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form scalar function of (t, x, y).  Grammar: numeric literals,
// the variables t, x, y, binary + - * / ^ (usual precedence, ^ binds
// right), unary -, parentheses, tanh(expr), sqrt(expr) and the
// right-continuous step H[expr] with H[0] = 1.
class expression {
 public:
  expression();                     // the constant 0
  static expression parse(const std::string& text);
  static expression constant(double v);

  double operator()(double t, double x, double y) const;
  const std::string& text() const { return text_; }
  bool is_zero() const;             // literal "0" / default constructed

  friend bool operator==(const expression& a, const expression& b) {
    return a.text_ == b.text_;
  }

 private:
  struct program;
  std::shared_ptr<const program> prog_;
  std::string text_;
};

enum class problem_kind { unilateral, bilateral };

enum class mesh_kind { square, circle };

// Square sides are numbered in build order: 0 bottom, 1 right, 2 top,
// 3 left; side -1 addresses every element (the only choice for
// circles).
struct mesh_spec {
  mesh_kind kind = mesh_kind::square;
  point2 center{0.0, 0.0};
  double side = 1.0;                 // square edge length
  double radius = 1.0;               // circle radius
  std::size_t elements_per_side = 8; // square
  std::size_t elements = 32;         // circle
  std::array<boundary_part, 4> square_parts{
      boundary_part::neumann, boundary_part::neumann, boundary_part::neumann,
      boundary_part::neumann};       // bottom, right, top, left
  boundary_part circle_part = boundary_part::contact_unilateral;

  bool operator==(const mesh_spec&) const = default;
};

struct load_entry {
  int side = -1;                     // square side index, -1 = all
  expression fx, fy;

  bool operator==(const load_entry&) const = default;
};

enum class gap_kind {
  zero,         // g = 0 on the contact part
  normal_gap,   // expr(t, x, y) is the scalar normal gap directly
  plane_below,  // horizontal obstacle at height(t); the gap at a node
                // is its distance to the plane along the outward normal
};

struct gap_spec {
  gap_kind kind = gap_kind::zero;
  expression expr;     // normal_gap
  expression height;   // plane_below
  // Restrict the multiplier to elements whose outward normal points
  // downward (obstacle approaching from below).
  bool only_downward_normals = false;

  bool operator==(const gap_spec&) const = default;
};

struct friction_spec {
  friction_law_kind law = friction_law_kind::frictionless;
  double value = 0.0;  // Tresca threshold or Coulomb coefficient

  bool operator==(const friction_spec&) const = default;
};

struct output_spec {
  bool energy = true;
  bool multiplier = false;
  bool uzawa_trace = false;
  std::vector<point2> trace_points;
  std::vector<double> snapshot_times;
  double magnification = 1.0;

  bool operator==(const output_spec&) const = default;
};

struct scenario {
  std::string name = "scenario";
  problem_kind kind = problem_kind::unilateral;
  formulation_kind formulation = formulation_kind::nonsymmetric;
  mesh_spec mesh;
  material mat1{1.0, 0.5, 1.0};
  material mat2{1.0, 0.5, 1.0};  // second body (bilateral)
  bool has_material2 = false;    // material2 section present
  double horizon = 1.0;
  std::size_t steps = 8;
  std::vector<load_entry> loads;
  gap_spec gap;
  friction_spec friction;
  uzawa_config uzawa;
  output_spec output;
};

bool operator==(const scenario& a, const scenario& b);

// Parses the sectioned key-value format.  Errors carry the line number
// and offending key.
scenario parse_scenario(const std::string& text);
scenario parse_scenario_file(const std::string& path);

// Canonical text form; parse(serialize(s)) == s.
std::string serialize_scenario(const scenario& sc);

// JSON echo of every field, for provenance files.
std::string scenario_to_json(const scenario& sc);

// Structural checks beyond parsing: positive discretization, material
// admissibility, finite expressions on the space-time domain,
// nonnegative friction value, part/kind consistency.  parse_scenario
// already calls this.
void validate_scenario(const scenario& sc);

// The four bundled experiments.  variant in {"", "none", "tresca",
// "coulomb"}; "" selects each example's default law.  Unavailable
// combinations (Tresca for examples 2-4) throw scenario_error.
scenario builtin_example(int n, const std::string& variant = "");

// Everything derived from a scenario that the solver pipeline consumes.
struct scenario_build {
  boundary_mesh mesh;
  space_bases bases;
  time_grid grid;
  material mat1, mat2;
  bool bilateral = false;
  formulation_kind formulation = formulation_kind::nonsymmetric;
  load_function load;              // null when no loads are given
  gap_function gap;                // null when the gap is identically 0
  friction_law law;
  uzawa_config uzawa;
  std::vector<bool> lambda_mask;   // empty = all participate
  const std::vector<bool>* mask_ptr() const {
    return lambda_mask.empty() ? nullptr : &lambda_mask;
  }
};

scenario_build build_scenario(const scenario& sc);

}  // namespace stbem
