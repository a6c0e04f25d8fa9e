#include "stbem/scenario.h"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace stbem {

// ---------------------------------------------------------------------------
// Expression grammar
// ---------------------------------------------------------------------------

namespace {

enum class opcode {
  push_const,
  push_t,
  push_x,
  push_y,
  add,
  sub,
  mul,
  div,
  pow,
  neg,
  fn_tanh,
  fn_sqrt,
  fn_step,  // H[v] = 1 for v >= 0, else 0
};

struct instr {
  opcode op;
  double value = 0.0;
};

}  // namespace

struct expression::program {
  std::vector<instr> code;
  std::size_t max_depth = 0;
};

namespace {

class expr_parser {
 public:
  explicit expr_parser(const std::string& text) : text_(text) {}

  std::vector<instr> parse() {
    std::vector<instr> code;
    parse_sum(code);
    skip_space();
    if (pos_ != text_.size()) {
      fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    }
    if (code.empty()) fail("empty expression");
    return code;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw scenario_error("expression '" + text_ + "', position " +
                         std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void parse_sum(std::vector<instr>& code) {
    parse_product(code);
    for (;;) {
      if (accept('+')) {
        parse_product(code);
        code.push_back({opcode::add});
      } else if (accept('-')) {
        parse_product(code);
        code.push_back({opcode::sub});
      } else {
        return;
      }
    }
  }

  void parse_product(std::vector<instr>& code) {
    parse_signed(code);
    for (;;) {
      if (accept('*')) {
        parse_signed(code);
        code.push_back({opcode::mul});
      } else if (accept('/')) {
        parse_signed(code);
        code.push_back({opcode::div});
      } else {
        return;
      }
    }
  }

  void parse_signed(std::vector<instr>& code) {
    if (accept('-')) {
      parse_signed(code);
      code.push_back({opcode::neg});
    } else if (accept('+')) {
      parse_signed(code);
    } else {
      parse_power(code);
    }
  }

  void parse_power(std::vector<instr>& code) {
    parse_atom(code);
    if (accept('^')) {
      parse_signed(code);  // right associative, allows 2^-3
      code.push_back({opcode::pow});
    }
  }

  void parse_atom(std::vector<instr>& code) {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(start, &end);
      if (end == start) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - start);
      code.push_back({opcode::push_const, v});
      return;
    }
    if (accept('(')) {
      parse_sum(code);
      expect(')');
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t n = 0;
      while (pos_ + n < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_ + n]))) {
        ++n;
      }
      const std::string word = text_.substr(pos_, n);
      pos_ += n;
      if (word == "t") {
        code.push_back({opcode::push_t});
      } else if (word == "x") {
        code.push_back({opcode::push_x});
      } else if (word == "y") {
        code.push_back({opcode::push_y});
      } else if (word == "tanh") {
        expect('(');
        parse_sum(code);
        expect(')');
        code.push_back({opcode::fn_tanh});
      } else if (word == "sqrt") {
        expect('(');
        parse_sum(code);
        expect(')');
        code.push_back({opcode::fn_sqrt});
      } else if (word == "H") {
        expect('[');
        parse_sum(code);
        expect(']');
        code.push_back({opcode::fn_step});
      } else {
        fail("unknown identifier '" + word + "'");
      }
      return;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::size_t stack_depth(const std::vector<instr>& code) {
  std::size_t depth = 0, peak = 0;
  for (const instr& in : code) {
    switch (in.op) {
      case opcode::push_const:
      case opcode::push_t:
      case opcode::push_x:
      case opcode::push_y:
        ++depth;
        break;
      case opcode::add:
      case opcode::sub:
      case opcode::mul:
      case opcode::div:
      case opcode::pow:
        --depth;
        break;
      default:
        break;  // unary ops keep the depth
    }
    peak = std::max(peak, depth);
  }
  return peak;
}

}  // namespace

expression::expression() {
  auto prog = std::make_shared<program>();
  prog->code = {{opcode::push_const, 0.0}};
  prog->max_depth = 1;
  prog_ = std::move(prog);
  text_ = "0";
}

expression expression::constant(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return parse(os.str());
}

expression expression::parse(const std::string& text) {
  expression e;
  auto prog = std::make_shared<program>();
  prog->code = expr_parser(text).parse();
  prog->max_depth = stack_depth(prog->code);
  if (prog->max_depth > 64) {
    throw scenario_error("expression '" + text + "': nested too deeply");
  }
  e.prog_ = std::move(prog);
  e.text_ = text;
  return e;
}

double expression::operator()(double t, double x, double y) const {
  double stack[64];
  std::size_t top = 0;
  for (const instr& in : prog_->code) {
    switch (in.op) {
      case opcode::push_const: stack[top++] = in.value; break;
      case opcode::push_t: stack[top++] = t; break;
      case opcode::push_x: stack[top++] = x; break;
      case opcode::push_y: stack[top++] = y; break;
      case opcode::add: --top; stack[top - 1] += stack[top]; break;
      case opcode::sub: --top; stack[top - 1] -= stack[top]; break;
      case opcode::mul: --top; stack[top - 1] *= stack[top]; break;
      case opcode::div: --top; stack[top - 1] /= stack[top]; break;
      case opcode::pow:
        --top;
        stack[top - 1] = std::pow(stack[top - 1], stack[top]);
        break;
      case opcode::neg: stack[top - 1] = -stack[top - 1]; break;
      case opcode::fn_tanh: stack[top - 1] = std::tanh(stack[top - 1]); break;
      case opcode::fn_sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
      case opcode::fn_step:
        stack[top - 1] = stack[top - 1] >= 0.0 ? 1.0 : 0.0;
        break;
    }
  }
  return stack[0];
}

bool expression::is_zero() const {
  return prog_->code.size() == 1 && prog_->code[0].op == opcode::push_const &&
         prog_->code[0].value == 0.0;
}

// ---------------------------------------------------------------------------
// Equality
// ---------------------------------------------------------------------------

namespace {

bool same_material(const material& a, const material& b) {
  return a.cp == b.cp && a.cs == b.cs && a.rho == b.rho;
}

bool same_uzawa(const uzawa_config& a, const uzawa_config& b) {
  return a.rho == b.rho && a.eps == b.eps && a.max_iters == b.max_iters &&
         a.coulomb_previous_iterate == b.coulomb_previous_iterate;
}

}  // namespace

bool operator==(const scenario& a, const scenario& b) {
  return a.name == b.name && a.kind == b.kind &&
         a.formulation == b.formulation && a.mesh == b.mesh &&
         same_material(a.mat1, b.mat1) && same_material(a.mat2, b.mat2) &&
         a.has_material2 == b.has_material2 && a.horizon == b.horizon &&
         a.steps == b.steps && a.loads == b.loads && a.gap == b.gap &&
         a.friction == b.friction && same_uzawa(a.uzawa, b.uzawa) &&
         a.output == b.output;
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct kv_line {
  std::size_t line_no;
  std::string key, value;
};

// Section name -> ordered key/value pairs, with duplicate-key detection.
struct section_data {
  std::size_t line_no = 0;
  std::vector<kv_line> entries;
};

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw scenario_error("line " + std::to_string(line) + ": " + what);
}

std::map<std::string, section_data> split_sections(const std::string& text) {
  std::map<std::string, section_data> sections;
  std::istringstream in(text);
  std::string raw, current;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(line_no, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) fail_at(line_no, "empty section name");
      if (sections.count(current)) {
        fail_at(line_no, "duplicate section [" + current + "]");
      }
      sections[current].line_no = line_no;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(line_no, "expected 'key = value' or '[section]'");
    }
    if (current.empty()) fail_at(line_no, "key outside of any section");
    kv_line kv{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (kv.key.empty()) fail_at(line_no, "empty key");
    for (const kv_line& prev : sections[current].entries) {
      if (prev.key == kv.key) {
        fail_at(line_no, "duplicate key '" + kv.key + "' in section [" +
                             current + "]");
      }
    }
    sections[current].entries.push_back(std::move(kv));
  }
  return sections;
}

double parse_double(const kv_line& kv) {
  try {
    std::size_t used = 0;
    const double v = std::stod(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail_at(kv.line_no,
            "key '" + kv.key + "': expected a number, got '" + kv.value + "'");
  }
}

std::size_t parse_size(const kv_line& kv) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(kv.value, &used);
    if (used != kv.value.size() || v < 0) throw std::invalid_argument("neg");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    fail_at(kv.line_no, "key '" + kv.key +
                            "': expected a nonnegative integer, got '" +
                            kv.value + "'");
  }
}

bool parse_bool(const kv_line& kv) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  fail_at(kv.line_no,
          "key '" + kv.key + "': expected true/false, got '" + kv.value + "'");
}

expression parse_expr(const kv_line& kv) {
  try {
    return expression::parse(kv.value);
  } catch (const scenario_error& e) {
    fail_at(kv.line_no, "key '" + kv.key + "': " + e.what());
  }
}

boundary_part parse_part(const kv_line& kv) {
  try {
    return part_from_name(kv.value);
  } catch (const std::exception&) {
    fail_at(kv.line_no,
            "key '" + kv.key + "': unknown boundary part '" + kv.value +
                "' (expected Dirichlet, Neumann, ContactUnilateral, "
                "Interface or ContactBilateral)");
  }
}

std::vector<double> parse_double_list(const kv_line& kv) {
  std::vector<double> out;
  std::istringstream in(kv.value);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail_at(kv.line_no,
              "key '" + kv.key + "': expected numbers, got '" + tok + "'");
    }
  }
  return out;
}

[[noreturn]] void unknown_key(const std::string& section, const kv_line& kv) {
  fail_at(kv.line_no,
          "unknown key '" + kv.key + "' in section [" + section + "]");
}

int side_index(const std::string& name) {
  if (name == "bottom") return 0;
  if (name == "right") return 1;
  if (name == "top") return 2;
  if (name == "left") return 3;
  if (name == "all") return -1;
  return -2;
}

const char* side_name(int side) {
  switch (side) {
    case 0: return "bottom";
    case 1: return "right";
    case 2: return "top";
    case 3: return "left";
    default: return "all";
  }
}

void read_material(const section_data& sec, const std::string& name,
                   material& mat) {
  double cp = mat.cp, cs = mat.cs, rho = mat.rho;
  for (const kv_line& kv : sec.entries) {
    if (kv.key == "cp") cp = parse_double(kv);
    else if (kv.key == "cs") cs = parse_double(kv);
    else if (kv.key == "rho") rho = parse_double(kv);
    else unknown_key(name, kv);
  }
  try {
    mat = material(cp, cs, rho);
  } catch (const std::exception& e) {
    fail_at(sec.line_no, "section [" + name + "]: " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// parse_scenario
// ---------------------------------------------------------------------------

scenario parse_scenario(const std::string& text) {
  auto sections = split_sections(text);
  scenario sc;

  static const std::vector<std::string> known = {
      "problem", "mesh",     "material", "material2", "time",
      "load",    "gap",      "friction", "uzawa",     "output"};
  for (const auto& [name, sec] : sections) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      fail_at(sec.line_no, "unknown section [" + name + "]");
    }
  }
  for (const char* required : {"problem", "mesh", "material", "time"}) {
    if (!sections.count(required)) {
      throw scenario_error("missing required section [" +
                           std::string(required) + "]");
    }
  }

  for (const kv_line& kv : sections["problem"].entries) {
    if (kv.key == "name") {
      sc.name = kv.value;
    } else if (kv.key == "kind") {
      if (kv.value == "unilateral") sc.kind = problem_kind::unilateral;
      else if (kv.value == "bilateral") sc.kind = problem_kind::bilateral;
      else fail_at(kv.line_no, "key 'kind': expected unilateral or bilateral");
    } else if (kv.key == "formulation") {
      if (kv.value == "symmetric")
        sc.formulation = formulation_kind::symmetric;
      else if (kv.value == "nonsymmetric")
        sc.formulation = formulation_kind::nonsymmetric;
      else
        fail_at(kv.line_no,
                "key 'formulation': expected symmetric or nonsymmetric");
    } else {
      unknown_key("problem", kv);
    }
  }

  for (const kv_line& kv : sections["mesh"].entries) {
    if (kv.key == "kind") {
      if (kv.value == "square") sc.mesh.kind = mesh_kind::square;
      else if (kv.value == "circle") sc.mesh.kind = mesh_kind::circle;
      else fail_at(kv.line_no, "key 'kind': expected square or circle");
    } else if (kv.key == "center") {
      const auto v = parse_double_list(kv);
      if (v.size() != 2) {
        fail_at(kv.line_no, "key 'center': expected two numbers");
      }
      sc.mesh.center = {v[0], v[1]};
    } else if (kv.key == "side") {
      sc.mesh.side = parse_double(kv);
    } else if (kv.key == "radius") {
      sc.mesh.radius = parse_double(kv);
    } else if (kv.key == "elements_per_side") {
      sc.mesh.elements_per_side = parse_size(kv);
    } else if (kv.key == "elements") {
      sc.mesh.elements = parse_size(kv);
    } else if (kv.key == "part_bottom") {
      sc.mesh.square_parts[0] = parse_part(kv);
    } else if (kv.key == "part_right") {
      sc.mesh.square_parts[1] = parse_part(kv);
    } else if (kv.key == "part_top") {
      sc.mesh.square_parts[2] = parse_part(kv);
    } else if (kv.key == "part_left") {
      sc.mesh.square_parts[3] = parse_part(kv);
    } else if (kv.key == "part") {
      sc.mesh.circle_part = parse_part(kv);
    } else {
      unknown_key("mesh", kv);
    }
  }

  read_material(sections["material"], "material", sc.mat1);
  sc.mat2 = sc.mat1;
  if (sections.count("material2")) {
    sc.has_material2 = true;
    read_material(sections["material2"], "material2", sc.mat2);
  }

  for (const kv_line& kv : sections["time"].entries) {
    if (kv.key == "horizon") sc.horizon = parse_double(kv);
    else if (kv.key == "steps") sc.steps = parse_size(kv);
    else unknown_key("time", kv);
  }

  if (sections.count("load")) {
    std::map<int, load_entry> by_side;
    for (const kv_line& kv : sections["load"].entries) {
      const std::size_t us = kv.key.rfind('_');
      const std::string side_str =
          us == std::string::npos ? std::string() : kv.key.substr(0, us);
      const std::string comp =
          us == std::string::npos ? std::string() : kv.key.substr(us + 1);
      const int side = side_index(side_str);
      if (side == -2 || (comp != "x" && comp != "y")) unknown_key("load", kv);
      auto& entry = by_side[side];
      entry.side = side;
      (comp == "x" ? entry.fx : entry.fy) = parse_expr(kv);
    }
    for (auto& [side, entry] : by_side) sc.loads.push_back(entry);
  }

  if (sections.count("gap")) {
    for (const kv_line& kv : sections["gap"].entries) {
      if (kv.key == "kind") {
        if (kv.value == "zero") sc.gap.kind = gap_kind::zero;
        else if (kv.value == "normal_gap") sc.gap.kind = gap_kind::normal_gap;
        else if (kv.value == "plane_below")
          sc.gap.kind = gap_kind::plane_below;
        else
          fail_at(kv.line_no,
                  "key 'kind': expected zero, normal_gap or plane_below");
      } else if (kv.key == "expr") {
        sc.gap.expr = parse_expr(kv);
      } else if (kv.key == "height") {
        sc.gap.height = parse_expr(kv);
      } else if (kv.key == "participation") {
        if (kv.value == "all") sc.gap.only_downward_normals = false;
        else if (kv.value == "downward_normals")
          sc.gap.only_downward_normals = true;
        else
          fail_at(kv.line_no,
                  "key 'participation': expected all or downward_normals");
      } else {
        unknown_key("gap", kv);
      }
    }
  }

  if (sections.count("friction")) {
    for (const kv_line& kv : sections["friction"].entries) {
      if (kv.key == "law") {
        if (kv.value == "none")
          sc.friction.law = friction_law_kind::frictionless;
        else if (kv.value == "tresca")
          sc.friction.law = friction_law_kind::tresca;
        else if (kv.value == "coulomb")
          sc.friction.law = friction_law_kind::coulomb;
        else
          fail_at(kv.line_no, "key 'law': expected none, tresca or coulomb");
      } else if (kv.key == "value") {
        sc.friction.value = parse_double(kv);
      } else {
        unknown_key("friction", kv);
      }
    }
  }

  if (sections.count("uzawa")) {
    for (const kv_line& kv : sections["uzawa"].entries) {
      if (kv.key == "rho") sc.uzawa.rho = parse_double(kv);
      else if (kv.key == "eps") sc.uzawa.eps = parse_double(kv);
      else if (kv.key == "max_iters") sc.uzawa.max_iters = parse_size(kv);
      else if (kv.key == "coulomb_update") {
        if (kv.value == "projected")
          sc.uzawa.coulomb_previous_iterate = false;
        else if (kv.value == "previous")
          sc.uzawa.coulomb_previous_iterate = true;
        else
          fail_at(kv.line_no,
                  "key 'coulomb_update': expected projected or previous");
      } else {
        unknown_key("uzawa", kv);
      }
    }
  }

  if (sections.count("output")) {
    for (const kv_line& kv : sections["output"].entries) {
      if (kv.key == "energy") sc.output.energy = parse_bool(kv);
      else if (kv.key == "multiplier") sc.output.multiplier = parse_bool(kv);
      else if (kv.key == "uzawa_trace")
        sc.output.uzawa_trace = parse_bool(kv);
      else if (kv.key == "trace_points") {
        const auto v = parse_double_list(kv);
        if (v.size() % 2 != 0) {
          fail_at(kv.line_no,
                  "key 'trace_points': expected an even count of numbers");
        }
        for (std::size_t i = 0; i < v.size(); i += 2) {
          sc.output.trace_points.push_back({v[i], v[i + 1]});
        }
      } else if (kv.key == "snapshot_times") {
        sc.output.snapshot_times = parse_double_list(kv);
      } else if (kv.key == "magnification") {
        sc.output.magnification = parse_double(kv);
      } else {
        unknown_key("output", kv);
      }
    }
  }

  validate_scenario(sc);
  return sc;
}

scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw scenario_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void check_finite_expression(const expression& e, const std::string& field,
                             double tmax, const point2& lo,
                             const point2& hi) {
  for (int it = 0; it <= 16; ++it) {
    const double t = tmax * it / 16.0;
    for (int ix = 0; ix <= 8; ++ix) {
      const double x = lo[0] + (hi[0] - lo[0]) * ix / 8.0;
      for (int iy = 0; iy <= 8; ++iy) {
        const double y = lo[1] + (hi[1] - lo[1]) * iy / 8.0;
        const double v = e(t, x, y);
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << field << ": expression '" << e.text()
             << "' is not finite at t = " << t << ", x = " << x
             << ", y = " << y;
          throw scenario_error(os.str());
        }
      }
    }
  }
}

}  // namespace

void validate_scenario(const scenario& sc) {
  if (!(sc.horizon > 0.0) || !std::isfinite(sc.horizon)) {
    throw scenario_error("[time] horizon: must be positive");
  }
  if (sc.steps < 1) throw scenario_error("[time] steps: must be at least 1");

  const bool square = sc.mesh.kind == mesh_kind::square;
  if (square) {
    if (!(sc.mesh.side > 0.0)) {
      throw scenario_error("[mesh] side: must be positive");
    }
    if (sc.mesh.elements_per_side < 1) {
      throw scenario_error("[mesh] elements_per_side: must be at least 1");
    }
  } else {
    if (!(sc.mesh.radius > 0.0)) {
      throw scenario_error("[mesh] radius: must be positive");
    }
    if (sc.mesh.elements < 3) {
      throw scenario_error("[mesh] elements: must be at least 3");
    }
  }

  std::vector<boundary_part> parts;
  if (square) {
    parts.assign(sc.mesh.square_parts.begin(), sc.mesh.square_parts.end());
  } else {
    parts.push_back(sc.mesh.circle_part);
  }
  const bool bilateral = sc.kind == problem_kind::bilateral;
  for (const boundary_part p : parts) {
    const bool two_body = p == boundary_part::body_interface ||
                          p == boundary_part::contact_bilateral;
    if (bilateral && !two_body) {
      throw scenario_error(
          "[mesh] parts: a bilateral problem uses Interface and "
          "ContactBilateral parts, got " +
          part_name(p));
    }
    if (!bilateral && two_body) {
      throw scenario_error(
          "[mesh] parts: a unilateral problem uses Dirichlet, Neumann and "
          "ContactUnilateral parts, got " +
          part_name(p));
    }
  }
  if (sc.has_material2 && !bilateral) {
    throw scenario_error(
        "[material2]: only a bilateral problem has a second body");
  }

  try {
    sc.mat1.validate();
    sc.mat2.validate();
  } catch (const std::exception& e) {
    throw scenario_error(std::string("[material]: ") + e.what());
  }

  for (const load_entry& le : sc.loads) {
    if (!square && le.side != -1) {
      throw scenario_error(
          "[load]: circle meshes only accept 'all_x'/'all_y' loads");
    }
    if (le.side < -1 || le.side > 3) {
      throw scenario_error("[load]: side index out of range");
    }
  }

  if (sc.friction.value < 0.0) {
    throw scenario_error(
        "[friction] value: must be nonnegative, got " +
        std::to_string(sc.friction.value));
  }
  if (sc.friction.law != friction_law_kind::frictionless &&
      !std::isfinite(sc.friction.value)) {
    throw scenario_error("[friction] value: must be finite");
  }

  if (!(sc.uzawa.rho > 0.0)) {
    throw scenario_error("[uzawa] rho: must be positive");
  }
  if (!(sc.uzawa.eps > 0.0)) {
    throw scenario_error("[uzawa] eps: must be positive");
  }
  if (sc.uzawa.max_iters < 1) {
    throw scenario_error("[uzawa] max_iters: must be at least 1");
  }

  if (sc.gap.kind == gap_kind::normal_gap && sc.gap.expr.is_zero()) {
    throw scenario_error("[gap] expr: required for kind = normal_gap");
  }
  if (sc.gap.kind == gap_kind::plane_below && sc.gap.height.is_zero()) {
    throw scenario_error("[gap] height: required for kind = plane_below");
  }

  point2 lo, hi;
  if (square) {
    lo = {sc.mesh.center[0] - 0.5 * sc.mesh.side,
          sc.mesh.center[1] - 0.5 * sc.mesh.side};
    hi = {sc.mesh.center[0] + 0.5 * sc.mesh.side,
          sc.mesh.center[1] + 0.5 * sc.mesh.side};
  } else {
    lo = {sc.mesh.center[0] - sc.mesh.radius,
          sc.mesh.center[1] - sc.mesh.radius};
    hi = {sc.mesh.center[0] + sc.mesh.radius,
          sc.mesh.center[1] + sc.mesh.radius};
  }
  for (const load_entry& le : sc.loads) {
    const std::string where =
        std::string("[load] ") + side_name(le.side);
    check_finite_expression(le.fx, where + "_x", sc.horizon, lo, hi);
    check_finite_expression(le.fy, where + "_y", sc.horizon, lo, hi);
  }
  if (sc.gap.kind == gap_kind::normal_gap) {
    check_finite_expression(sc.gap.expr, "[gap] expr", sc.horizon, lo, hi);
  }
  if (sc.gap.kind == gap_kind::plane_below) {
    check_finite_expression(sc.gap.height, "[gap] height", sc.horizon, lo,
                            hi);
  }

  if (!(sc.output.magnification > 0.0)) {
    throw scenario_error("[output] magnification: must be positive");
  }
  for (const double t : sc.output.snapshot_times) {
    if (t < 0.0 || t > sc.horizon) {
      throw scenario_error("[output] snapshot_times: " + std::to_string(t) +
                           " outside [0, horizon]");
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string serialize_scenario(const scenario& sc) {
  std::ostringstream os;
  os << "[problem]\n";
  os << "name = " << sc.name << "\n";
  os << "kind = "
     << (sc.kind == problem_kind::unilateral ? "unilateral" : "bilateral")
     << "\n";
  os << "formulation = "
     << (sc.formulation == formulation_kind::symmetric ? "symmetric"
                                                       : "nonsymmetric")
     << "\n\n";

  os << "[mesh]\n";
  if (sc.mesh.kind == mesh_kind::square) {
    os << "kind = square\n";
    os << "center = " << fmt(sc.mesh.center[0]) << " "
       << fmt(sc.mesh.center[1]) << "\n";
    os << "side = " << fmt(sc.mesh.side) << "\n";
    os << "elements_per_side = " << sc.mesh.elements_per_side << "\n";
    os << "part_bottom = " << part_name(sc.mesh.square_parts[0]) << "\n";
    os << "part_right = " << part_name(sc.mesh.square_parts[1]) << "\n";
    os << "part_top = " << part_name(sc.mesh.square_parts[2]) << "\n";
    os << "part_left = " << part_name(sc.mesh.square_parts[3]) << "\n";
  } else {
    os << "kind = circle\n";
    os << "center = " << fmt(sc.mesh.center[0]) << " "
       << fmt(sc.mesh.center[1]) << "\n";
    os << "radius = " << fmt(sc.mesh.radius) << "\n";
    os << "elements = " << sc.mesh.elements << "\n";
    os << "part = " << part_name(sc.mesh.circle_part) << "\n";
  }
  os << "\n[material]\n";
  os << "cp = " << fmt(sc.mat1.cp) << "\n";
  os << "cs = " << fmt(sc.mat1.cs) << "\n";
  os << "rho = " << fmt(sc.mat1.rho) << "\n";
  if (sc.has_material2) {
    os << "\n[material2]\n";
    os << "cp = " << fmt(sc.mat2.cp) << "\n";
    os << "cs = " << fmt(sc.mat2.cs) << "\n";
    os << "rho = " << fmt(sc.mat2.rho) << "\n";
  }
  os << "\n[time]\n";
  os << "horizon = " << fmt(sc.horizon) << "\n";
  os << "steps = " << sc.steps << "\n";

  if (!sc.loads.empty()) {
    os << "\n[load]\n";
    for (const load_entry& le : sc.loads) {
      if (!le.fx.is_zero()) {
        os << side_name(le.side) << "_x = " << le.fx.text() << "\n";
      }
      if (!le.fy.is_zero()) {
        os << side_name(le.side) << "_y = " << le.fy.text() << "\n";
      }
    }
  }

  os << "\n[gap]\n";
  switch (sc.gap.kind) {
    case gap_kind::zero:
      os << "kind = zero\n";
      break;
    case gap_kind::normal_gap:
      os << "kind = normal_gap\n";
      os << "expr = " << sc.gap.expr.text() << "\n";
      break;
    case gap_kind::plane_below:
      os << "kind = plane_below\n";
      os << "height = " << sc.gap.height.text() << "\n";
      break;
  }
  os << "participation = "
     << (sc.gap.only_downward_normals ? "downward_normals" : "all") << "\n";

  os << "\n[friction]\n";
  switch (sc.friction.law) {
    case friction_law_kind::frictionless: os << "law = none\n"; break;
    case friction_law_kind::tresca: os << "law = tresca\n"; break;
    case friction_law_kind::coulomb: os << "law = coulomb\n"; break;
  }
  os << "value = " << fmt(sc.friction.value) << "\n";

  os << "\n[uzawa]\n";
  os << "rho = " << fmt(sc.uzawa.rho) << "\n";
  os << "eps = " << fmt(sc.uzawa.eps) << "\n";
  os << "max_iters = " << sc.uzawa.max_iters << "\n";
  os << "coulomb_update = "
     << (sc.uzawa.coulomb_previous_iterate ? "previous" : "projected")
     << "\n";

  os << "\n[output]\n";
  os << "energy = " << (sc.output.energy ? "true" : "false") << "\n";
  os << "multiplier = " << (sc.output.multiplier ? "true" : "false") << "\n";
  os << "uzawa_trace = " << (sc.output.uzawa_trace ? "true" : "false")
     << "\n";
  if (!sc.output.trace_points.empty()) {
    os << "trace_points =";
    for (const point2& p : sc.output.trace_points) {
      os << " " << fmt(p[0]) << " " << fmt(p[1]);
    }
    os << "\n";
  }
  if (!sc.output.snapshot_times.empty()) {
    os << "snapshot_times =";
    for (const double t : sc.output.snapshot_times) os << " " << fmt(t);
    os << "\n";
  }
  os << "magnification = " << fmt(sc.output.magnification) << "\n";
  return os.str();
}

std::string scenario_to_json(const scenario& sc) {
  nlohmann::json j;
  j["name"] = sc.name;
  j["kind"] =
      sc.kind == problem_kind::unilateral ? "unilateral" : "bilateral";
  j["formulation"] = sc.formulation == formulation_kind::symmetric
                         ? "symmetric"
                         : "nonsymmetric";
  nlohmann::json jm;
  jm["kind"] = sc.mesh.kind == mesh_kind::square ? "square" : "circle";
  jm["center"] = {sc.mesh.center[0], sc.mesh.center[1]};
  if (sc.mesh.kind == mesh_kind::square) {
    jm["side"] = sc.mesh.side;
    jm["elements_per_side"] = sc.mesh.elements_per_side;
    jm["parts"] = {part_name(sc.mesh.square_parts[0]),
                   part_name(sc.mesh.square_parts[1]),
                   part_name(sc.mesh.square_parts[2]),
                   part_name(sc.mesh.square_parts[3])};
  } else {
    jm["radius"] = sc.mesh.radius;
    jm["elements"] = sc.mesh.elements;
    jm["part"] = part_name(sc.mesh.circle_part);
  }
  j["mesh"] = jm;
  j["material"] = {{"cp", sc.mat1.cp}, {"cs", sc.mat1.cs},
                   {"rho", sc.mat1.rho}};
  if (sc.has_material2) {
    j["material2"] = {{"cp", sc.mat2.cp}, {"cs", sc.mat2.cs},
                      {"rho", sc.mat2.rho}};
  }
  j["time"] = {{"horizon", sc.horizon}, {"steps", sc.steps}};
  nlohmann::json jl = nlohmann::json::array();
  for (const load_entry& le : sc.loads) {
    jl.push_back({{"side", side_name(le.side)},
                  {"fx", le.fx.text()},
                  {"fy", le.fy.text()}});
  }
  j["load"] = jl;
  nlohmann::json jg;
  switch (sc.gap.kind) {
    case gap_kind::zero: jg["kind"] = "zero"; break;
    case gap_kind::normal_gap:
      jg["kind"] = "normal_gap";
      jg["expr"] = sc.gap.expr.text();
      break;
    case gap_kind::plane_below:
      jg["kind"] = "plane_below";
      jg["height"] = sc.gap.height.text();
      break;
  }
  jg["participation"] =
      sc.gap.only_downward_normals ? "downward_normals" : "all";
  j["gap"] = jg;
  const char* law = sc.friction.law == friction_law_kind::frictionless
                        ? "none"
                        : sc.friction.law == friction_law_kind::tresca
                              ? "tresca"
                              : "coulomb";
  j["friction"] = {{"law", law}, {"value", sc.friction.value}};
  j["uzawa"] = {{"rho", sc.uzawa.rho},
                {"eps", sc.uzawa.eps},
                {"max_iters", sc.uzawa.max_iters},
                {"coulomb_update", sc.uzawa.coulomb_previous_iterate
                                       ? "previous"
                                       : "projected"}};
  nlohmann::json jo;
  jo["energy"] = sc.output.energy;
  jo["multiplier"] = sc.output.multiplier;
  jo["uzawa_trace"] = sc.output.uzawa_trace;
  jo["trace_points"] = nlohmann::json::array();
  for (const point2& p : sc.output.trace_points) {
    jo["trace_points"].push_back({p[0], p[1]});
  }
  jo["snapshot_times"] = sc.output.snapshot_times;
  jo["magnification"] = sc.output.magnification;
  j["output"] = jo;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Built-in examples
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_variant(int n, const std::string& variant) {
  throw scenario_error("example " + std::to_string(n) +
                       " has no variant '" + variant +
                       "' (valid: none, tresca, coulomb as documented)");
}

friction_spec pick_friction(int n, const std::string& variant) {
  // Published laws: example 1 offers all three; 2-4 are Coulomb
  // experiments whose frictionless counterparts are used for
  // comparisons.
  const std::string v = variant;
  switch (n) {
    case 1:
      if (v == "" || v == "none") return {friction_law_kind::frictionless, 0};
      if (v == "tresca") return {friction_law_kind::tresca, 0.05};
      if (v == "coulomb") return {friction_law_kind::coulomb, 0.5};
      break;
    case 2:
      if (v == "" || v == "coulomb") return {friction_law_kind::coulomb, 0.3};
      if (v == "none") return {friction_law_kind::frictionless, 0};
      break;
    case 3:
      if (v == "" || v == "coulomb")
        return {friction_law_kind::coulomb, 0.75};
      if (v == "none") return {friction_law_kind::frictionless, 0};
      break;
    case 4:
      if (v == "" || v == "coulomb") return {friction_law_kind::coulomb, 2.0};
      if (v == "none") return {friction_law_kind::frictionless, 0};
      break;
    default:
      throw scenario_error("builtin_example: n must be 1..4, got " +
                           std::to_string(n));
  }
  bad_variant(n, variant);
}

}  // namespace

scenario builtin_example(int n, const std::string& variant) {
  if (n < 1 || n > 4) {
    throw scenario_error("builtin_example: n must be 1..4, got " +
                         std::to_string(n));
  }
  scenario sc;
  sc.friction = pick_friction(n, variant);
  const char* law_tag =
      sc.friction.law == friction_law_kind::frictionless
          ? "none"
          : sc.friction.law == friction_law_kind::tresca ? "tresca"
                                                         : "coulomb";
  sc.name = "example" + std::to_string(n) + "_" + law_tag;

  switch (n) {
    case 1:
      sc.kind = problem_kind::unilateral;
      sc.formulation = formulation_kind::nonsymmetric;
      sc.mesh.kind = mesh_kind::square;
      sc.mesh.center = {0.0, 0.0};
      sc.mesh.side = 1.0;
      sc.mesh.elements_per_side = 20;  // h = 0.05
      sc.mesh.square_parts = {
          boundary_part::contact_unilateral, boundary_part::neumann,
          boundary_part::neumann, boundary_part::contact_unilateral};
      sc.mat1 = material(1.0, 0.5, 1.0);
      sc.horizon = 2.0;
      sc.steps = 40;  // dt = 0.05
      sc.loads.push_back(
          {2, expression(), expression::parse("-0.1*H[t]")});
      sc.uzawa.rho = 1e2;
      sc.uzawa.eps = 1e-4;
      break;
    case 2:
      sc.kind = problem_kind::unilateral;
      sc.formulation = formulation_kind::nonsymmetric;
      sc.mesh.kind = mesh_kind::square;
      sc.mesh.center = {0.0, 0.0};
      sc.mesh.side = 1.0;
      sc.mesh.elements_per_side = 10;  // h = 0.1
      sc.mesh.square_parts = {
          boundary_part::contact_unilateral, boundary_part::neumann,
          boundary_part::neumann, boundary_part::contact_unilateral};
      sc.mat1 = material(3.253, 1.992, 1.0);
      sc.horizon = 0.6;
      sc.steps = 20;  // dt = 0.03
      sc.loads.push_back(
          {2, expression(), expression::parse("-4*tanh((t/15)^2)")});
      sc.uzawa.rho = 1e5;
      sc.uzawa.eps = 1e-6;
      break;
    case 3:
      sc.kind = problem_kind::bilateral;
      sc.formulation = formulation_kind::nonsymmetric;
      sc.mesh.kind = mesh_kind::square;
      sc.mesh.center = {0.0, 0.0};
      sc.mesh.side = 1.0;
      sc.mesh.elements_per_side = 10;  // h = 0.1
      sc.mesh.square_parts = {
          boundary_part::contact_bilateral, boundary_part::body_interface,
          boundary_part::body_interface, boundary_part::contact_bilateral};
      sc.mat1 = material(3.253, 1.992, 1.0);
      sc.horizon = 0.6;
      sc.steps = 20;  // dt = 0.03
      sc.loads.push_back(
          {2, expression(), expression::parse("-4*tanh((t/15)^2)")});
      sc.uzawa.rho = 1e5;
      sc.uzawa.eps = 1e-6;
      break;
    case 4:
      sc.kind = problem_kind::unilateral;
      sc.formulation = formulation_kind::symmetric;
      sc.mesh.kind = mesh_kind::circle;
      sc.mesh.center = {0.0, 0.0};
      sc.mesh.radius = std::sqrt(0.2);
      sc.mesh.elements = 80;
      sc.mesh.circle_part = boundary_part::contact_unilateral;
      sc.mat1 = material(2.0, 1.0, 1.0);
      sc.horizon = 1.976;
      sc.steps = 200;  // dt = 9.88e-3
      sc.gap.kind = gap_kind::plane_below;
      sc.gap.height = expression::parse(
          "4*(sqrt(1-1.5*(t/2-0.2)^2)-1)*H[1-t/2]-3.2*H[t/2-1]-0.12");
      sc.gap.only_downward_normals = true;
      sc.uzawa.rho = 1e5;
      sc.uzawa.eps = 1e-6;
      break;
  }
  sc.mat2 = sc.mat1;
  validate_scenario(sc);
  return sc;
}

// ---------------------------------------------------------------------------
// Building runnable pieces
// ---------------------------------------------------------------------------

scenario_build build_scenario(const scenario& sc) {
  validate_scenario(sc);
  scenario_build b;
  if (sc.mesh.kind == mesh_kind::square) {
    const double h2 = 0.5 * sc.mesh.side;
    const point2 c = sc.mesh.center;
    const std::vector<point2> vertices = {{c[0] - h2, c[1] - h2},
                                          {c[0] + h2, c[1] - h2},
                                          {c[0] + h2, c[1] + h2},
                                          {c[0] - h2, c[1] + h2}};
    const std::vector<boundary_part> parts(sc.mesh.square_parts.begin(),
                                           sc.mesh.square_parts.end());
    b.mesh = build_polygon_mesh(vertices, sc.mesh.elements_per_side, parts);
  } else {
    b.mesh = build_circle_mesh(sc.mesh.center, sc.mesh.radius,
                               sc.mesh.elements, sc.mesh.circle_part);
  }
  b.bases = build_space_bases(b.mesh);
  b.grid = time_grid(sc.horizon, sc.steps);
  b.mat1 = sc.mat1;
  b.mat2 = sc.mat2;
  b.bilateral = sc.kind == problem_kind::bilateral;
  b.formulation = sc.formulation;

  if (!sc.loads.empty()) {
    const std::size_t per_side =
        sc.mesh.kind == mesh_kind::square ? sc.mesh.elements_per_side : 0;
    const std::vector<load_entry> loads = sc.loads;
    b.load = [loads, per_side](std::size_t e, double x, double y, double t,
                               double out[2]) {
      out[0] = 0.0;
      out[1] = 0.0;
      const int side = per_side == 0 ? -1 : static_cast<int>(e / per_side);
      for (const load_entry& le : loads) {
        if (le.side == -1 || le.side == side) {
          out[0] += le.fx(t, x, y);
          out[1] += le.fy(t, x, y);
        }
      }
    };
  }

  switch (sc.gap.kind) {
    case gap_kind::zero:
      break;
    case gap_kind::normal_gap: {
      const expression g = sc.gap.expr;
      b.gap = [g](double x, double y, double, double, double t) {
        return g(t, x, y);
      };
      break;
    }
    case gap_kind::plane_below: {
      // Distance from the node to the plane {y = height(t)} along the
      // outward normal; nearly horizontal normals are clamped so the
      // gap stays finite (and strongly inactive) near the equator.
      const expression height = sc.gap.height;
      b.gap = [height](double, double y, double, double ny, double t) {
        return (height(t, 0.0, 0.0) - y) / std::max(-ny, 0.05);
      };
      break;
    }
  }

  if (sc.gap.only_downward_normals) {
    b.lambda_mask.assign(b.bases.m_lambda, false);
    for (std::size_t ld = 0; ld < b.bases.m_lambda; ++ld) {
      const std::size_t e = b.bases.lambda_elem[ld];
      b.lambda_mask[ld] = !(b.mesh.normal[e][1] < 0.0);
    }
  }

  switch (sc.friction.law) {
    case friction_law_kind::frictionless:
      b.law = friction_law::none();
      break;
    case friction_law_kind::tresca:
      b.law = friction_law::tresca(sc.friction.value);
      break;
    case friction_law_kind::coulomb:
      b.law = friction_law::coulomb(sc.friction.value);
      break;
  }
  b.uzawa = sc.uzawa;
  return b;
}

}  // namespace stbem
