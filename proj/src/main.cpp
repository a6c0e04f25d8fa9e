// Command line front end: runs a scenario (from a file or one of the
// bundled examples), emits CSV/SVG artifacts plus a manifest, and
// offers convergence sweeps and formulation comparisons.
//
// Exit codes: 0 success, 1 numerical failure (non-convergence,
// singular system), 2 usage or configuration error.  Failures print a
// machine-readable JSON object to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stbem/assembly.h"
#include "stbem/contact.h"
#include "stbem/diagnostics.h"
#include "stbem/mot_solver.h"
#include "stbem/scenario.h"

namespace {

using nlohmann::json;
using namespace stbem;

struct cli_options {
  std::string scenario_path;
  int builtin = 0;
  std::string variant;
  std::string formulation;  // "", "sym", "nonsym"
  std::string out_dir = "out";
  int levels = 3;
  int threads = 0;
  bool deterministic = false;
};

void add_common_options(CLI::App* cmd, cli_options& opt, bool with_levels) {
  cmd->add_option("--scenario", opt.scenario_path,
                  "Scenario file to run (sectioned key-value format)");
  cmd->add_option("--builtin", opt.builtin, "Bundled example number (1-4)")
      ->check(CLI::Range(1, 4));
  cmd->add_option("--variant", opt.variant,
                  "Friction variant for bundled examples")
      ->check(CLI::IsMember({"none", "tresca", "coulomb"}));
  cmd->add_option("--formulation", opt.formulation,
                  "Override the operator formulation")
      ->check(CLI::IsMember({"sym", "nonsym"}));
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_option("--threads", opt.threads, "Worker thread count (0 = all)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--deterministic", opt.deterministic,
                "Pin reduction orders and default to one thread for "
                "byte-identical reruns");
  if (with_levels) {
    cmd->add_option("--levels", opt.levels,
                    "Refinement levels in the sweep (>= 3)");
  }
}

[[noreturn]] void fail(int code, const std::string& type,
                       const std::string& message) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump(2) << std::endl;
  std::exit(code);
}

scenario select_scenario(const cli_options& opt) {
  if (!opt.scenario_path.empty() && opt.builtin != 0) {
    fail(2, "usage", "--scenario and --builtin are mutually exclusive");
  }
  scenario sc;
  if (!opt.scenario_path.empty()) {
    if (!opt.variant.empty()) {
      fail(2, "usage", "--variant applies only to --builtin examples");
    }
    sc = parse_scenario_file(opt.scenario_path);
  } else if (opt.builtin != 0) {
    sc = builtin_example(opt.builtin, opt.variant);
  } else {
    fail(2, "usage", "select a scenario with --scenario FILE or --builtin N");
  }
  if (opt.formulation == "sym") {
    sc.formulation = formulation_kind::symmetric;
  } else if (opt.formulation == "nonsym") {
    sc.formulation = formulation_kind::nonsymmetric;
  }
  return sc;
}

int effective_threads(const cli_options& opt) {
  if (opt.threads > 0) return opt.threads;
  if (opt.deterministic) return 1;
  return 0;
}

void apply_thread_budget(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(const std::string& s) {
  std::ostringstream os;
  os << std::hex << fnv1a(s);
  return os.str();
}

class phase_clock {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  double stop() {
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

struct run_artifacts {
  block_system system;
  uzawa_result result;
  std::vector<Eigen::VectorXd> gap;
  std::vector<double> energy;
  json timings;
  std::size_t uzawa_iters = 0;
};

// Assembles, factorizes and solves one scenario build.  The caller
// owns artifact emission.
run_artifacts solve_pipeline(const scenario& sc, const scenario_build& b,
                             int threads) {
  run_artifacts art;
  phase_clock clock;

  assembly_config cfg;
  cfg.threads = threads;

  clock.start();
  if (b.bilateral) {
    art.system = build_bilateral_system(b.mesh, b.bases, b.mat1, b.mat2,
                                        b.grid, b.formulation, cfg);
  } else {
    art.system = build_unilateral_system(b.mesh, b.bases, b.mat1, b.grid,
                                         b.formulation, cfg);
  }
  std::vector<Eigen::VectorXd> moments(
      b.grid.steps, Eigen::VectorXd::Zero(2 * b.bases.m_u));
  if (b.load) {
    moments = assemble_load_moments(b.mesh, b.bases, b.grid, b.load);
  }
  const std::vector<Eigen::VectorXd> rhs = compose_rhs(art.system, moments);
  art.timings["assembly_ms"] = clock.stop();

  clock.start();
  const mot_solver solver(art.system.S);
  art.timings["factorization_ms"] = clock.stop();

  const std::size_t gap_cols = b.bilateral ? 2 * b.bases.m_utilde
                                           : 2 * b.bases.m_u;
  art.gap.assign(b.grid.steps, Eigen::VectorXd::Zero(gap_cols));
  if (b.gap) {
    art.gap = interpolate_gap(b.mesh, b.bases, b.grid, b.gap, b.bilateral,
                              b.mask_ptr());
  }

  clock.start();
  art.result = uzawa_solve(art.system, solver, rhs, art.gap, b.law, b.uzawa,
                           b.mask_ptr());
  art.timings["uzawa_ms"] = clock.stop();
  art.uzawa_iters = art.result.iters;

  art.energy = energy_history(art.system, art.result.x);
  (void)sc;
  return art;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    fail(2, "io", "cannot write output file: " + path.string());
  }
  return out;
}

double obstacle_height_at(const scenario& sc, double t) {
  if (sc.gap.kind != gap_kind::plane_below) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sc.gap.height(t, 0.0, 0.0);
}

int cmd_run(const cli_options& opt) {
  const scenario sc = select_scenario(opt);
  const int threads = effective_threads(opt);
  apply_thread_budget(threads);

  const scenario_build b = build_scenario(sc);
  run_artifacts art;
  try {
    art = solve_pipeline(sc, b, threads);
  } catch (const uzawa_divergence& e) {
    fail(1, "uzawa_divergence", e.what());
  } catch (const solver_error& e) {
    fail(1, "solver", e.what());
  }

  phase_clock clock;
  clock.start();
  namespace fs = std::filesystem;
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;

  {
    auto out = open_output(dir / "scenario.txt");
    out << serialize_scenario(sc);
    outputs.push_back("scenario.txt");
  }
  {
    auto out = open_output(dir / "scenario.json");
    out << scenario_to_json(sc) << "\n";
    outputs.push_back("scenario.json");
  }
  if (sc.output.energy) {
    auto out = open_output(dir / "energy.csv");
    write_energy_csv(out, b.grid, art.energy);
    outputs.push_back("energy.csv");
  }

  const auto increments = displacement_increments(art.system, art.result.x);
  const auto cumulative = accumulate_increments(increments);

  for (std::size_t i = 0; i < sc.output.trace_points.size(); ++i) {
    const auto trace = trace_at_point(b.mesh, b.bases, cumulative,
                                      sc.output.trace_points[i]);
    const std::string name = "trace_" + std::to_string(i) + ".csv";
    auto out = open_output(dir / name);
    write_trace_csv(out, b.grid, trace);
    outputs.push_back(name);
  }

  if (sc.output.multiplier && b.bases.m_lambda > 0) {
    auto out = open_output(dir / "multiplier.csv");
    write_multiplier_csv(out, b.mesh, b.bases, b.grid, art.result.lambda);
    outputs.push_back("multiplier.csv");
  }
  if (sc.output.uzawa_trace) {
    auto out = open_output(dir / "uzawa_trace.csv");
    write_uzawa_trace_csv(out, art.result.trace);
    outputs.push_back("uzawa_trace.csv");
  }

  for (std::size_t i = 0; i < sc.output.snapshot_times.size(); ++i) {
    const double t = sc.output.snapshot_times[i];
    std::size_t step = static_cast<std::size_t>(
        std::llround(t / b.grid.dt));
    step = std::min(std::max<std::size_t>(step, 1), b.grid.steps);
    const auto displaced = deformation_snapshot(
        b.mesh, b.bases, cumulative[step - 1], sc.output.magnification);
    const std::string name = "snapshot_" + std::to_string(i) + ".svg";
    auto out = open_output(dir / name);
    write_snapshot_svg(out, b.mesh, displaced,
                       obstacle_height_at(sc, b.grid.node(step)));
    outputs.push_back(name);
  }

  json manifest;
  manifest["scenario_hash"] = hash_hex(serialize_scenario(sc));
  manifest["config"] = json::parse(scenario_to_json(sc));
  manifest["flags"] = {{"threads", threads},
                       {"deterministic", opt.deterministic}};
  manifest["timings_ms"] = art.timings;
  manifest["iterations"] = {{"uzawa", art.uzawa_iters},
                            {"converged", art.result.converged}};
  if (b.bases.m_lambda > 0) {
    const kkt_report kkt =
        check_kkt(b.mesh, b.bases, b.grid, art.system, art.result, art.gap,
                  b.law, b.uzawa.eps, b.mask_ptr());
    manifest["kkt"] = {
        {"tol_c", kkt.tol_c},
        {"min_normal_multiplier", kkt.min_normal_multiplier},
        {"max_tangential_excess", kkt.max_tangential_excess},
        {"max_penetration", kkt.max_penetration},
        {"worst_complementarity", kkt.worst_complementarity},
        {"max_stick_violation", kkt.max_stick_violation}};
  }
  manifest["timings_ms"]["post_ms"] = clock.stop();
  outputs.push_back("manifest.json");
  manifest["outputs"] = outputs;
  {
    auto out = open_output(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }

  std::cout << "run: " << sc.name << " finished, E(T) = "
            << art.energy.back() << ", uzawa iterations = "
            << art.uzawa_iters << ", artifacts in " << dir.string()
            << std::endl;
  return 0;
}

int cmd_sweep(const cli_options& opt) {
  if (opt.levels < 3) {
    fail(2, "usage", "--levels must be at least 3, got " +
                         std::to_string(opt.levels));
  }
  const scenario base = select_scenario(opt);
  const int threads = effective_threads(opt);
  apply_thread_budget(threads);

  std::vector<sweep_level> levels;
  json level_info = json::array();
  for (int level = 0; level < opt.levels; ++level) {
    scenario sc = base;
    const std::size_t factor = std::size_t{1} << level;
    if (sc.mesh.kind == mesh_kind::square) {
      sc.mesh.elements_per_side *= factor;
    } else {
      sc.mesh.elements *= factor;
    }
    sc.steps *= factor;
    const scenario_build b = build_scenario(sc);
    run_artifacts art;
    try {
      art = solve_pipeline(sc, b, threads);
    } catch (const uzawa_divergence& e) {
      fail(1, "uzawa_divergence", e.what());
    } catch (const solver_error& e) {
      fail(1, "solver", e.what());
    }
    levels.push_back({b.mesh.h_max, b.grid.dt, art.energy.back()});
    level_info.push_back({{"h", b.mesh.h_max},
                          {"dt", b.grid.dt},
                          {"energy_T", art.energy.back()},
                          {"uzawa_iterations", art.uzawa_iters}});
    std::cout << "level " << level << ": h = " << b.mesh.h_max
              << ", dt = " << b.grid.dt << ", E(T) = " << art.energy.back()
              << std::endl;
  }

  sweep_result sweep;
  bool slope_defined = true;
  try {
    sweep = convergence_table(levels);
  } catch (const diagnostics_error& e) {
    slope_defined = false;
    std::cerr << "sweep: slope undefined: " << e.what() << std::endl;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      const double rel =
          (levels[i].energy - levels.back().energy) / levels.back().energy;
      sweep.rows.push_back({levels[i].h, levels[i].dt, rel * rel});
    }
    sweep.slope = std::numeric_limits<double>::quiet_NaN();
  }
  if (!sweep.monotone) {
    std::cerr << "sweep: warning: errors are not monotone under refinement"
              << std::endl;
  }

  namespace fs = std::filesystem;
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "sweep.csv");
    write_sweep_csv(out, sweep);
  }
  json manifest;
  manifest["scenario_hash"] = hash_hex(serialize_scenario(base));
  manifest["config"] = json::parse(scenario_to_json(base));
  manifest["levels"] = level_info;
  manifest["slope"] = slope_defined ? json(sweep.slope) : json();
  manifest["slope_defined"] = slope_defined;
  manifest["monotone"] = sweep.monotone;
  manifest["outputs"] = {"sweep.csv", "manifest.json"};
  {
    auto out = open_output(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  if (slope_defined) {
    std::cout << "sweep: fitted log-log slope of squared relative energy "
                 "error = "
              << sweep.slope << std::endl;
  }
  return 0;
}

int cmd_compare(const cli_options& opt) {
  const scenario base = select_scenario(opt);
  const int threads = effective_threads(opt);
  apply_thread_budget(threads);

  auto run_one = [&](formulation_kind form) {
    scenario sc = base;
    sc.formulation = form;
    const scenario_build b = build_scenario(sc);
    run_artifacts art;
    try {
      art = solve_pipeline(sc, b, threads);
    } catch (const uzawa_divergence& e) {
      fail(1, "uzawa_divergence", e.what());
    } catch (const solver_error& e) {
      fail(1, "solver", e.what());
    }
    return std::make_pair(
        accumulate_increments(displacement_increments(art.system,
                                                      art.result.x)),
        art.energy.back());
  };

  const auto [u_nonsym, e_nonsym] = run_one(formulation_kind::nonsymmetric);
  const auto [u_sym, e_sym] = run_one(formulation_kind::symmetric);
  const double rel = relative_history_difference(u_nonsym, u_sym);

  namespace fs = std::filesystem;
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "compare.csv");
    out.precision(16);
    out << "metric,value\n";
    out << "relative_displacement_difference," << rel << "\n";
    out << "energy_T_nonsymmetric," << e_nonsym << "\n";
    out << "energy_T_symmetric," << e_sym << "\n";
  }
  json manifest;
  manifest["scenario_hash"] = hash_hex(serialize_scenario(base));
  manifest["config"] = json::parse(scenario_to_json(base));
  manifest["relative_displacement_difference"] = rel;
  manifest["outputs"] = {"compare.csv", "manifest.json"};
  {
    auto out = open_output(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  std::cout << "compare: symmetric vs nonsymmetric relative displacement "
               "difference = "
            << rel << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Space-time Galerkin boundary element solver for two-dimensional "
      "elastodynamic contact with friction"};
  app.require_subcommand(1);

  cli_options run_opt, sweep_opt, compare_opt;
  CLI::App* run = app.add_subcommand(
      "run", "Solve one scenario and emit its artifacts");
  add_common_options(run, run_opt, false);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Self-convergence sweep over refined discretizations");
  add_common_options(sweep, sweep_opt, true);
  CLI::App* compare = app.add_subcommand(
      "compare", "Run both operator formulations and report their distance");
  add_common_options(compare, compare_opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    json j;
    j["error"] = {{"type", "usage"}, {"message", e.what()}};
    std::cerr << j.dump(2) << std::endl;
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (compare->parsed()) return cmd_compare(compare_opt);
  } catch (const scenario_error& e) {
    fail(2, "scenario", e.what());
  } catch (const uzawa_divergence& e) {
    fail(1, "uzawa_divergence", e.what());
  } catch (const contact_error& e) {
    fail(1, "contact", e.what());
  } catch (const solver_error& e) {
    fail(1, "solver", e.what());
  } catch (const assembly_error& e) {
    fail(1, "assembly", e.what());
  } catch (const diagnostics_error& e) {
    fail(1, "diagnostics", e.what());
  } catch (const std::exception& e) {
    fail(1, "internal", e.what());
  }
  return 2;
}
