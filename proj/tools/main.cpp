// qbell: d-outcome Bell-test experiments over SU(d) measurement
// configurations. Subcommands: check-algebra, table1, fig1, fig2, optimize.

#include "CLI11.hpp"

#include "commands.hpp"
#include "manifest.hpp"
#include "state_spec.hpp"

#include "qbell/version.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace qbell;
using namespace qbell::cli;

struct GlobalFlags {
  std::string method = "cg";
  std::string mode = "reduced";
  int restarts = 24;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, GlobalFlags& flags, const char* default_format) {
  cmd->add_option("--method", flags.method, "Optimizer: sd, cg or relax")
      ->check(CLI::IsMember({"sd", "cg", "relax"}));
  cmd->add_option("--restarts", flags.restarts, "Multi-start restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "Deterministic restart seed");
  cmd->add_option("--mode", flags.mode, "Search space: reduced (d^2-d) or full (d^2-1)")
      ->check(CLI::IsMember({"full", "reduced"}));
  cmd->add_option("--workers", flags.workers, "Worker threads")
      ->envname("QBELL_WORKERS")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "Output path (stdout when omitted)");
  cmd->fallthrough();
  flags.format = default_format;
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

CommonOptions to_common(const GlobalFlags& flags) {
  CommonOptions c;
  c.method = parse_method(flags.method);
  c.restarts = flags.restarts;
  c.seed = flags.seed;
  c.mode = parse_mode(flags.mode);
  c.workers = flags.workers;
  return c;
}

int emit(const GlobalFlags& flags, const std::function<void(std::ostream&)>& csv,
         const nlohmann::json& json) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!flags.out.empty()) {
    file.open(flags.out);
    if (!file) {
      std::cerr << "qbell: cannot open output file " << flags.out << "\n";
      return kUsage;
    }
    out = &file;
  }
  if (flags.format == "json")
    *out << json.dump(2) << "\n";
  else
    csv(*out);
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"d-outcome Bell-test experiments with SU(d) measurements"};
  app.set_version_flag("--version", qbell::kVersion);
  // processed at the root; keys use the subcommand section, e.g.
  // "optimize.restarts=4" or an [optimize] section header
  app.set_config("--config", "", "Config file with key=value lines");
  app.require_subcommand(1);

  // check-algebra
  auto* check = app.add_subcommand("check-algebra", "Verify the SU(d) algebra suite");
  std::string d_range = "2..5";
  int vectors = 100;
  check->add_option("--d", d_range, "Dimension or range, e.g. 4 or 2..6");
  check->add_option("--vectors", vectors, "Random parameter vectors per d")
      ->check(CLI::PositiveNumber);
  check->fallthrough();

  // table1
  auto* table1 = app.add_subcommand("table1", "Largest optimum over the squeezing scan");
  GlobalFlags table1_flags;
  Table1Options table1_opts;
  table1->add_option("--d", table1_opts.d_list, "Dimensions (2..5)")->delimiter(',');
  table1->add_option("--r-min", table1_opts.r_min, "Scan start");
  table1->add_option("--r-max", table1_opts.r_max, "Scan end");
  table1->add_option("--r-step", table1_opts.r_step, "Scan step");
  table1->add_option("--r-resolution", table1_opts.r_resolution, "Refinement width");
  add_common(table1, table1_flags, "csv");

  // fig1
  auto* fig1 = app.add_subcommand("fig1", "SU(2) vs Fourier-basis Bell values");
  GlobalFlags fig1_flags;
  Fig1Options fig1_opts;
  fig1->add_option("--phi-min", fig1_opts.phi_min, "Grid start");
  fig1->add_option("--phi-max", fig1_opts.phi_max, "Grid end (<= pi/2)");
  fig1->add_option("--phi-step", fig1_opts.phi_step, "Grid step");
  fig1->add_option("--qft-grid", fig1_opts.qft_grid, "Coarse points per phase");
  add_common(fig1, fig1_flags, "csv");

  // fig2
  auto* fig2 = app.add_subcommand("fig2", "Violation against squeezing strength");
  GlobalFlags fig2_flags;
  Fig2Options fig2_opts;
  std::vector<double> tanh_grid;
  bool no_infinite = false;
  fig2->add_option("--d", fig2_opts.d_list, "Dimensions")->delimiter(',');
  fig2->add_option("--tanh-r", tanh_grid, "tanh r grid in (0,1)")->delimiter(',');
  fig2->add_flag("--no-inf", no_infinite, "Skip the infinite-squeezing row");
  add_common(fig2, fig2_flags, "csv");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "One-shot optimization for a state");
  GlobalFlags optimize_flags;
  OptimizeOptions optimize_opts;
  bool require_convergence = false;
  optimize->add_option("--state", optimize_opts.state_descriptor,
                       "maxent | tmsv:r=X | pure2:phi=Y");
  optimize->add_option("--d", optimize_opts.d, "Dimension")->check(CLI::PositiveNumber);
  optimize->add_flag("--require-convergence", require_convergence,
                     "Exit 3 unless the winning restart converged");
  add_common(optimize, optimize_flags, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
    app.exit(e);
    return kUsage;
  }

  try {
    if (check->parsed()) {
      int d_min = 0, d_max = 0;
      const auto dots = d_range.find("..");
      try {
        if (dots == std::string::npos) {
          d_min = d_max = std::stoi(d_range);
        } else {
          d_min = std::stoi(d_range.substr(0, dots));
          d_max = std::stoi(d_range.substr(dots + 2));
        }
      } catch (const std::exception&) {
        throw UsageError("cannot parse --d range '" + d_range + "'");
      }
      const AlgebraReport report = run_check_algebra(d_min, d_max, vectors);
      for (const auto& line : report.lines) std::cout << line << "\n";
      std::cout << (report.passed ? "all checks passed" : "CHECKS FAILED") << "\n";
      return report.passed ? kOk : kInvariantFailure;
    }

    if (table1->parsed()) {
      table1_opts.common = to_common(table1_flags);
      const Table1Result result = run_table1(table1_opts);
      return emit(table1_flags, [&](std::ostream& o) { write_table1_csv(o, result); },
                  table1_json(result));
    }

    if (fig1->parsed()) {
      fig1_opts.common = to_common(fig1_flags);
      const Fig1Result result = run_fig1(fig1_opts);
      return emit(fig1_flags, [&](std::ostream& o) { write_fig1_csv(o, result); },
                  fig1_json(result));
    }

    if (fig2->parsed()) {
      fig2_opts.common = to_common(fig2_flags);
      fig2_opts.tanh_r_grid = tanh_grid;
      fig2_opts.include_infinite = !no_infinite;
      const Fig2Result result = run_fig2(fig2_opts);
      const int code = emit(fig2_flags, [&](std::ostream& o) { write_fig2_csv(o, result); },
                            fig2_json(result));
      if (code == kOk && !fig2_flags.out.empty()) {
        std::ofstream sidecar(fig2_flags.out + ".configs.json");
        sidecar << fig2_sidecar_json(result).dump(2) << "\n";
      }
      return code;
    }

    if (optimize->parsed()) {
      if (optimize_flags.format != "json")
        throw UsageError("optimize emits JSON single runs; use --format json");
      optimize_opts.common = to_common(optimize_flags);
      const OptimizeResult result = run_optimize(optimize_opts);
      const int code =
          emit(optimize_flags, [&](std::ostream&) {}, optimize_json(result));
      if (code != kOk) return code;
      if (require_convergence &&
          !result.result.trace[result.result.best_index].converged)
        return kNonConvergence;
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "qbell: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qbell: error: " << e.what() << "\n";
    return kInvariantFailure;
  }
  return kUsage;
}
