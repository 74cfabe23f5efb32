// Experiment drivers behind the CLI subcommands. Each driver returns plain
// rows plus the manifest; the writers below render them as CSV (sweeps) or
// JSON (single runs). Headers are part of the output schema; changing one
// requires a tool version bump.

#pragma once

#include "manifest.hpp"
#include "state_spec.hpp"

#include "qbell/optimizer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qbell::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvariantFailure = 2,
  kNonConvergence = 3,
};

struct CommonOptions {
  Method method = Method::ConjugateGradient;
  int restarts = 24;
  std::uint64_t seed = 1;
  ParameterVector::Mode mode = ParameterVector::Mode::Reduced;
  int workers = 1;
};

Method parse_method(const std::string& name);               // sd | cg | relax
ParameterVector::Mode parse_mode(const std::string& name);  // full | reduced

// ---- check-algebra ---------------------------------------------------------

struct AlgebraReport {
  bool passed = false;
  std::vector<std::string> lines; // one line per check
  RunManifest manifest;
};

AlgebraReport run_check_algebra(int d_min, int d_max, int vectors_per_d = 100);

// ---- table1 ----------------------------------------------------------------

struct Table1Options {
  std::vector<int> d_list{2, 3, 4, 5};
  CommonOptions common;
  double r_min = 0.25;
  double r_max = 3.0;
  double r_step = 0.25;
  double r_resolution = 2e-3; // refinement bracket width
};

struct Table1Row {
  int d = 0;
  double r_m = 0.0;
  double b_rm = 0.0;
  double b_inf = 0.0;
  bool boundary = false; // r_m hit the scan boundary (B monotone in r)
  bool converged = true;
};

struct Table1Result {
  std::vector<Table1Row> rows;
  RunManifest manifest;
};

Table1Result run_table1(const Table1Options& opts);

// ---- fig1 ------------------------------------------------------------------

struct Fig1Options {
  double phi_min = 0.1;
  double phi_max = 1.5;
  double phi_step = 0.1;
  CommonOptions common;
  int qft_grid = 8;      // coarse grid points per phase
  int qft_refine_top = 3; // grid candidates refined locally
};

struct Fig1Row {
  double phi = 0.0;
  double epsilon = 0.0; // sqrt(2) sin(phi)
  double b_su2 = 0.0;
  double b_qft = 0.0;
  bool converged = true;
};

struct Fig1Result {
  std::vector<Fig1Row> rows;
  RunManifest manifest;
};

Fig1Result run_fig1(const Fig1Options& opts);

// Best Bell value over the four-phase Fourier family (coarse grid plus local
// refinement); exposed for reuse by tests.
double optimize_qft_phases(const BipartiteState& state, const BellSpec& spec,
                           int grid, int refine_top, const OptimSettings& settings);

// ---- fig2 ------------------------------------------------------------------

struct Fig2Options {
  std::vector<int> d_list{2, 3, 4, 5};
  std::vector<double> tanh_r_grid; // defaults to 0.05..0.95 step 0.05
  bool include_infinite = true;    // adds the tanh r = 1 row
  CommonOptions common;
};

struct Fig2Row {
  int d = 0;
  double tanh_r = 0.0;
  double b = 0.0;
  bool converged = true;
  RealVector best_x; // sidecar payload
};

struct Fig2Result {
  std::vector<Fig2Row> rows;
  RunManifest manifest;
};

Fig2Result run_fig2(const Fig2Options& opts);

// ---- optimize --------------------------------------------------------------

struct OptimizeOptions {
  std::string state_descriptor = "maxent";
  int d = 2;
  CommonOptions common;
};

struct OptimizeResult {
  OptimizationResult result;
  RunManifest manifest;
};

OptimizeResult run_optimize(const OptimizeOptions& opts);

// ---- output ----------------------------------------------------------------

void write_table1_csv(std::ostream& out, const Table1Result& result);
void write_fig1_csv(std::ostream& out, const Fig1Result& result);
void write_fig2_csv(std::ostream& out, const Fig2Result& result);
nlohmann::json table1_json(const Table1Result& result);
nlohmann::json fig1_json(const Fig1Result& result);
nlohmann::json fig2_json(const Fig2Result& result);
nlohmann::json fig2_sidecar_json(const Fig2Result& result);
nlohmann::json optimize_json(const OptimizeResult& result);

} // namespace qbell::cli
