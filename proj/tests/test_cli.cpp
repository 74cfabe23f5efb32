#include "doctest.h"

#include "commands.hpp"
#include "manifest.hpp"
#include "state_spec.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace qbell;
using namespace qbell::cli;

namespace {

// CSV rows with the manifest comments stripped.
std::string csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out << line << '\n';
  return out.str();
}

CommonOptions quick_common(int restarts, std::uint64_t seed) {
  CommonOptions c;
  c.restarts = restarts;
  c.seed = seed;
  return c;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("method and mode parsing") {
  CHECK(parse_method("sd") == Method::SteepestDescent);
  CHECK(parse_method("cg") == Method::ConjugateGradient);
  CHECK(parse_method("relax") == Method::DynamicRelaxation);
  CHECK_THROWS_AS(parse_method("newton"), UsageError);
  CHECK(parse_mode("full") == ParameterVector::Mode::Full);
  CHECK(parse_mode("reduced") == ParameterVector::Mode::Reduced);
  CHECK_THROWS_AS(parse_mode("half"), UsageError);
}

TEST_CASE("state descriptors") {
  CHECK(make_state("maxent", 4).dim() == 4);
  const BipartiteState tmsv = make_state("tmsv:r=1.0", 3);
  CHECK(tmsv.amplitudes()(0, 0).real() > tmsv.amplitudes()(1, 1).real());
  const BipartiteState inf = make_state("tmsv:r=inf", 3);
  CHECK(std::abs(inf.amplitudes()(2, 2).real() - 1.0 / std::sqrt(3.0)) <= 1e-14);
  const BipartiteState pure2 = make_state("pure2:phi=0.3", 2);
  CHECK(std::abs(pure2.amplitudes()(0, 0).real() - std::cos(0.3)) <= 1e-14);

  CHECK_THROWS_AS(make_state("pure2:phi=0.3", 3), UsageError);
  CHECK_THROWS_AS(make_state("thermal:n=2", 3), UsageError);
  CHECK_THROWS_AS(make_state("tmsv:r=abc", 3), UsageError);
  CHECK_THROWS_AS(make_state("tmsv:r=-1", 3), UsageError);
}

TEST_CASE("algebra report") {
  const AlgebraReport report = run_check_algebra(2, 3, 5);
  CHECK(report.passed);
  CHECK(report.lines.size() == 8); // four checks per d
  CHECK(report.manifest.command == "check-algebra");
  CHECK_THROWS_AS(run_check_algebra(1, 3, 5), UsageError);
}

TEST_CASE("six-outcome algebra check finishes promptly") {
  const AlgebraReport report = run_check_algebra(6, 6, 100);
  CHECK(report.passed);
  CHECK(report.manifest.duration_seconds < 30.0);
}

TEST_CASE("optimize run emits a reproducible payload") {
  OptimizeOptions opts;
  opts.d = 2;
  opts.state_descriptor = "maxent";
  opts.common = quick_common(8, 42);

  const OptimizeResult first = run_optimize(opts);
  CHECK(std::abs(first.result.best_value - 2.0 * std::sqrt(2.0)) <= 1e-3);

  const nlohmann::json payload = optimize_json(first);
  CHECK(payload["manifest"]["command"] == "optimize");
  CHECK(payload["manifest"]["params"]["state"] == "maxent");
  CHECK(payload["best_config"]["a1"].size() == 2); // reduced mode, d^2-d = 2
  CHECK(payload["restarts_used"] == 8);

  const OptimizeResult second = run_optimize(opts);
  CHECK(first.result.best_value == second.result.best_value);
  CHECK((first.result.best_x - second.result.best_x).norm() == 0.0);

  OptimizeOptions bad = opts;
  bad.state_descriptor = "bogus";
  CHECK_THROWS_AS(run_optimize(bad), UsageError);
}

TEST_CASE("fig1 rows carry the entanglement abscissa and dominate the Fourier column") {
  Fig1Options opts;
  opts.phi_min = 0.4;
  opts.phi_max = 0.8;
  opts.phi_step = 0.4; // two grid points
  opts.common = quick_common(8, 11);

  const Fig1Result result = run_fig1(opts);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    CHECK(row.epsilon == doctest::Approx(std::sqrt(2.0) * std::sin(row.phi)).epsilon(1e-14));
    const double analytic =
        2.0 * std::sqrt(1.0 + std::pow(std::sin(2.0 * row.phi), 2));
    CHECK(std::abs(row.b_su2 - analytic) <= 2e-3);
    CHECK(row.b_su2 >= row.b_qft - 1e-9);
    CHECK(row.b_qft > 2.0 * std::sqrt(2.0) * std::sin(2.0 * row.phi) - 2e-3);
  }

  Fig1Options bad = opts;
  bad.phi_max = 2.0; // outside [0, pi/2]
  CHECK_THROWS_AS(run_fig1(bad), UsageError);
}

TEST_CASE("fig2 rows violate the classical bound and the csv is reproducible") {
  Fig2Options opts;
  opts.d_list = {2};
  opts.tanh_r_grid = {0.5};
  opts.include_infinite = true;
  opts.common = quick_common(8, 17);

  const Fig2Result result = run_fig2(opts);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].tanh_r == 0.5);
  CHECK(result.rows[0].b > 2.0);
  CHECK(result.rows[1].tanh_r == 1.0); // infinite-squeezing sentinel
  CHECK(std::abs(result.rows[1].b - 2.0 * std::sqrt(2.0)) <= 1e-3);

  std::ostringstream csv1, csv2;
  write_fig2_csv(csv1, result);
  write_fig2_csv(csv2, run_fig2(opts));
  CHECK(csv_rows(csv1.str()) == csv_rows(csv2.str()));
  CHECK(csv_rows(csv1.str()).substr(0, 12) == "d,tanh_r,b\n2");
  CHECK(csv1.str().substr(0, 1) == "#"); // embedded manifest

  const nlohmann::json sidecar = fig2_sidecar_json(result);
  CHECK(sidecar["rows"].size() == 2);
  CHECK(sidecar["rows"][0]["best_x"].size() == 8); // 4 * (d^2 - d)

  Fig2Options bad = opts;
  bad.tanh_r_grid = {1.5};
  CHECK_THROWS_AS(run_fig2(bad), UsageError);
}

TEST_CASE("table1 scan finds the interior squeezing optimum at d = 3") {
  Table1Options opts;
  opts.d_list = {3};
  opts.common = quick_common(8, 3);
  opts.r_min = 1.2;
  opts.r_max = 1.6;
  opts.r_step = 0.2;
  opts.r_resolution = 0.02;

  const Table1Result result = run_table1(opts);
  REQUIRE(result.rows.size() == 1);
  const Table1Row& row = result.rows[0];
  CHECK(row.d == 3);
  CHECK(!row.boundary);
  CHECK(std::abs(row.r_m - 1.407) <= 0.1);
  CHECK(row.b_rm >= 2.90638 - 2e-3);
  CHECK(row.b_rm <= 2.90638 + 2e-3);
  CHECK(std::abs(row.b_inf - 2.87293) <= 2e-3);

  std::ostringstream csv;
  write_table1_csv(csv, result);
  CHECK(csv_rows(csv.str()).rfind("d,r_m,b_rm,b_inf,boundary\n", 0) == 0);

  Table1Options bad = opts;
  bad.d_list = {7};
  CHECK_THROWS_AS(run_table1(bad), UsageError);
}

TEST_CASE("table1 flags the monotone dichotomic row as a boundary") {
  Table1Options opts;
  opts.d_list = {2};
  opts.common = quick_common(6, 9);
  opts.r_min = 0.5;
  opts.r_max = 1.5;
  opts.r_step = 0.5;
  opts.r_resolution = 0.05;

  const Table1Result result = run_table1(opts);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].boundary);
  CHECK(result.rows[0].r_m == doctest::Approx(1.5));
  CHECK(std::abs(result.rows[0].b_inf - 2.0 * std::sqrt(2.0)) <= 1e-3);
}

TEST_CASE("binary exit codes") {
  const char* bin = std::getenv("QBELL_BIN");
  const std::string path = bin ? bin : "../tools/qbell";
  std::ifstream probe(path);
  if (!probe.good()) return; // binary not where expected; covered elsewhere

  const auto run = [&](const std::string& args) {
    const int status = std::system((path + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("--help") == 0);
  CHECK(run("check-algebra --d 2..3 --vectors 3") == 0);
  CHECK(run("check-algebra --d 1") == 1);
  CHECK(run("optimize --d 2 --state maxent --restarts 4 --seed 9") == 0);
  CHECK(run("optimize --d 2 --state bogus") == 1);
  CHECK(run("optimize --d 2 --state maxent --restarts 2 --format csv") == 1);
  CHECK(run("fig2 --d 2 --tanh-r 0.5 --restarts 2 --method bogus") == 1);

  std::ofstream cfg("qbell_test.cfg");
  cfg << "optimize.restarts=3\noptimize.seed=5\n";
  cfg.close();
  CHECK(run("optimize --d 2 --state maxent --config qbell_test.cfg") == 0);
}

} // TEST_SUITE
