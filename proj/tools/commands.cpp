#include "commands.hpp"

#include "qbell/bell.hpp"
#include "qbell/cv_map.hpp"
#include "qbell/rng.hpp"
#include "qbell/version.hpp"

#include <atomic>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace qbell::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn(i) for i in [0, n) on a small worker pool; results must be written
// to pre-sized slots so emission order stays deterministic.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

MultistartOptions to_multistart(const CommonOptions& common, int workers = 1) {
  MultistartOptions opts;
  opts.method = common.method;
  opts.n_restarts = common.restarts;
  opts.seed = common.seed;
  opts.mode = common.mode;
  opts.n_workers = workers;
  return opts;
}

void fill_common_params(RunManifest& m, const CommonOptions& c) {
  m.params["method"] = method_name(c.method);
  m.params["restarts"] = std::to_string(c.restarts);
  m.params["seed"] = std::to_string(c.seed);
  m.params["mode"] = c.mode == ParameterVector::Mode::Reduced ? "reduced" : "full";
  m.params["workers"] = std::to_string(c.workers);
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
  return os.str();
}

bool all_converged(const OptimizationResult& r) {
  return r.trace[r.best_index].converged;
}

} // namespace

Method parse_method(const std::string& name) {
  if (name == "sd") return Method::SteepestDescent;
  if (name == "cg") return Method::ConjugateGradient;
  if (name == "relax") return Method::DynamicRelaxation;
  throw UsageError("unknown method '" + name + "' (expected sd, cg or relax)");
}

ParameterVector::Mode parse_mode(const std::string& name) {
  if (name == "full") return ParameterVector::Mode::Full;
  if (name == "reduced") return ParameterVector::Mode::Reduced;
  throw UsageError("unknown mode '" + name + "' (expected full or reduced)");
}

// ---- check-algebra ---------------------------------------------------------

AlgebraReport run_check_algebra(int d_min, int d_max, int vectors_per_d) {
  if (d_min < 2 || d_max < d_min)
    throw UsageError("check-algebra needs 2 <= d_min <= d_max");
  const auto start = Clock::now();

  AlgebraReport report;
  report.passed = true;
  const auto check = [&](int d, const std::string& name, bool ok, double worst) {
    std::ostringstream os;
    os << (ok ? "pass" : "FAIL") << "  d=" << d << "  " << name
       << "  worst=" << format_double(worst);
    report.lines.push_back(os.str());
    if (!ok) report.passed = false;
  };

  for (int d = d_min; d <= d_max; ++d) {
    const GeneratorSet gens = build_generators(d);
    const StructureConstants f = structure_constants(gens);
    const int n = gens.size();

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(gens.generators[i].trace()));
      for (int j = i; j < n; ++j) {
        const auto overlap = (gens.generators[i] * gens.generators[j]).trace();
        worst = std::max(worst, std::abs(overlap - (i == j ? 2.0 : 0.0)));
      }
    }
    check(d, "traceless-orthogonal", worst <= 1e-12, worst);

    worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Matrix rhs = Matrix::Zero(d, d);
        for (const auto& e : f.entries)
          if (e.j == j && e.k == k)
            rhs += std::complex<double>(0.0, 2.0) * e.value * gens.generators[e.l];
        const Matrix lhs =
            gens.generators[j] * gens.generators[k] - gens.generators[k] * gens.generators[j];
        worst = std::max(worst, (lhs - rhs).norm());
      }
    check(d, "commutator-identity", worst <= 1e-10, worst);

    worst = 0.0;
    for (int l = 1; l <= d - 1; ++l)
      for (int m = 1; m <= d - 1; ++m) {
        const Matrix& wl = gens.generators[gens.w_index(l)];
        const Matrix& wm = gens.generators[gens.w_index(m)];
        worst = std::max(worst, (wl * wm - wm * wl).norm());
      }
    check(d, "w-subset-commutes", worst == 0.0, worst);

    worst = 0.0;
    for (int rep = 0; rep < vectors_per_d; ++rep) {
      RealVector values(n);
      for (int c = 0; c < n; ++c)
        values[c] = counter_uniform(0xa15ebau ^ static_cast<std::uint64_t>(d), rep, c,
                                    -2.0, 2.0);
      const auto p = ParameterVector::from_values(d, ParameterVector::Mode::Full, values);
      const RealMatrix te = adjoint_matrix_exp(p, f);
      const RealMatrix td = adjoint_matrix_direct(unitary_from_params(p, gens), gens);
      worst = std::max(worst, (te - td).cwiseAbs().maxCoeff());
    }
    check(d, "adjoint-consistency", worst <= 1e-8, worst);
  }

  report.manifest.command = "check-algebra";
  report.manifest.tool_version = kVersion;
  report.manifest.params["d_min"] = std::to_string(d_min);
  report.manifest.params["d_max"] = std::to_string(d_max);
  report.manifest.params["vectors_per_d"] = std::to_string(vectors_per_d);
  report.manifest.duration_seconds = seconds_since(start);
  return report;
}

// ---- table1 ----------------------------------------------------------------

Table1Result run_table1(const Table1Options& opts) {
  for (int d : opts.d_list)
    if (d < 2 || d > 5) throw UsageError("table1 supports d in 2..5");
  const auto start = Clock::now();

  Table1Result result;
  result.rows.resize(opts.d_list.size());

  parallel_for(static_cast<int>(opts.d_list.size()), opts.common.workers, [&](int idx) {
    const int d = opts.d_list[idx];
    const GeneratorSet gens = build_generators(d);
    const BellSpec spec = BellSpec::standard(d);
    const MultistartOptions ms = to_multistart(opts.common);

    const auto optimized_b = [&](double r) {
      const BipartiteState state = tmsv_mapped_pure(r, d);
      return multistart_maximize(state, spec, gens, ms);
    };

    // coarse scan
    std::vector<double> grid;
    for (double r = opts.r_min; r <= opts.r_max + 1e-12; r += opts.r_step)
      grid.push_back(r);
    double best_r = grid.front();
    double best_b = -1e300;
    bool best_conv = false;
    for (double r : grid) {
      const OptimizationResult res = optimized_b(r);
      if (res.best_value > best_b) {
        best_b = res.best_value;
        best_r = r;
        best_conv = all_converged(res);
      }
    }

    const bool boundary =
        best_r >= grid.back() - 1e-12 || best_r <= grid.front() + 1e-12;
    if (!boundary) {
      // golden-section refinement of r on the bracketing interval
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double lo = best_r - opts.r_step, hi = best_r + opts.r_step;
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      OptimizationResult r1 = optimized_b(x1), r2 = optimized_b(x2);
      while (hi - lo > opts.r_resolution) {
        if (r1.best_value < r2.best_value) {
          lo = x1;
          x1 = x2;
          r1 = r2;
          x2 = lo + gr * (hi - lo);
          r2 = optimized_b(x2);
        } else {
          hi = x2;
          x2 = x1;
          r2 = r1;
          x1 = hi - gr * (hi - lo);
          r1 = optimized_b(x1);
        }
      }
      const OptimizationResult& better = r1.best_value >= r2.best_value ? r1 : r2;
      if (better.best_value > best_b) {
        best_b = better.best_value;
        best_r = r1.best_value >= r2.best_value ? x1 : x2;
        best_conv = all_converged(better);
      }
    }

    const OptimizationResult inf_res = multistart_maximize(
        BipartiteState::maximally_entangled(d), spec, gens, ms);

    result.rows[idx] = {d, best_r, best_b, inf_res.best_value, boundary, best_conv};
  });

  result.manifest.command = "table1";
  result.manifest.tool_version = kVersion;
  result.manifest.params["d_list"] = join_ints(opts.d_list);
  result.manifest.params["r_min"] = format_double(opts.r_min);
  result.manifest.params["r_max"] = format_double(opts.r_max);
  result.manifest.params["r_step"] = format_double(opts.r_step);
  result.manifest.params["r_resolution"] = format_double(opts.r_resolution);
  fill_common_params(result.manifest, opts.common);
  result.manifest.duration_seconds = seconds_since(start);
  return result;
}

// ---- fig1 ------------------------------------------------------------------

double optimize_qft_phases(const BipartiteState& state, const BellSpec& spec,
                           int grid, int refine_top, const OptimSettings& settings) {
  const int d = state.dim();
  const Objective objective = [&](const RealVector& x) {
    return bell_value_qft(state, Eigen::Vector4d(x[0], x[1], x[2], x[3]), spec);
  };

  // coarse grid over one period [0, d) per phase, keep the best few
  std::vector<std::pair<double, RealVector>> top;
  const double step = static_cast<double>(d) / grid;
  RealVector x(4);
  for (int i0 = 0; i0 < grid; ++i0)
    for (int i1 = 0; i1 < grid; ++i1)
      for (int i2 = 0; i2 < grid; ++i2)
        for (int i3 = 0; i3 < grid; ++i3) {
          x << i0 * step, i1 * step, i2 * step, i3 * step;
          const double v = objective(x);
          if (static_cast<int>(top.size()) < refine_top) {
            top.emplace_back(v, x);
            std::sort(top.begin(), top.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
          } else if (v > top.back().first) {
            top.back() = {v, x};
            std::sort(top.begin(), top.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
          }
        }

  double best = -1e300;
  for (const auto& [v, x0] : top) {
    const SingleRun run = conjugate_gradient(objective, x0, settings);
    best = std::max(best, run.value);
  }
  return best;
}

Fig1Result run_fig1(const Fig1Options& opts) {
  if (opts.phi_min < 0.0 || opts.phi_max > std::numbers::pi / 2 ||
      opts.phi_step <= 0.0 || opts.phi_max < opts.phi_min)
    throw UsageError("fig1 needs a phi grid inside [0, pi/2]");
  const auto start = Clock::now();

  std::vector<double> phis;
  for (double phi = opts.phi_min; phi <= opts.phi_max + 1e-12; phi += opts.phi_step)
    phis.push_back(phi);

  Fig1Result result;
  result.rows.resize(phis.size());
  const GeneratorSet gens = build_generators(2);
  const BellSpec spec = BellSpec::standard(2);

  parallel_for(static_cast<int>(phis.size()), opts.common.workers, [&](int idx) {
    const double phi = phis[idx];
    RealVector coeffs(2);
    coeffs << std::cos(phi), std::sin(phi);
    const BipartiteState state = BipartiteState::schmidt_diagonal(coeffs);

    const OptimizationResult su2 =
        multistart_maximize(state, spec, gens, to_multistart(opts.common));
    const double qft = optimize_qft_phases(state, spec, opts.qft_grid,
                                           opts.qft_refine_top, OptimSettings{});

    result.rows[idx] = {phi, std::sqrt(2.0) * std::sin(phi), su2.best_value, qft,
                        all_converged(su2)};
  });

  result.manifest.command = "fig1";
  result.manifest.tool_version = kVersion;
  result.manifest.params["phi_min"] = format_double(opts.phi_min);
  result.manifest.params["phi_max"] = format_double(opts.phi_max);
  result.manifest.params["phi_step"] = format_double(opts.phi_step);
  result.manifest.params["qft_grid"] = std::to_string(opts.qft_grid);
  result.manifest.params["qft_refine_top"] = std::to_string(opts.qft_refine_top);
  fill_common_params(result.manifest, opts.common);
  result.manifest.duration_seconds = seconds_since(start);
  return result;
}

// ---- fig2 ------------------------------------------------------------------

Fig2Result run_fig2(const Fig2Options& opts) {
  const auto start = Clock::now();

  std::vector<double> tanh_grid = opts.tanh_r_grid;
  if (tanh_grid.empty())
    for (int i = 1; i <= 19; ++i) tanh_grid.push_back(0.05 * i);
  for (double t : tanh_grid)
    if (t <= 0.0 || t >= 1.0) throw UsageError("tanh r grid must lie in (0, 1)");
  if (opts.include_infinite) tanh_grid.push_back(1.0); // infinite-squeezing sentinel

  struct Cell {
    int d;
    double tanh_r;
  };
  std::vector<Cell> cells;
  for (int d : opts.d_list) {
    if (d < 2) throw UsageError("fig2 needs d >= 2");
    for (double t : tanh_grid) cells.push_back({d, t});
  }

  Fig2Result result;
  result.rows.resize(cells.size());

  parallel_for(static_cast<int>(cells.size()), opts.common.workers, [&](int idx) {
    const auto [d, tanh_r] = cells[idx];
    const GeneratorSet gens = build_generators(d);
    const BellSpec spec = BellSpec::standard(d);
    const double r = tanh_r >= 1.0 ? std::numeric_limits<double>::infinity()
                                   : std::atanh(tanh_r);
    const BipartiteState state = tmsv_mapped_pure(r, d);
    const OptimizationResult res =
        multistart_maximize(state, spec, gens, to_multistart(opts.common));
    result.rows[idx] = {d, tanh_r, res.best_value, all_converged(res), res.best_x};
  });

  result.manifest.command = "fig2";
  result.manifest.tool_version = kVersion;
  result.manifest.params["d_list"] = join_ints(opts.d_list);
  result.manifest.params["tanh_r_grid"] = join_doubles(tanh_grid);
  fill_common_params(result.manifest, opts.common);
  result.manifest.duration_seconds = seconds_since(start);
  return result;
}

// ---- optimize --------------------------------------------------------------

OptimizeResult run_optimize(const OptimizeOptions& opts) {
  if (opts.d < 2) throw UsageError("dimension must be at least 2");
  const auto start = Clock::now();

  const BipartiteState state = make_state(opts.state_descriptor, opts.d);
  const GeneratorSet gens = build_generators(opts.d);
  const BellSpec spec = BellSpec::standard(opts.d);
  OptimizeResult out;
  out.result = multistart_maximize(state, spec, gens,
                                   to_multistart(opts.common, opts.common.workers));

  out.manifest.command = "optimize";
  out.manifest.tool_version = kVersion;
  out.manifest.params["d"] = std::to_string(opts.d);
  out.manifest.params["state"] = opts.state_descriptor;
  fill_common_params(out.manifest, opts.common);
  out.manifest.duration_seconds = seconds_since(start);
  return out;
}

// ---- output ----------------------------------------------------------------

namespace {

const char* kTable1Header = "d,r_m,b_rm,b_inf,boundary";
const char* kFig1Header = "phi,epsilon,b_su2,b_qft";
const char* kFig2Header = "d,tanh_r,b";

} // namespace

void write_table1_csv(std::ostream& out, const Table1Result& result) {
  result.manifest.write_csv_comments(out);
  out << kTable1Header << "\n";
  for (const auto& row : result.rows)
    out << row.d << ',' << format_double(row.r_m) << ',' << format_double(row.b_rm)
        << ',' << format_double(row.b_inf) << ',' << (row.boundary ? 1 : 0) << "\n";
}

void write_fig1_csv(std::ostream& out, const Fig1Result& result) {
  result.manifest.write_csv_comments(out);
  out << kFig1Header << "\n";
  for (const auto& row : result.rows)
    out << format_double(row.phi) << ',' << format_double(row.epsilon) << ','
        << format_double(row.b_su2) << ',' << format_double(row.b_qft) << "\n";
}

void write_fig2_csv(std::ostream& out, const Fig2Result& result) {
  result.manifest.write_csv_comments(out);
  out << kFig2Header << "\n";
  for (const auto& row : result.rows)
    out << row.d << ',' << format_double(row.tanh_r) << ',' << format_double(row.b)
        << "\n";
}

namespace {

nlohmann::json rows_payload(const RunManifest& manifest, nlohmann::json rows) {
  return {{"manifest", manifest.to_json()}, {"rows", std::move(rows)}};
}

} // namespace

nlohmann::json table1_json(const Table1Result& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows)
    rows.push_back({{"d", row.d},
                    {"r_m", row.r_m},
                    {"b_rm", row.b_rm},
                    {"b_inf", row.b_inf},
                    {"boundary", row.boundary}});
  return rows_payload(result.manifest, std::move(rows));
}

nlohmann::json fig1_json(const Fig1Result& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows)
    rows.push_back({{"phi", row.phi},
                    {"epsilon", row.epsilon},
                    {"b_su2", row.b_su2},
                    {"b_qft", row.b_qft}});
  return rows_payload(result.manifest, std::move(rows));
}

nlohmann::json fig2_json(const Fig2Result& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows)
    rows.push_back({{"d", row.d}, {"tanh_r", row.tanh_r}, {"b", row.b}});
  return rows_payload(result.manifest, std::move(rows));
}

nlohmann::json fig2_sidecar_json(const Fig2Result& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json x = nlohmann::json::array();
    for (int i = 0; i < row.best_x.size(); ++i) x.push_back(row.best_x[i]);
    rows.push_back(
        {{"d", row.d}, {"tanh_r", row.tanh_r}, {"b", row.b}, {"best_x", std::move(x)}});
  }
  return rows_payload(result.manifest, std::move(rows));
}

nlohmann::json optimize_json(const OptimizeResult& result) {
  const OptimizationResult& r = result.result;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : r.trace)
    trace.push_back({{"final_value", t.final_value},
                     {"iterations", t.iterations},
                     {"converged", t.converged}});
  const auto vector_json = [](const ParameterVector& p) {
    nlohmann::json values = nlohmann::json::array();
    for (int i = 0; i < p.values.size(); ++i) values.push_back(p.values[i]);
    return values;
  };
  return {{"manifest", result.manifest.to_json()},
          {"best_value", r.best_value},
          {"method", method_name(r.method)},
          {"restarts_used", r.restarts_used},
          {"seed", r.seed},
          {"best_restart", r.best_index},
          {"converged", r.trace[r.best_index].converged},
          {"best_config",
           {{"a1", vector_json(r.best_config.a1)},
            {"a2", vector_json(r.best_config.a2)},
            {"b1", vector_json(r.best_config.b1)},
            {"b2", vector_json(r.best_config.b2)}}},
          {"trace", std::move(trace)}};
}

} // namespace qbell::cli
