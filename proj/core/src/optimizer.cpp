#include "qbell/optimizer.hpp"

#include "qbell/rng.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <utility>

namespace qbell {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_eval(const Objective& f, const RealVector& x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw std::runtime_error("objective returned a non-finite value");
  return v;
}

struct LineSearchResult {
  bool accepted = false;
  double step = 0.0;
  double value = 0.0;
};

// Backtracking Armijo search along an ascent direction. With `interpolate`
// set, an accepted step is refined once by maximizing the quadratic fit
// through (0, f0), the slope and the trial point; on a quadratic objective
// that lands on the exact line maximum.
LineSearchResult armijo_backtrack(const Objective& f, const RealVector& x,
                                  const RealVector& dir, double f0, double slope,
                                  const OptimSettings& s, bool interpolate) {
  double step = s.init_step;
  for (int h = 0; h <= s.max_halvings; ++h) {
    const double trial = checked_eval(f, x + step * dir);
    if (trial >= f0 + s.armijo * step * slope) {
      if (interpolate) {
        const double curvature = (trial - f0 - slope * step) / (step * step);
        if (curvature < 0.0) {
          const double refined_step = -slope / (2.0 * curvature);
          if (std::isfinite(refined_step) && refined_step > 0.0) {
            const double refined = checked_eval(f, x + refined_step * dir);
            if (refined > trial) return {true, refined_step, refined};
          }
        }
      }
      return {true, step, trial};
    }
    step *= 0.5;
  }
  return {false, 0.0, f0};
}

} // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::SteepestDescent: return "sd";
    case Method::ConjugateGradient: return "cg";
    case Method::DynamicRelaxation: return "relax";
  }
  return "?";
}

RealVector fd_gradient(const Objective& f, const RealVector& x) {
  const int n = static_cast<int>(x.size());
  RealVector g(n);
  RealVector probe = x;
  for (int i = 0; i < n; ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double fp = checked_eval(f, probe);
    probe[i] = x[i] - h;
    const double fm = checked_eval(f, probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

bool gradient_converged(const RealVector& grad, const RealVector& x, double tol) {
  for (int i = 0; i < grad.size(); ++i)
    if (std::abs(grad[i]) * std::max(std::abs(x[i]), 1.0) > tol) return false;
  return true;
}

void RelaxationSettings::validate() const {
  if (mass <= 0.0 || friction <= 0.0 || dt <= 0.0 || max_steps <= 0 || tol <= 0.0)
    throw std::invalid_argument("relaxation settings must be positive");
  if (friction <= 0.5 || friction >= 1.5)
    std::cerr << "qbell: warning: friction " << friction
              << " outside the recommended range (0.5, 1.5)\n";
  if (dt <= 0.01 || dt >= 0.1)
    std::cerr << "qbell: warning: time step " << dt
              << " outside the recommended range (0.01, 0.1)\n";
}

SingleRun steepest_descent(const Objective& f, RealVector x0,
                           const OptimSettings& settings) {
  SingleRun run;
  run.x = std::move(x0);
  run.value = checked_eval(f, run.x);
  for (run.iterations = 0; run.iterations < settings.max_iters; ++run.iterations) {
    const RealVector g = fd_gradient(f, run.x);
    if (gradient_converged(g, run.x, settings.tol)) {
      run.converged = true;
      return run;
    }
    const double slope = g.squaredNorm();
    if (slope == 0.0) {
      run.converged = true;
      return run;
    }
    const LineSearchResult ls =
        armijo_backtrack(f, run.x, g, run.value, slope, settings, false);
    if (!ls.accepted) return run; // stuck: report non-converged
    run.x += ls.step * g;
    run.value = ls.value;
  }
  return run;
}

SingleRun conjugate_gradient(const Objective& f, RealVector x0,
                             const OptimSettings& settings) {
  SingleRun run;
  run.x = std::move(x0);
  run.value = checked_eval(f, run.x);
  const int n = static_cast<int>(run.x.size());

  RealVector g = fd_gradient(f, run.x);
  RealVector dir = g;
  int since_restart = 0;
  for (run.iterations = 0; run.iterations < settings.max_iters; ++run.iterations) {
    if (gradient_converged(g, run.x, settings.tol)) {
      run.converged = true;
      return run;
    }
    double slope = g.dot(dir);
    if (slope <= 0.0 || since_restart >= n) { // non-ascent or periodic restart
      dir = g;
      slope = g.squaredNorm();
      since_restart = 0;
      if (slope == 0.0) {
        run.converged = true;
        return run;
      }
    }
    const LineSearchResult ls =
        armijo_backtrack(f, run.x, dir, run.value, slope, settings, true);
    if (!ls.accepted) {
      if (since_restart == 0) return run; // steepest direction already failed
      dir = g;                            // retry once from the gradient
      since_restart = 0;
      --run.iterations;
      continue;
    }
    run.x += ls.step * dir;
    run.value = ls.value;

    const RealVector g_next = fd_gradient(f, run.x);
    const double denom = g.squaredNorm();
    const double beta =
        denom > 0.0 ? std::max(0.0, g_next.dot(g_next - g) / denom) : 0.0; // PR+
    dir = g_next + beta * dir;
    g = g_next;
    ++since_restart;
  }
  return run;
}

SingleRun dynamic_relaxation(const Objective& f, RealVector x0,
                             const RelaxationSettings& settings) {
  settings.validate();
  SingleRun run;
  run.x = std::move(x0);
  const int n = static_cast<int>(run.x.size());
  RealVector v = RealVector::Zero(n);

  // State (p, v); force is +grad f since the damped particle moves in the
  // negated potential. Classical RK4 with fixed step.
  const auto accel = [&](const RealVector& p, const RealVector& vel) -> RealVector {
    return (fd_gradient(f, p) - settings.friction * vel) / settings.mass;
  };

  for (run.iterations = 0; run.iterations < settings.max_steps; ++run.iterations) {
    const RealVector g = fd_gradient(f, run.x);
    if (gradient_converged(g, run.x, settings.tol)) {
      run.converged = true;
      break;
    }
    if (run.x.norm() > 1e6) break; // diverged: report non-converged

    const double dt = settings.dt;
    const RealVector k1p = v;
    const RealVector k1v = (g - settings.friction * v) / settings.mass;
    const RealVector k2p = v + 0.5 * dt * k1v;
    const RealVector k2v = accel(run.x + 0.5 * dt * k1p, v + 0.5 * dt * k1v);
    const RealVector k3p = v + 0.5 * dt * k2v;
    const RealVector k3v = accel(run.x + 0.5 * dt * k2p, v + 0.5 * dt * k2v);
    const RealVector k4p = v + dt * k3v;
    const RealVector k4v = accel(run.x + dt * k3p, v + dt * k3v);

    run.x += (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  run.value = checked_eval(f, run.x);
  return run;
}

ObjectiveAdapter::ObjectiveAdapter(const BipartiteState& state_, BellSpec spec_,
                                   const GeneratorSet& gens_, ParameterVector::Mode mode_)
    : state(&state_), spec(std::move(spec_)), gens(&gens_), mode(mode_),
      mu(correlation_matrix(state_.dim())),
      per_vector_(ParameterVector::length(state_.dim(), mode_)) {
  spec.validate();
  if (spec.d != state_.dim() || gens_.d != state_.dim())
    throw std::invalid_argument("objective adapter dimension mismatch");
}

MeasurementConfig ObjectiveAdapter::unpack(const RealVector& x) const {
  if (x.size() != dim()) throw std::invalid_argument("search vector has wrong length");
  const int d = state->dim();
  const int m = per_vector_;
  return {ParameterVector::from_values(d, mode, x.segment(0 * m, m)),
          ParameterVector::from_values(d, mode, x.segment(1 * m, m)),
          ParameterVector::from_values(d, mode, x.segment(2 * m, m)),
          ParameterVector::from_values(d, mode, x.segment(3 * m, m))};
}

double ObjectiveAdapter::operator()(const RealVector& x) const {
  const MeasurementConfig config = unpack(x);
  const std::array<Matrix, 4> us = {
      unitary_from_params(config.a1, *gens), unitary_from_params(config.a2, *gens),
      unitary_from_params(config.b1, *gens), unitary_from_params(config.b2, *gens)};
  return bell_value_unitaries(*state, us, spec, mu);
}

Objective ObjectiveAdapter::fn() const {
  return [this](const RealVector& x) { return (*this)(x); };
}

MultistartRun multistart_box(const Objective& f, int dim, double lo, double hi,
                             const MultistartOptions& opts) {
  if (opts.n_restarts < 1) throw std::invalid_argument("need at least one restart");
  if (dim < 1) throw std::invalid_argument("empty search space");

  std::vector<SingleRun> runs(opts.n_restarts);
  const auto run_one = [&](int r) {
    RealVector x0(dim);
    for (int c = 0; c < dim; ++c)
      x0[c] = counter_uniform(opts.seed, static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(c), lo, hi);
    switch (opts.method) {
      case Method::SteepestDescent:
        runs[r] = steepest_descent(f, std::move(x0), opts.descent);
        break;
      case Method::ConjugateGradient:
        runs[r] = conjugate_gradient(f, std::move(x0), opts.descent);
        break;
      case Method::DynamicRelaxation:
        runs[r] = dynamic_relaxation(f, std::move(x0), opts.relaxation);
        break;
    }
  };

  const int workers = std::max(1, std::min(opts.n_workers, opts.n_restarts));
  if (workers == 1) {
    for (int r = 0; r < opts.n_restarts; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < opts.n_restarts; r = next.fetch_add(1))
          run_one(r);
      });
    for (auto& t : pool) t.join();
  }

  // Ordered max-reduction; strict comparison keeps the lowest winning index.
  MultistartRun result;
  result.trace.reserve(opts.n_restarts);
  result.best_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.n_restarts; ++r) {
    const SingleRun& run = runs[r];
    result.trace.push_back({run.value, run.iterations, run.converged});
    if (run.value > result.best_value) {
      result.best_value = run.value;
      result.best_x = run.x;
      result.best_index = r;
    }
  }
  return result;
}

OptimizationResult multistart_maximize(const BipartiteState& state,
                                       const BellSpec& spec,
                                       const GeneratorSet& gens,
                                       const MultistartOptions& opts) {
  const ObjectiveAdapter adapter(state, spec, gens, opts.mode);
  const MultistartRun run = multistart_box(adapter.fn(), adapter.dim(), -kPi, kPi, opts);

  OptimizationResult result;
  result.best_value = run.best_value;
  result.best_x = run.best_x;
  result.best_index = run.best_index;
  result.best_config = adapter.unpack(run.best_x);
  result.method = opts.method;
  result.restarts_used = opts.n_restarts;
  result.trace = run.trace;
  result.seed = opts.seed;
  return result;
}

} // namespace qbell
