// Maximization of the Bell function over measurement configurations:
// steepest descent, Polak-Ribiere conjugate gradient and dynamic relaxation,
// with deterministic multi-start.

#pragma once

#include "qbell/bell.hpp"
#include "qbell/correlation.hpp"
#include "qbell/sud_algebra.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace qbell {

using Objective = std::function<double(const RealVector&)>;

enum class Method { SteepestDescent, ConjugateGradient, DynamicRelaxation };

const char* method_name(Method m);

// Central finite differences with step h_i = 1e-5 * max(1, |x_i|).
// Throws on a non-finite objective value.
RealVector fd_gradient(const Objective& f, const RealVector& x);

// Convergence rule shared by all methods:
// max_i |dB/dp_i| * max(|p_i|, 1) <= tol. The max(. , 1) guard keeps the
// product meaningful at the origin.
bool gradient_converged(const RealVector& grad, const RealVector& x, double tol);

struct OptimSettings {
  int max_iters = 2000;
  double tol = 1e-6;
  double armijo = 1e-4;
  double init_step = 1.0;
  int max_halvings = 60;
};

struct RelaxationSettings {
  double mass = 0.1;
  double friction = 1.0; // paper range (0.5, 1.5)
  double dt = 0.05;      // paper range (0.01, 0.1)
  int max_steps = 4000;
  double tol = 1e-6;

  // Throws on non-positive values; warns on stderr when friction or dt is
  // outside the recommended range.
  void validate() const;
};

struct SingleRun {
  RealVector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// All three maximize f; line-search failure or divergence yields a
// non-converged result rather than an exception.
SingleRun steepest_descent(const Objective& f, RealVector x0,
                           const OptimSettings& settings = {});
SingleRun conjugate_gradient(const Objective& f, RealVector x0,
                             const OptimSettings& settings = {});
// Integrates m p'' = -gamma p' + grad f(p) (the damped particle in the
// negated potential) with classical fourth-order Runge-Kutta from zero
// initial velocity.
SingleRun dynamic_relaxation(const Objective& f, RealVector x0,
                             const RelaxationSettings& settings = {});

// Search vector <-> Bell measurement configuration. Slices of the search
// vector map to the four parameter vectors in label order A1, A2, B1, B2.
struct ObjectiveAdapter {
  ObjectiveAdapter(const BipartiteState& state, BellSpec spec,
                   const GeneratorSet& gens, ParameterVector::Mode mode);

  int dim() const { return 4 * per_vector_; }
  MeasurementConfig unpack(const RealVector& x) const;
  double operator()(const RealVector& x) const;
  Objective fn() const;

  const BipartiteState* state;
  BellSpec spec;
  const GeneratorSet* gens;
  ParameterVector::Mode mode;
  CorrelationMatrix mu;

 private:
  int per_vector_ = 0;
};

struct RestartTrace {
  double final_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct MultistartOptions {
  Method method = Method::ConjugateGradient;
  int n_restarts = 20;
  std::uint64_t seed = 0;
  ParameterVector::Mode mode = ParameterVector::Mode::Reduced;
  int n_workers = 1;
  OptimSettings descent{};
  RelaxationSettings relaxation{};
};

struct MultistartRun {
  RealVector best_x;
  double best_value = 0.0;
  int best_index = 0; // lowest restart index attaining the best value
  std::vector<RestartTrace> trace;
};

// Restarts from points drawn uniformly from [lo, hi) per coordinate by the
// counter-based generator; restarts are independent and may run on several
// workers, with a deterministic ordered max-reduction.
MultistartRun multistart_box(const Objective& f, int dim, double lo, double hi,
                             const MultistartOptions& opts);

struct OptimizationResult {
  double best_value = 0.0;
  MeasurementConfig best_config;
  Method method = Method::ConjugateGradient;
  int restarts_used = 0;
  std::vector<RestartTrace> trace;
  std::uint64_t seed = 0;
  RealVector best_x;
  int best_index = 0;
};

// Multi-start maximization of the Bell function, start points uniform in
// [-pi, pi) per coordinate.
OptimizationResult multistart_maximize(const BipartiteState& state,
                                       const BellSpec& spec,
                                       const GeneratorSet& gens,
                                       const MultistartOptions& opts);

} // namespace qbell
