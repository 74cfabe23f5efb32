// Modulo-d block folding of truncated continuous-variable states onto
// d-dimensional states, and the two-mode squeezed vacuum with its analytic
// d-dimensional image.

#pragma once

#include "qbell/correlation.hpp"
#include "qbell/sud_algebra.hpp"

#include <Eigen/Dense>

#include <utility>

namespace qbell {

// A 1- or 2-mode state over the truncated Fock basis {|0>, ..., |n_max-1>}.
// States produced by truncation keep their raw coefficients and record the
// missing tail mass; normalized() rescales explicitly.
struct CVState {
  int modes = 1;
  int n_max = 0;
  bool pure = true;
  Eigen::VectorXcd pure_single; // modes == 1, pure
  Matrix pure_two;              // modes == 2, pure: psi(n, m)
  Matrix rho;                   // mixed: n_max^modes square density
  double truncation_deficit = 0.0;

  static CVState pure_one_mode(Eigen::VectorXcd amplitudes, double deficit = 0.0);
  static CVState pure_two_mode(Matrix amplitudes, double deficit = 0.0);
  static CVState mixed_one_mode(Matrix density, double deficit = 0.0);
  static CVState mixed_two_mode(Matrix density, int n_max, double deficit = 0.0);

  double norm() const; // Frobenius norm (pure) or trace (mixed)
  CVState normalized() const;
};

// Truncated two-mode squeezed vacuum, c_n = tanh(r)^n / cosh(r) for n < n_max.
// The truncation deficit 1 - sum |c_n|^2 = tanh(r)^(2 n_max) is recorded;
// amplitudes are not rescaled. Throws for r < 0 or n_max < 1.
CVState tmsv_state(double r, int n_max);

// (rho_d)_{k,k'} = sum_m rho_{dm+k, dm+k'}. Requires the truncation to be
// block-complete (rows divisible by d); throws otherwise.
Matrix cp_map_single(const Matrix& rho, int d);

// Two-mode folding, (rho_12)_{(k,l),(k',l')} = sum_{m,n}
// rho_{(dm+k, dn+l),(dm+k', dn+l')}, input indexed mode-A-major.
Matrix cp_map_two_mode(const Matrix& rho, int d);

// Same map applied to a pure two-mode amplitude matrix without forming the
// full density operator.
Matrix cp_map_two_mode_pure(const Matrix& psi, int d);

// Folds a two-mode CVState onto a bipartite d-dimensional state.
BipartiteState cp_map(const CVState& state, int d);

// Analytic image of the two-mode squeezed vacuum: Schmidt coefficients
// proportional to tanh(r)^n for n < d. r = 0 gives |0,0>; an infinite r
// (std::numeric_limits infinity) gives the maximally entangled state.
BipartiteState tmsv_mapped_pure(double r, int d);

// Evaluates the lifted block-diagonal observable A = I (x) Omega(a) on the
// CV state against Omega(a) on the folded d-dimensional state; the two
// expectation values agree for block-complete truncations. Two-mode inputs
// are reduced to mode A first.
std::pair<double, double> lifted_observable_check(const BlochDecomposition& a,
                                                  const CVState& state, int d,
                                                  const GeneratorSet& gens);

} // namespace qbell
