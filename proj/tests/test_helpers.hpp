// Shared helpers for the unit and acceptance suites: deterministic random
// inputs and independent reference evaluators (oracles).

#pragma once

#include "qbell/bell.hpp"
#include "qbell/correlation.hpp"
#include "qbell/sud_algebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

namespace qbell::testing {

inline RealVector random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  RealVector v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline Matrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(dist(rng), dist(rng));
  return 0.5 * (m + m.adjoint()).eval();
}

inline Matrix random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(dist(rng), dist(rng));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

inline ParameterVector random_params(std::mt19937_64& rng, int d,
                                     ParameterVector::Mode mode,
                                     double scale = 1.0) {
  return ParameterVector::from_values(
      d, mode, random_vector(rng, ParameterVector::length(d, mode), -scale, scale));
}

// Independent CHSH evaluator for d = 2: correlations as expectations of
// dichotomic +-1 observables U (|1><1| - |2><2|) U^dag, assembled with the
// same slot-literal term layout but none of the mu machinery.
inline double chsh_oracle(const BipartiteState& state,
                          const std::array<Matrix, 4>& label_unitaries) {
  const auto observable = [](const Matrix& u) -> Matrix {
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 0) = 1.0;
    sigma(1, 1) = -1.0;
    return u * sigma * u.adjoint();
  };
  const auto expectation = [&](const Matrix& oa, const Matrix& ob) {
    Matrix joint(4, 4);
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n)
        for (int mp = 0; mp < 2; ++mp)
          for (int np = 0; np < 2; ++np)
            joint(m * 2 + n, mp * 2 + np) = oa(m, mp) * ob(n, np);
    return (joint * state.density()).trace().real();
  };
  const Matrix oa1 = observable(label_unitaries[0]);
  const Matrix oa2 = observable(label_unitaries[1]);
  const Matrix ob1 = observable(label_unitaries[2]);
  const Matrix ob2 = observable(label_unitaries[3]);
  return expectation(oa1, ob1) + expectation(oa2, ob2) + expectation(ob2, oa1) -
         expectation(oa2, ob1);
}

// Grid-search oracle for the CHSH maximum on cos(phi)|00> + sin(phi)|11>.
// Measurement directions are restricted to the plane spanned by the z and x
// correlation axes (the correlation tensor is diag(sin 2phi, -sin 2phi, 1),
// so an optimal pair of directions lies in that plane); the slot-1 settings
// are maximized analytically for each grid point of the slot-2 angles.
inline double chsh_grid_oracle(double phi, int grid = 4096) {
  const double s = std::sin(2.0 * phi);
  double best = -8.0;
  std::vector<double> ct(grid), st(grid);
  for (int i = 0; i < grid; ++i) {
    const double theta = 2.0 * M_PI * i / grid;
    ct[i] = std::cos(theta);
    st[i] = std::sin(theta);
  }
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      // E(theta_a, theta_b) = cos a cos b + s sin a sin b = a . v(b)
      const double v1x = ct[i], v1z = s * st[i];
      const double v2x = ct[j], v2z = s * st[j];
      const double sum = std::hypot(v1x + v2x, v1z + v2z);
      const double diff = std::hypot(v2x - v1x, v2z - v1z);
      best = std::max(best, sum + diff);
    }
  }
  return best;
}

} // namespace qbell::testing
