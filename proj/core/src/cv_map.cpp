#include "qbell/cv_map.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qbell {

namespace {

void check_block_complete(Eigen::Index n, int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (n < d || n % d != 0)
    throw std::invalid_argument(
        "truncation is not block-complete (n_max must be a positive multiple of d)");
}

} // namespace

CVState CVState::pure_one_mode(Eigen::VectorXcd amplitudes, double deficit) {
  CVState s;
  s.modes = 1;
  s.n_max = static_cast<int>(amplitudes.size());
  s.pure = true;
  s.pure_single = std::move(amplitudes);
  s.truncation_deficit = deficit;
  return s;
}

CVState CVState::pure_two_mode(Matrix amplitudes, double deficit) {
  if (amplitudes.rows() != amplitudes.cols())
    throw std::invalid_argument("two-mode amplitudes must share n_max per mode");
  CVState s;
  s.modes = 2;
  s.n_max = static_cast<int>(amplitudes.rows());
  s.pure = true;
  s.pure_two = std::move(amplitudes);
  s.truncation_deficit = deficit;
  return s;
}

CVState CVState::mixed_one_mode(Matrix density, double deficit) {
  if (density.rows() != density.cols())
    throw std::invalid_argument("density must be square");
  CVState s;
  s.modes = 1;
  s.n_max = static_cast<int>(density.rows());
  s.pure = false;
  s.rho = std::move(density);
  s.truncation_deficit = deficit;
  return s;
}

CVState CVState::mixed_two_mode(Matrix density, int n_max, double deficit) {
  if (density.rows() != density.cols() ||
      density.rows() != static_cast<Eigen::Index>(n_max) * n_max)
    throw std::invalid_argument("two-mode density must be n_max^2 square");
  CVState s;
  s.modes = 2;
  s.n_max = n_max;
  s.pure = false;
  s.rho = std::move(density);
  s.truncation_deficit = deficit;
  return s;
}

double CVState::norm() const {
  if (pure) return modes == 1 ? pure_single.norm() : pure_two.norm();
  return rho.trace().real();
}

CVState CVState::normalized() const {
  CVState s = *this;
  const double n = norm();
  if (n <= 0.0) throw std::logic_error("cannot normalize a zero state");
  if (pure) {
    if (modes == 1)
      s.pure_single /= n;
    else
      s.pure_two /= n;
  } else {
    s.rho /= n;
  }
  s.truncation_deficit = 0.0;
  return s;
}

CVState tmsv_state(double r, int n_max) {
  if (r < 0.0) throw std::invalid_argument("squeezing parameter must be nonnegative");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const double t = std::tanh(r);
  const double sech = 1.0 / std::cosh(r);
  Matrix psi = Matrix::Zero(n_max, n_max);
  double mass = 0.0;
  double c = sech;
  for (int n = 0; n < n_max; ++n) {
    psi(n, n) = c;
    mass += c * c;
    c *= t;
  }
  return CVState::pure_two_mode(std::move(psi), 1.0 - mass);
}

Matrix cp_map_single(const Matrix& rho, int d) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density must be square");
  check_block_complete(rho.rows(), d);
  const Eigen::Index blocks = rho.rows() / d;
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index m = 0; m < blocks; ++m)
    out += rho.block(m * d, m * d, d, d);
  return out;
}

Matrix cp_map_two_mode(const Matrix& rho, int d) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density must be square");
  const auto total = rho.rows();
  const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(total))));
  if (n * n != total)
    throw std::invalid_argument("two-mode density dimension is not a perfect square");
  check_block_complete(n, d);
  const Eigen::Index blocks = n / d;

  Matrix out = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int kp = 0; kp < d; ++kp)
        for (int lp = 0; lp < d; ++lp) {
          std::complex<double> s = 0.0;
          for (Eigen::Index m = 0; m < blocks; ++m)
            for (Eigen::Index q = 0; q < blocks; ++q)
              s += rho((m * d + k) * n + (q * d + l), (m * d + kp) * n + (q * d + lp));
          out(k * d + l, kp * d + lp) = s;
        }
  return out;
}

Matrix cp_map_two_mode_pure(const Matrix& psi, int d) {
  if (psi.rows() != psi.cols()) throw std::invalid_argument("amplitudes must be square");
  check_block_complete(psi.rows(), d);
  const Eigen::Index blocks = psi.rows() / d;

  Matrix out = Matrix::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int kp = 0; kp < d; ++kp)
        for (int lp = 0; lp < d; ++lp) {
          std::complex<double> s = 0.0;
          for (Eigen::Index m = 0; m < blocks; ++m)
            for (Eigen::Index q = 0; q < blocks; ++q)
              s += psi(m * d + k, q * d + l) * std::conj(psi(m * d + kp, q * d + lp));
          out(k * d + l, kp * d + lp) = s;
        }
  return out;
}

BipartiteState cp_map(const CVState& state, int d) {
  if (state.modes != 2)
    throw std::invalid_argument("cp_map to a bipartite state needs a two-mode input");
  Matrix rho_d = state.pure ? cp_map_two_mode_pure(state.pure_two, d)
                            : cp_map_two_mode(state.rho, d);
  // Guard against tiny asymmetries from summation order before validation.
  rho_d = 0.5 * (rho_d + rho_d.adjoint()).eval();
  return BipartiteState::mixed(std::move(rho_d));
}

BipartiteState tmsv_mapped_pure(double r, int d) {
  if (r < 0.0) throw std::invalid_argument("squeezing parameter must be nonnegative");
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (std::isinf(r)) return BipartiteState::maximally_entangled(d);
  RealVector coeffs(d);
  const double t = std::tanh(r);
  double c = 1.0;
  for (int n = 0; n < d; ++n) {
    coeffs[n] = c;
    c *= t;
  }
  return BipartiteState::schmidt_diagonal(coeffs);
}

std::pair<double, double> lifted_observable_check(const BlochDecomposition& a,
                                                  const CVState& state, int d,
                                                  const GeneratorSet& gens) {
  if (gens.d != d) throw std::invalid_argument("generator dimension mismatch");
  check_block_complete(state.n_max, d);

  // Reduce to the first mode; the lifted observable acts there alone.
  Matrix rho_a;
  if (state.modes == 1) {
    rho_a = state.pure ? Matrix(state.pure_single * state.pure_single.adjoint())
                       : state.rho;
  } else if (state.pure) {
    rho_a = state.pure_two * state.pure_two.adjoint();
  } else {
    const Eigen::Index n = state.n_max;
    rho_a = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index b = 0; b < n; ++b) rho_a(i, j) += state.rho(i * n + b, j * n + b);
  }

  const Matrix omega = bloch_reconstruct(a, gens);
  const Eigen::Index blocks = state.n_max / d;
  std::complex<double> lifted = 0.0;
  for (Eigen::Index m = 0; m < blocks; ++m)
    lifted += (omega * rho_a.block(m * d, m * d, d, d)).trace();

  const Matrix folded = cp_map_single(rho_a, d);
  const std::complex<double> direct = (omega * folded).trace();
  return {lifted.real(), direct.real()};
}

} // namespace qbell
