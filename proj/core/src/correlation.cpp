#include "qbell/correlation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qbell {

namespace {

void check_dimension(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
}

} // namespace

CorrelationMatrix correlation_matrix(int d) {
  check_dimension(d);
  CorrelationMatrix m;
  m.d = d;

  // Integer numerators over the common denominator d-1 keep the entries
  // exact rationals: mu_{ij} = ((d-1) - 2 ((i-j) mod d)) / (d-1).
  m.mu.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int residue = ((i - j) % d + d) % d;
      m.mu(i, j) = static_cast<double>((d - 1) - 2 * residue) / (d - 1);
    }
  }

  // mu~_{kl} = sum_{i<=k+1} sum_{j<=l+1} g^i_{k-i+1} g^j_{l-j+1} mu_{ij}
  std::vector<ProjectorCoeffs> coeffs;
  coeffs.reserve(d);
  for (int j = 1; j <= d; ++j) coeffs.push_back(diagonal_projector_coeffs(j, d));

  m.mu_tilde = RealMatrix::Zero(d - 1, d - 1);
  for (int k = 1; k <= d - 1; ++k) {
    for (int l = 1; l <= d - 1; ++l) {
      double s = 0.0;
      for (int i = 1; i <= k + 1; ++i)
        for (int j = 1; j <= l + 1; ++j)
          s += coeffs[i - 1].g[k - i + 1] * coeffs[j - 1].g[l - j + 1] * m.mu(i - 1, j - 1);
      m.mu_tilde(k - 1, l - 1) = s;
    }
  }
  return m;
}

Matrix correlation_observable(const CorrelationMatrix& mu) {
  const int d = mu.d;
  Matrix e = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i * d + j, i * d + j) = mu.mu(i, j);
  return e;
}

BipartiteState BipartiteState::pure(Matrix amplitudes) {
  if (amplitudes.rows() != amplitudes.cols() || amplitudes.rows() < 2)
    throw std::invalid_argument("amplitude matrix must be square, d >= 2");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("pure state is not normalized");
  BipartiteState s;
  s.d_ = static_cast<int>(amplitudes.rows());
  s.pure_ = true;
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

BipartiteState BipartiteState::mixed(Matrix density) {
  const auto n = density.rows();
  if (n != density.cols()) throw std::invalid_argument("density must be square");
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(d) * d != n || d < 2)
    throw std::invalid_argument("density dimension is not d^2 with d >= 2");
  if ((density - density.adjoint()).norm() > 1e-10)
    throw std::invalid_argument("density is not Hermitian");
  if (std::abs(density.trace().real() - 1.0) > 1e-10 ||
      std::abs(density.trace().imag()) > 1e-10)
    throw std::invalid_argument("density trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(density, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("density is not positive semidefinite");

  BipartiteState s;
  s.d_ = d;
  s.pure_ = false;
  s.density_ = std::move(density);
  return s;
}

BipartiteState BipartiteState::maximally_entangled(int d) {
  check_dimension(d);
  Matrix psi = Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d));
  return pure(std::move(psi));
}

BipartiteState BipartiteState::schmidt_diagonal(const RealVector& coeffs) {
  const int d = static_cast<int>(coeffs.size());
  check_dimension(d);
  const double norm = coeffs.norm();
  if (norm <= 0.0) throw std::invalid_argument("Schmidt coefficients are all zero");
  Matrix psi = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) psi(n, n) = coeffs[n] / norm;
  return pure(std::move(psi));
}

const Matrix& BipartiteState::amplitudes() const {
  if (!pure_) throw std::logic_error("state has no pure representation");
  return amplitudes_;
}

const Matrix& BipartiteState::density() const {
  if (density_.size() == 0) {
    // rho_{(m,n),(m',n')} = psi_{mn} conj(psi_{m'n'}), slot-1-major indexing
    Eigen::VectorXcd ket(d_ * d_);
    for (int m = 0; m < d_; ++m)
      for (int n = 0; n < d_; ++n) ket(m * d_ + n) = amplitudes_(m, n);
    density_ = ket * ket.adjoint();
  }
  return density_;
}

void MeasurementConfig::validate() const {
  const ParameterVector* vs[] = {&a1, &a2, &b1, &b2};
  for (const auto* v : vs) {
    if (v->d != a1.d || v->mode != a1.mode)
      throw std::invalid_argument("measurement config vectors disagree on d or mode");
  }
}

RealMatrix joint_probabilities(const BipartiteState& state, const Matrix& u1,
                               const Matrix& u2) {
  const int d = state.dim();
  if (u1.rows() != d || u2.rows() != d)
    throw std::invalid_argument("unitary/state dimension mismatch");

  RealMatrix p(d, d);
  if (state.is_pure()) {
    // amplitude A_{ij} = <i| U1^dag (x) <j| U2^dag |psi> = (U1^dag psi conj(U2))_{ij}
    const Matrix a = u1.adjoint() * state.amplitudes() * u2.conjugate();
    p = a.cwiseAbs2();
  } else {
    const Matrix& rho = state.density();
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXcd v(d * d);
        for (int m = 0; m < d; ++m)
          for (int n = 0; n < d; ++n) v(m * d + n) = u1(m, i) * u2(n, j);
        p(i, j) = (v.adjoint() * rho * v)(0).real();
      }
    }
  }
  return p;
}

RealMatrix joint_probabilities(const BipartiteState& state, const ParameterVector& p,
                               const ParameterVector& q, const GeneratorSet& gens) {
  if (p.d != state.dim() || q.d != state.dim())
    throw std::invalid_argument("parameter/state dimension mismatch");
  return joint_probabilities(state, unitary_from_params(p, gens),
                             unitary_from_params(q, gens));
}

double correlation_value(const BipartiteState& state, const Matrix& u1,
                         const Matrix& u2, const CorrelationMatrix& mu) {
  return mu.mu.cwiseProduct(joint_probabilities(state, u1, u2)).sum();
}

double correlation_value(const BipartiteState& state, const ParameterVector& p,
                         const ParameterVector& q, const GeneratorSet& gens) {
  const CorrelationMatrix mu = correlation_matrix(state.dim());
  return mu.mu.cwiseProduct(joint_probabilities(state, p, q, gens)).sum();
}

} // namespace qbell
