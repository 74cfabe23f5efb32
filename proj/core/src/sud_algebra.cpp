#include "qbell/sud_algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qbell {

namespace {

using namespace std::complex_literals;

constexpr double kDropTol = 1e-12;

void check_dimension(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
}

} // namespace

int GeneratorSet::u_index(int j, int k) const {
  if (j < 1 || k <= j || k > d) throw std::out_of_range("u_index: bad (j,k)");
  // lexicographic position of (j,k) among pairs with j < k
  return (j - 1) * d - (j * (j + 1)) / 2 + (k - 1);
}

int GeneratorSet::v_index(int j, int k) const {
  return d * (d - 1) / 2 + u_index(j, k);
}

int GeneratorSet::w_index(int l) const {
  if (l < 1 || l >= d) throw std::out_of_range("w_index: bad l");
  return d * (d - 1) + (l - 1);
}

GeneratorSet build_generators(int d) {
  check_dimension(d);
  GeneratorSet gens;
  gens.d = d;
  gens.generators.reserve(d * d - 1);

  // u_{jk} = |j><k| + |k><j|
  for (int j = 1; j <= d; ++j) {
    for (int k = j + 1; k <= d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j - 1, k - 1) = 1.0;
      m(k - 1, j - 1) = 1.0;
      gens.generators.push_back(std::move(m));
      gens.subset_labels.push_back(Subset::U);
    }
  }
  // v_{jk} = i (|k><j| - |j><k|), so v_12 is sigma_y at d = 2
  for (int j = 1; j <= d; ++j) {
    for (int k = j + 1; k <= d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j - 1, k - 1) = -1.0i;
      m(k - 1, j - 1) = 1.0i;
      gens.generators.push_back(std::move(m));
      gens.subset_labels.push_back(Subset::V);
    }
  }
  // w_l = -sqrt(2/(l(l+1))) (sum_{i<=l} |i><i| - l |l+1><l+1|),
  // keeping the leading minus sign as defined
  for (int l = 1; l <= d - 1; ++l) {
    Matrix m = Matrix::Zero(d, d);
    const double c = -std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int i = 1; i <= l; ++i) m(i - 1, i - 1) = c;
    m(l, l) = -c * static_cast<double>(l);
    gens.generators.push_back(std::move(m));
    gens.subset_labels.push_back(Subset::W);
  }
  return gens;
}

StructureConstants structure_constants(const GeneratorSet& gens) {
  const int n = gens.size();
  StructureConstants f;
  f.d = gens.d;

  // f_{jkl} = Tr([s_j, s_k] s_l) / (4i); totally antisymmetric, so compute
  // for j < k and materialize both orders.
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const Matrix comm =
          gens.generators[j] * gens.generators[k] - gens.generators[k] * gens.generators[j];
      for (int l = 0; l < n; ++l) {
        const std::complex<double> t = (comm * gens.generators[l]).trace() / 4.0i;
        if (std::abs(t.imag()) > kDropTol)
          throw std::logic_error("structure constant has imaginary residue");
        const double v = t.real();
        if (std::abs(v) < kDropTol) continue;
        f.entries.push_back({j, k, l, v});
        f.entries.push_back({k, j, l, -v});
      }
    }
  }

  // x_{il}: diagonal coefficient of w_l on |i><i|
  const int d = gens.d;
  f.x = RealMatrix::Zero(d, d - 1);
  for (int l = 1; l <= d - 1; ++l) {
    const double c = -std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int i = 1; i <= l; ++i) f.x(i - 1, l - 1) = c;
    f.x(l, l - 1) = -c * static_cast<double>(l);
  }
  return f;
}

double StructureConstants::value(int j, int k, int l) const {
  for (const auto& e : entries)
    if (e.j == j && e.k == k && e.l == l) return e.value;
  return 0.0;
}

int ParameterVector::length(int d, Mode mode) {
  return mode == Mode::Full ? d * d - 1 : d * d - d;
}

ParameterVector ParameterVector::zero(int d, Mode mode) {
  check_dimension(d);
  return {d, mode, RealVector::Zero(length(d, mode))};
}

ParameterVector ParameterVector::from_values(int d, Mode mode, RealVector values) {
  check_dimension(d);
  if (values.size() != length(d, mode))
    throw std::invalid_argument("parameter vector length does not match mode");
  if (!values.allFinite())
    throw std::invalid_argument("parameter vector has non-finite entries");
  return {d, mode, std::move(values)};
}

RealVector ParameterVector::full_values() const {
  if (mode == Mode::Full) return values;
  RealVector full = RealVector::Zero(d * d - 1);
  full.head(d * d - d) = values;
  return full;
}

Matrix unitary_from_params(const ParameterVector& p, const GeneratorSet& gens) {
  if (p.d != gens.d) throw std::invalid_argument("parameter/generator dimension mismatch");
  const RealVector coeffs = p.full_values();
  Matrix h = Matrix::Zero(gens.d, gens.d);
  for (int i = 0; i < gens.size(); ++i)
    if (coeffs[i] != 0.0) h += coeffs[i] * gens.generators[i];

  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXcd phases =
      (-std::complex<double>(0, 1) * es.eigenvalues().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

RealMatrix adjoint_matrix_direct(const Matrix& U, const GeneratorSet& gens) {
  const int d = gens.d;
  if (U.rows() != d || U.cols() != d)
    throw std::invalid_argument("unitary has wrong dimension");
  if ((U.adjoint() * U - Matrix::Identity(d, d)).norm() > 1e-10)
    throw std::invalid_argument("adjoint_matrix_direct: input is not unitary");

  const int n = gens.size();
  RealMatrix t(n, n);
  for (int j = 0; j < n; ++j) {
    const Matrix rotated = U.adjoint() * gens.generators[j] * U;
    for (int k = 0; k < n; ++k)
      t(j, k) = 0.5 * (rotated * gens.generators[k]).trace().real();
  }
  return t;
}

RealMatrix adjoint_matrix_exp(const ParameterVector& p, const StructureConstants& f) {
  if (p.d != f.d) throw std::invalid_argument("parameter/structure dimension mismatch");
  const int n = p.d * p.d - 1;
  const RealVector coeffs = p.full_values();
  RealMatrix big_f = RealMatrix::Zero(n, n);
  for (const auto& e : f.entries) // F_{jl} = sum_k p_k f_{kjl}
    big_f(e.k, e.l) += coeffs[e.j] * e.value;
  return (-2.0 * big_f).exp();
}

BlochDecomposition bloch_decompose(const Matrix& H, const GeneratorSet& gens) {
  if (H.rows() != gens.d || H.cols() != gens.d)
    throw std::invalid_argument("observable has wrong dimension");
  if ((H - H.adjoint()).norm() > 1e-10)
    throw std::invalid_argument("bloch_decompose: input is not Hermitian");

  BlochDecomposition b;
  b.a0 = H.trace().real();
  b.a.resize(gens.size());
  for (int j = 0; j < gens.size(); ++j)
    b.a[j] = (gens.generators[j] * H).trace().real();
  return b;
}

Matrix bloch_reconstruct(const BlochDecomposition& b, const GeneratorSet& gens) {
  if (b.a.size() != gens.size())
    throw std::invalid_argument("Bloch vector has wrong length");
  Matrix m = (b.a0 / gens.d) * Matrix::Identity(gens.d, gens.d);
  for (int j = 0; j < gens.size(); ++j)
    if (b.a[j] != 0.0) m += 0.5 * b.a[j] * gens.generators[j];
  return m;
}

ProjectorCoeffs diagonal_projector_coeffs(int j, int d) {
  check_dimension(d);
  if (j < 1 || j > d) throw std::out_of_range("outcome index out of range");
  ProjectorCoeffs c;
  c.identity_coeff = 1.0 / d;
  c.g.resize(d - j + 1);
  for (int k = 0; k <= d - j; ++k) {
    if (k == 0 && j == 1) {
      c.g[k] = 0.0; // (1 - j) vanishes; avoids the undefined w_0
      continue;
    }
    const double scale = (k == 0) ? 1.0 - j : 1.0;
    c.g[k] = scale * std::sqrt(1.0 / (2.0 * (j + k) * (j + k - 1.0)));
  }
  return c;
}

Matrix diagonal_projector(int j, int d, const GeneratorSet& gens) {
  if (gens.d != d) throw std::invalid_argument("generator dimension mismatch");
  const ProjectorCoeffs c = diagonal_projector_coeffs(j, d);
  Matrix m = c.identity_coeff * Matrix::Identity(d, d);
  for (int k = 0; k <= d - j; ++k) {
    if (c.g[k] == 0.0) continue;
    m -= c.g[k] * gens.generators[gens.w_index(j - 1 + k)];
  }
  return m;
}

} // namespace qbell
