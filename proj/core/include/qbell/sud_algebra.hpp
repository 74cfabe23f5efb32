// SU(d) generator basis, structure constants, canonical unitaries and the
// adjoint (generalized Bloch rotation) representation.
//
// Generator ordering is fixed project-wide: first the d(d-1)/2 symmetric
// generators u_{jk} in lexicographic (j,k) order with 1 <= j < k <= d, then
// the antisymmetric v_{jk} in the same order, then the d-1 diagonal w_l.
// Parameter vectors and adjoint matrices inherit this ordering.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qbell {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class Subset { U, V, W };

struct GeneratorSet {
  int d = 0;
  std::vector<Matrix> generators;    // d^2-1 Hermitian traceless matrices
  std::vector<Subset> subset_labels; // per-generator tag

  int size() const { return static_cast<int>(generators.size()); }

  // 1-based mathematical indices -> 0-based position in `generators`.
  int u_index(int j, int k) const;
  int v_index(int j, int k) const;
  int w_index(int l) const;
};

// Builds the generator basis for SU(d). Throws std::invalid_argument for d < 2.
GeneratorSet build_generators(int d);

struct StructureConstants {
  int d = 0;

  struct Entry {
    int j, k, l; // 0-based generator positions
    double value;
  };
  // Every nonzero f_{jkl} (all index permutations materialized), with
  // |f| < 1e-12 dropped at construction.
  std::vector<Entry> entries;

  // x(i-1, l-1) = diagonal coefficient of w_l on |i><i|, used for the
  // mixed-subset commutator cross-checks.
  RealMatrix x;

  double value(int j, int k, int l) const;
};

// f_{jkl} = Tr([s_j, s_k] s_l) / (4i), totally antisymmetric.
StructureConstants structure_constants(const GeneratorSet& gens);

struct ParameterVector {
  enum class Mode { Full, Reduced };

  int d = 0;
  Mode mode = Mode::Full;
  RealVector values; // length d^2-1 (full) or d^2-d (reduced: U block then V block)

  static int length(int d, Mode mode);
  static ParameterVector zero(int d, Mode mode);
  static ParameterVector from_values(int d, Mode mode, RealVector values);

  // Zero-pads the W block when reduced.
  RealVector full_values() const;
};

// exp(-i p.s) via eigendecomposition of the Hermitian exponent.
Matrix unitary_from_params(const ParameterVector& p, const GeneratorSet& gens);

// T_{jk} = Tr(U^dag s_j U s_k) / 2. Throws if U is not unitary to 1e-10.
RealMatrix adjoint_matrix_direct(const Matrix& U, const GeneratorSet& gens);

// T(p) = exp(-2 F(p)) with F_{jl} = sum_k p_k f_{kjl}.
RealMatrix adjoint_matrix_exp(const ParameterVector& p, const StructureConstants& f);

struct BlochDecomposition {
  double a0 = 0.0; // trace part
  RealVector a;    // generalized Bloch vector, length d^2-1
};

// a0 = Tr H, a_j = Tr(s_j H). Throws if H is not Hermitian to 1e-10.
BlochDecomposition bloch_decompose(const Matrix& H, const GeneratorSet& gens);

// (a0/d) I + (1/2) sum_j a_j s_j.
Matrix bloch_reconstruct(const BlochDecomposition& b, const GeneratorSet& gens);

struct ProjectorCoeffs {
  double identity_coeff = 0.0; // 1/d
  // g[k] for k = 0..d-j; the associated diagonal generator is w_{j-1+k}.
  // g[0] vanishes for j = 1, so the undefined w_0 never enters.
  std::vector<double> g;
};

// Coefficients reconstructing |j><j| = (1/d) I - sum_k g[k] w_{j-1+k},
// with 1-based outcome j. Throws for j outside 1..d.
ProjectorCoeffs diagonal_projector_coeffs(int j, int d);

// Assembles |j><j| from the coefficients above.
Matrix diagonal_projector(int j, int d, const GeneratorSet& gens);

} // namespace qbell
