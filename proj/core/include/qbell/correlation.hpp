// The uniquely determined classically-correlated observable for d-outcome
// measurements, joint probabilities and correlation functions.

#pragma once

#include "qbell/sud_algebra.hpp"

#include <Eigen/Dense>

namespace qbell {

struct CorrelationMatrix {
  int d = 0;
  RealMatrix mu;       // d x d circulant weight matrix
  RealMatrix mu_tilde; // (d-1) x (d-1) transform onto the W x W generator block
};

// mu_{i,j} = 1 - 2 ((i-j) mod d) / (d-1) with the nonnegative residue;
// entries are exact ratios of integers over (d-1). Throws for d < 2.
CorrelationMatrix correlation_matrix(int d);

// E = sum_{ij} mu_{ij} |i><i| (x) |j><j| on the d (x) d space.
Matrix correlation_observable(const CorrelationMatrix& mu);

// A bipartite d (x) d state, pure (amplitude matrix, unit Frobenius norm) or
// mixed (density operator). Pure states are promoted to densities lazily.
class BipartiteState {
 public:
  static BipartiteState pure(Matrix amplitudes);
  static BipartiteState mixed(Matrix density);
  static BipartiteState maximally_entangled(int d);
  // Diagonal pure state sum_n c_n |nn> from real coefficients (normalized).
  static BipartiteState schmidt_diagonal(const RealVector& coeffs);

  int dim() const { return d_; }
  bool is_pure() const { return pure_; }
  const Matrix& amplitudes() const; // pure representation only
  const Matrix& density() const;    // available for both representations

 private:
  BipartiteState() = default;

  int d_ = 0;
  bool pure_ = false;
  Matrix amplitudes_;
  mutable Matrix density_;
};

// Four local measurement parameter vectors sharing d and mode.
struct MeasurementConfig {
  ParameterVector a1, a2, b1, b2;

  void validate() const; // throws on d/mode mismatch
};

// P_{ij} = Tr(P_i (x) P_j rho) with P_i = U1 |i><i| U1^dag on the first slot.
RealMatrix joint_probabilities(const BipartiteState& state, const Matrix& u1,
                               const Matrix& u2);
RealMatrix joint_probabilities(const BipartiteState& state, const ParameterVector& p,
                               const ParameterVector& q, const GeneratorSet& gens);

// E = sum_{ij} mu_{ij} P_{ij}. The first argument configures the first
// tensor slot; exchanging arguments changes the value in general.
double correlation_value(const BipartiteState& state, const Matrix& u1,
                         const Matrix& u2, const CorrelationMatrix& mu);
double correlation_value(const BipartiteState& state, const ParameterVector& p,
                         const ParameterVector& q, const GeneratorSet& gens);

} // namespace qbell
