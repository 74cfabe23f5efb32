// The Bell function over a measurement configuration, the QFT baseline with
// its analytic maximum, and the brute-force classical bound.

#pragma once

#include "qbell/correlation.hpp"
#include "qbell/sud_algebra.hpp"

#include <array>
#include <utility>

namespace qbell {

enum class Label { A1, A2, B1, B2 };

struct BellSpec {
  int d = 0;
  Eigen::Vector4d coefficients{1.0, 1.0, 1.0, -1.0};
  // (first tensor slot label, second tensor slot label) per term. Slot
  // semantics are literal: the third default term puts B2 on the first slot.
  std::array<std::pair<Label, Label>, 4> layout{{{Label::A1, Label::B1},
                                                 {Label::A2, Label::B2},
                                                 {Label::B2, Label::A1},
                                                 {Label::A2, Label::B1}}};

  static BellSpec standard(int d);
  void validate() const; // sum of coefficients must be 2
};

// B = sum_i c_i E(slot1_i, slot2_i) with unitaries exp(-i p.s) per label.
double bell_value(const BipartiteState& state, const MeasurementConfig& config,
                  const BellSpec& spec, const GeneratorSet& gens);

// Same Bell combination evaluated from explicit per-label unitaries,
// indexed A1, A2, B1, B2.
double bell_value_unitaries(const BipartiteState& state,
                            const std::array<Matrix, 4>& label_unitaries,
                            const BellSpec& spec, const CorrelationMatrix& mu);

// U_{jk} = exp(i 2 pi j (k + phi) / d) / sqrt(d), j,k in 0..d-1.
Matrix qft_unitary(int d, double phi);

// Analytic maximum of the Bell function under QFT measurements on the
// maximally entangled state: 4d sum_{l=0}^{d-1} (1 - 2l/(d-1)) /
// (2 d^3 sin^2(pi (l + 1/4) / d)). The upper limit d-1 reproduces the
// reference values 2.82843, 2.87293, 2.89624, 2.91055 for d = 2..5.
double cglmp_qft_max(int d);

// Bell value with Fourier-basis measurements at the given phases
// (phi_A1, phi_A2, phi_B1, phi_B2). A-labels use qft_unitary(d, phi)
// directly; B-labels use the reciprocal basis conj(qft_unitary(d, -phi)),
// the pairing under which the phases (0, 1/2, 1/4, -1/4) attain
// cglmp_qft_max on the maximally entangled state.
double bell_value_qft(const BipartiteState& state, const Eigen::Vector4d& phases,
                      const BellSpec& spec);

// Exact maximum of the Bell combination over deterministic local strategies.
// Each tensor slot carries the three effective settings induced by the term
// layout; every strategy assigns one outcome per setting per slot. Guarded
// to d <= 4 (d^6 joint strategies).
double lhv_max_bruteforce(int d, const BellSpec& spec);

} // namespace qbell
