#include "qbell/bell.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qbell {

namespace {

constexpr double kPi = std::numbers::pi;

int label_index(Label l) { return static_cast<int>(l); }

const ParameterVector& config_vector(const MeasurementConfig& c, Label l) {
  switch (l) {
    case Label::A1: return c.a1;
    case Label::A2: return c.a2;
    case Label::B1: return c.b1;
    case Label::B2: return c.b2;
  }
  throw std::logic_error("bad label");
}

} // namespace

BellSpec BellSpec::standard(int d) {
  BellSpec spec;
  spec.d = d;
  return spec;
}

void BellSpec::validate() const {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (std::abs(coefficients.sum() - 2.0) > 1e-12)
    throw std::invalid_argument("Bell coefficients must sum to 2");
}

double bell_value_unitaries(const BipartiteState& state,
                            const std::array<Matrix, 4>& label_unitaries,
                            const BellSpec& spec, const CorrelationMatrix& mu) {
  spec.validate();
  if (spec.d != state.dim() || mu.d != state.dim())
    throw std::invalid_argument("Bell spec/state dimension mismatch");
  double b = 0.0;
  for (int t = 0; t < 4; ++t) {
    const auto& [first, second] = spec.layout[t];
    if (spec.coefficients[t] == 0.0) continue;
    b += spec.coefficients[t] *
         correlation_value(state, label_unitaries[label_index(first)],
                           label_unitaries[label_index(second)], mu);
  }
  return b;
}

double bell_value(const BipartiteState& state, const MeasurementConfig& config,
                  const BellSpec& spec, const GeneratorSet& gens) {
  config.validate();
  if (config.a1.d != state.dim())
    throw std::invalid_argument("config/state dimension mismatch");
  const std::array<Matrix, 4> us = {
      unitary_from_params(config.a1, gens), unitary_from_params(config.a2, gens),
      unitary_from_params(config.b1, gens), unitary_from_params(config.b2, gens)};
  return bell_value_unitaries(state, us, spec, correlation_matrix(state.dim()));
}

Matrix qft_unitary(int d, double phi) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  Matrix u(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const double arg = 2.0 * kPi * j * (k + phi) / d;
      u(j, k) = scale * std::complex<double>(std::cos(arg), std::sin(arg));
    }
  return u;
}

double cglmp_qft_max(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  double sum = 0.0;
  for (int l = 0; l <= d - 1; ++l) {
    const double weight = 1.0 - 2.0 * l / (d - 1.0);
    const double s = std::sin(kPi * (l + 0.25) / d);
    sum += weight / (2.0 * d * d * d * s * s);
  }
  return 4.0 * d * sum;
}

double bell_value_qft(const BipartiteState& state, const Eigen::Vector4d& phases,
                      const BellSpec& spec) {
  const int d = state.dim();
  // A-side measurement bases come straight from the Fourier formula; B-side
  // bases are the reciprocal (conjugate) Fourier family. This is the CGLMP
  // pairing: identical Fourier bases on both slots of sum_n |nn> produce
  // correlations in the outcome sum instead of the difference weighted by mu.
  const std::array<Matrix, 4> us = {
      qft_unitary(d, phases[0]), qft_unitary(d, phases[1]),
      qft_unitary(d, -phases[2]).conjugate(), qft_unitary(d, -phases[3]).conjugate()};
  return bell_value_unitaries(state, us, spec, correlation_matrix(d));
}

double lhv_max_bruteforce(int d, const BellSpec& spec) {
  spec.validate();
  if (d != spec.d) throw std::invalid_argument("spec dimension mismatch");
  if (d > 4) throw std::invalid_argument("brute-force enumeration limited to d <= 4");

  // One deterministic response per apparatus label: the hidden variable
  // fixes the outcome of each of the four devices, and a term reads the
  // pair of responses in its literal slot order. Treating a label's two
  // slot placements as independent devices would lift the bound to
  // sum |c_i| (the exchanged term decouples), so the paper's bound of 2
  // presumes this label-keyed model.
  auto numerator = [d](int i, int j) {
    // integer numerator of mu over the common denominator (d-1)
    const int residue = ((i - j) % d + d) % d;
    return (d - 1) - 2 * residue;
  };

  long strategies = 1;
  for (int s = 0; s < 4; ++s) strategies *= d;

  std::array<int, 4> outcome{};
  double best = -std::numeric_limits<double>::infinity();
  for (long strat = 0; strat < strategies; ++strat) {
    long rest = strat;
    for (int s = 0; s < 4; ++s) { outcome[s] = static_cast<int>(rest % d); rest /= d; }
    double value = 0.0;
    for (int t = 0; t < 4; ++t) {
      const auto& [first, second] = spec.layout[t];
      value += spec.coefficients[t] *
               numerator(outcome[label_index(first)], outcome[label_index(second)]);
    }
    best = std::max(best, value);
  }
  return best / (d - 1.0);
}

} // namespace qbell
