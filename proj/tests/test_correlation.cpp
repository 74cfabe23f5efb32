#include "doctest.h"

#include "qbell/correlation.hpp"
#include "qbell/sud_algebra.hpp"
#include "test_helpers.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <random>

using namespace qbell;

TEST_SUITE("correlation") {

TEST_CASE("weight matrix for two and three outcomes") {
  const CorrelationMatrix m2 = correlation_matrix(2);
  RealMatrix expected2(2, 2);
  expected2 << 1, -1, -1, 1;
  CHECK((m2.mu - expected2).norm() == 0.0);

  const CorrelationMatrix m3 = correlation_matrix(3);
  RealMatrix expected3(3, 3);
  expected3 << 1, -1, 0, 0, 1, -1, -1, 0, 1;
  CHECK((m3.mu - expected3).norm() == 0.0);

  CHECK_THROWS_AS(correlation_matrix(1), std::invalid_argument);
}

TEST_CASE("weight matrix satisfies the three conditions") {
  for (int d = 2; d <= 8; ++d) {
    const CorrelationMatrix m = correlation_matrix(d);
    CHECK(m.mu(0, 0) == 1.0);
    CHECK(m.mu.maxCoeff() <= 1.0);
    CHECK(m.mu.minCoeff() >= -1.0);
    for (int i = 0; i < d; ++i) {
      CHECK(std::abs(m.mu.row(i).sum()) <= 1e-14);
      CHECK(std::abs(m.mu.col(i).sum()) <= 1e-14);
    }
    // circulant: entries depend on (i - j) mod d only
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(m.mu((i + 1) % d, (j + 1) % d) == m.mu(i, j));
    // equal spacing on and below the diagonal
    for (int j = 0; j < d; ++j)
      for (int i = j; i + 1 < d; ++i)
        CHECK(m.mu(i, j) - m.mu(i + 1, j) ==
              doctest::Approx(2.0 / (d - 1)).epsilon(1e-14));
  }
}

TEST_CASE("correlation observable at d = 2 is sigma_z x sigma_z") {
  const Matrix e = correlation_observable(correlation_matrix(2));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1;
  expected(1, 1) = -1;
  expected(2, 2) = -1;
  expected(3, 3) = 1;
  CHECK((e - expected).norm() == 0.0);
}

TEST_CASE("observable eigenvalues are the weights and marginals vanish") {
  std::mt19937_64 rng(8001);
  for (int d = 2; d <= 5; ++d) {
    const CorrelationMatrix m = correlation_matrix(d);
    const Matrix e = correlation_observable(m);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) CHECK(e(i * d + j, i * d + j).real() == m.mu(i, j));

    const Matrix id = Matrix::Identity(d, d);
    for (int rep = 0; rep < 50; ++rep) {
      const Matrix rho_a = testing::random_density(rng, d);
      const Matrix rho_b = testing::random_density(rng, d);
      CHECK(std::abs((e * Eigen::kroneckerProduct(rho_a, id)).trace()) <= 1e-10);
      CHECK(std::abs((e * Eigen::kroneckerProduct(id, rho_b)).trace()) <= 1e-10);
    }
  }
}

TEST_CASE("diagonal and W-basis assemblies agree") {
  for (int d = 2; d <= 6; ++d) {
    const GeneratorSet g = build_generators(d);
    const CorrelationMatrix m = correlation_matrix(d);
    Matrix w_form = Matrix::Zero(d * d, d * d);
    for (int k = 1; k <= d - 1; ++k)
      for (int l = 1; l <= d - 1; ++l)
        w_form += m.mu_tilde(k - 1, l - 1) *
                  Eigen::kroneckerProduct(g.generators[g.w_index(k)],
                                          g.generators[g.w_index(l)]);
    CHECK((w_form - correlation_observable(m)).norm() <= 1e-10);
  }
}

TEST_CASE("transformed observable matches the adjoint transform of mu~") {
  // Coefficients of (U_p x U_q) E (U_p x U_q)^dag over s_a x s_b equal
  // (T_p mu~ T_q^T)_{ab}, with mu~ zero-padded onto the W x W block.
  std::mt19937_64 rng(8002);
  for (int d : {2, 3}) {
    const GeneratorSet g = build_generators(d);
    const CorrelationMatrix m = correlation_matrix(d);
    const int n = d * d - 1;
    RealMatrix padded = RealMatrix::Zero(n, n);
    padded.bottomRightCorner(d - 1, d - 1) = m.mu_tilde;

    const Matrix e = correlation_observable(m);
    for (int rep = 0; rep < 3; ++rep) {
      const auto p = testing::random_params(rng, d, ParameterVector::Mode::Full);
      const auto q = testing::random_params(rng, d, ParameterVector::Mode::Full);
      const Matrix up = unitary_from_params(p, g);
      const Matrix uq = unitary_from_params(q, g);
      const Matrix transformed = Eigen::kroneckerProduct(up, uq) * e *
                                 Eigen::kroneckerProduct(up, uq).adjoint();

      const RealMatrix tp = adjoint_matrix_direct(up, g);
      const RealMatrix tq = adjoint_matrix_direct(uq, g);
      const RealMatrix expected = tp * padded * tq.transpose();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const auto coeff =
              (Eigen::kroneckerProduct(g.generators[a], g.generators[b]) * transformed)
                  .trace() /
              4.0;
          CHECK(std::abs(coeff - expected(a, b)) <= 1e-8);
        }
    }
  }
}

TEST_CASE("state validation") {
  Matrix psi = Matrix::Zero(2, 2);
  psi(0, 0) = 1.0;
  CHECK_NOTHROW(BipartiteState::pure(psi));
  psi(0, 0) = 2.0;
  CHECK_THROWS_AS(BipartiteState::pure(psi), std::invalid_argument);

  Matrix rho = Matrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(BipartiteState::mixed(rho));
  rho(0, 1) = 0.5; // not Hermitian
  CHECK_THROWS_AS(BipartiteState::mixed(rho), std::invalid_argument);
  rho = Matrix::Identity(4, 4); // trace 4
  CHECK_THROWS_AS(BipartiteState::mixed(rho), std::invalid_argument);
  rho = Matrix::Zero(4, 4); // negative eigenvalue
  rho(0, 0) = 1.5;
  rho(1, 1) = -0.5;
  CHECK_THROWS_AS(BipartiteState::mixed(rho), std::invalid_argument);
}

TEST_CASE("pure density promotion") {
  const BipartiteState s = BipartiteState::maximally_entangled(3);
  const Matrix& rho = s.density();
  CHECK(rho.rows() == 9);
  CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-14);
  CHECK((rho - rho.adjoint()).norm() <= 1e-14);
  CHECK(std::abs((rho * rho - rho).norm()) <= 1e-12); // projector
}

TEST_CASE("joint probabilities for aligned measurements") {
  const GeneratorSet g2 = build_generators(2);
  const auto zero2 = ParameterVector::zero(2, ParameterVector::Mode::Full);

  Matrix psi00 = Matrix::Zero(2, 2);
  psi00(0, 0) = 1.0;
  const RealMatrix p = joint_probabilities(BipartiteState::pure(psi00), zero2, zero2, g2);
  CHECK(p(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p(0, 1) + p(1, 0) + p(1, 1) <= 1e-12);

  for (int d : {2, 4}) {
    const GeneratorSet g = build_generators(d);
    const auto zero = ParameterVector::zero(d, ParameterVector::Mode::Full);
    const RealMatrix pm =
        joint_probabilities(BipartiteState::maximally_entangled(d), zero, zero, g);
    for (int j = 0; j < d; ++j) CHECK(pm(j, j) == doctest::Approx(1.0 / d).epsilon(1e-12));
  }
}

TEST_CASE("joint probabilities against the hand-computed Born rule") {
  // State cos(phi)|00> + sin(phi)|11>, first slot rotated a quarter turn
  // about u_12 (U = -i sigma_x swaps the basis states): P_12 = sin^2, P_21 = cos^2.
  const double phi = 0.3;
  const GeneratorSet g = build_generators(2);
  RealVector coeffs(2);
  coeffs << std::cos(phi), std::sin(phi);
  const BipartiteState state = BipartiteState::schmidt_diagonal(coeffs);

  RealVector values = RealVector::Zero(3);
  values[g.u_index(1, 2)] = M_PI / 2;
  const auto p = ParameterVector::from_values(2, ParameterVector::Mode::Full, values);
  const auto q = ParameterVector::zero(2, ParameterVector::Mode::Full);

  const RealMatrix probs = joint_probabilities(state, p, q, g);
  CHECK(probs(0, 0) <= 1e-12);
  CHECK(probs(0, 1) == doctest::Approx(std::sin(phi) * std::sin(phi)).epsilon(1e-12));
  CHECK(probs(1, 0) == doctest::Approx(std::cos(phi) * std::cos(phi)).epsilon(1e-12));
  CHECK(probs(1, 1) <= 1e-12);
}

TEST_CASE("probabilities are normalized and nonnegative on random inputs") {
  std::mt19937_64 rng(8003);
  for (int d : {2, 3, 5}) {
    const GeneratorSet g = build_generators(d);
    const BipartiteState mixed = BipartiteState::mixed(testing::random_density(rng, d * d));
    for (int rep = 0; rep < 5; ++rep) {
      const auto p = testing::random_params(rng, d, ParameterVector::Mode::Reduced);
      const auto q = testing::random_params(rng, d, ParameterVector::Mode::Reduced);
      const RealMatrix probs = joint_probabilities(mixed, p, q, g);
      CHECK(probs.minCoeff() >= -1e-12);
      CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  const GeneratorSet g3 = build_generators(3);
  const auto p3 = ParameterVector::zero(3, ParameterVector::Mode::Full);
  const auto p2 = ParameterVector::zero(2, ParameterVector::Mode::Full);
  CHECK_THROWS_AS(
      joint_probabilities(BipartiteState::maximally_entangled(3), p3, p2, g3),
      std::invalid_argument);
}

TEST_CASE("correlation values on aligned configurations") {
  const GeneratorSet g = build_generators(3);
  const auto zero = ParameterVector::zero(3, ParameterVector::Mode::Full);
  CHECK(correlation_value(BipartiteState::maximally_entangled(3), zero, zero, g) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Matrix psi00 = Matrix::Zero(3, 3);
  psi00(0, 0) = 1.0;
  CHECK(correlation_value(BipartiteState::pure(psi00), zero, zero, g) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation values stay in range") {
  std::mt19937_64 rng(8004);
  for (int d : {2, 3}) {
    const GeneratorSet g = build_generators(d);
    const CorrelationMatrix mu = correlation_matrix(d);
    const BipartiteState state =
        BipartiteState::mixed(testing::random_density(rng, d * d));
    for (int rep = 0; rep < 20; ++rep) {
      const auto p = testing::random_params(rng, d, ParameterVector::Mode::Full, 3.0);
      const auto q = testing::random_params(rng, d, ParameterVector::Mode::Full, 3.0);
      const double e = correlation_value(state, unitary_from_params(p, g),
                                         unitary_from_params(q, g), mu);
      CHECK(e <= 1.0 + 1e-10);
      CHECK(e >= -1.0 - 1e-10);
    }
  }
}

TEST_CASE("slot exchange is a symmetry only for dichotomic measurements") {
  // On swap-symmetric states (every Schmidt-diagonal state is), E(p,q) =
  // E(q,p) at d = 2; at d = 3 the asymmetric weights break it.
  std::mt19937_64 rng(8005);
  const GeneratorSet g2 = build_generators(2);
  std::uniform_real_distribution<double> angle(0.1, M_PI / 2 - 0.1);
  for (int rep = 0; rep < 20; ++rep) {
    RealVector coeffs(2);
    const double phi = angle(rng);
    coeffs << std::cos(phi), std::sin(phi);
    const BipartiteState state = BipartiteState::schmidt_diagonal(coeffs);
    const auto p = testing::random_params(rng, 2, ParameterVector::Mode::Full, 3.0);
    const auto q = testing::random_params(rng, 2, ParameterVector::Mode::Full, 3.0);
    CHECK(correlation_value(state, p, q, g2) ==
          doctest::Approx(correlation_value(state, q, p, g2)).epsilon(1e-10));
  }

  const GeneratorSet g3 = build_generators(3);
  const BipartiteState maxent3 = BipartiteState::maximally_entangled(3);
  bool asymmetric = false;
  for (int rep = 0; rep < 20 && !asymmetric; ++rep) {
    const auto p = testing::random_params(rng, 3, ParameterVector::Mode::Full, 3.0);
    const auto q = testing::random_params(rng, 3, ParameterVector::Mode::Full, 3.0);
    asymmetric = std::abs(correlation_value(maxent3, p, q, g3) -
                          correlation_value(maxent3, q, p, g3)) > 1e-6;
  }
  CHECK(asymmetric);
}

} // TEST_SUITE
