// Copyright 2026 The cshe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cshe/evaluation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace cshe;

namespace {

// exp(theta (a^dag b - a b^dag)) on the full truncated two-mode space by
// Taylor series. Exact on the blocks with total photon number <= cutoff.
ComplexMatrix beamsplitter_by_taylor(int cutoff, double theta) {
  const int dim = (cutoff + 1) * (cutoff + 1);
  const auto idx = [cutoff](int a, int b) { return a * (cutoff + 1) + b; };
  ComplexMatrix g = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a <= cutoff; ++a) {
    for (int b = 0; b <= cutoff; ++b) {
      if (a < cutoff && b > 0) g(idx(a + 1, b - 1), idx(a, b)) += std::sqrt((a + 1.0) * b);
      if (a > 0 && b < cutoff) g(idx(a - 1, b + 1), idx(a, b)) -= std::sqrt(a * (b + 1.0));
    }
  }
  ComplexMatrix result = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix term = ComplexMatrix::Identity(dim, dim);
  for (int k = 1; k < 80; ++k) {
    term = term * g * (theta / k);
    result += term;
  }
  return result;
}

FockVector random_low_photon_state(std::mt19937_64& rng, int modes, int cutoff) {
  std::normal_distribution<double> g;
  FockVector psi(modes, cutoff);
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(psi.dim()));
  OccupationCounter counter(modes, cutoff);
  Eigen::Index i = 0;
  do {
    if (counter.total() <= cutoff) amps[i] = Complex(g(rng), g(rng));
    ++i;
  } while (counter.next());
  amps.normalize();
  return FockVector(modes, cutoff, amps);
}

}  // namespace

TEST(evaluation, interferometer_validation) {
  EXPECT_THROW(Interferometer::from_matrix(ComplexMatrix::Ones(2, 2)), DomainError);
  EXPECT_THROW(Interferometer::from_matrix(ComplexMatrix::Identity(2, 3)), ShapeError);
  EXPECT_THROW(Interferometer::permutation({0, 0}), DomainError);
  EXPECT_THROW(Interferometer::permutation({0, 2}), DomainError);
  EXPECT_NO_THROW(Interferometer::from_matrix(ComplexMatrix::Identity(3, 3)));
  EXPECT_THROW(apply_interferometer(Interferometer::identity(2), encode(BitString::parse("010"), 1.0)), ShapeError);
}

TEST(evaluation, permutation_moves_amplitudes) {
  const auto u = Interferometer::permutation({2, 0, 1});
  const auto out = apply_interferometer(u, AmplitudeVector({1.0, 2.0, 3.0}));
  EXPECT_EQ(out[2], Complex(1.0));
  EXPECT_EQ(out[0], Complex(2.0));
  EXPECT_EQ(out[1], Complex(3.0));
}

TEST(evaluation, balanced_beamsplitter_on_amplitudes) {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  const auto u = Interferometer::from_matrix(h);
  const double a = 0.9;
  const auto out = apply_interferometer(u, AmplitudeVector({a, a}));
  EXPECT_NEAR(std::abs(out[0] - std::sqrt(2.0) * a), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[1]), 0.0, 1e-15);

  // Same map at Fock level.
  const int n = truncation_bound(2 * a * a, 1e-14);
  const auto psi = coherent_product_state(std::vector<Complex>{a, a}, n);
  const auto target = coherent_product_state(std::vector<Complex>{std::sqrt(2.0) * a, 0.0}, n);
  EXPECT_GE(std::abs(overlap(target, apply_interferometer_fock(u, psi))), 1.0 - 1e-9);
}

TEST(evaluation, haar_unitary_properties) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int m = 1 + static_cast<int>(seed % 6);
    const auto u = haar_random_unitary(m, seed);
    EXPECT_LT((u.matrix().adjoint() * u.matrix() - ComplexMatrix::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ((u.matrix() - haar_random_unitary(m, seed).matrix()).cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_THROW(haar_random_unitary(0, 1), DomainError);
}

TEST(evaluation, energy_conservation) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int m = 1 + static_cast<int>(seed % 6);
    const auto v = phase_rotate(encode(BitString::leading_ones(m, m / 2), 1.3), 0.1 * seed);
    const auto out = apply_interferometer(haar_random_unitary(m, seed), v);
    EXPECT_NEAR(out.energy(), v.energy(), 1e-12);
  }
}

TEST(evaluation, amplitude_level_commutation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int m = 1 + static_cast<int>(seed % 6);
    const auto u = haar_random_unitary(m, seed);
    const auto v = apply_interferometer(haar_random_unitary(m, seed + 77), encode(BitString::zeros(m), 1.1));
    const double theta = angle(rng);
    const auto lhs = apply_interferometer(u, phase_rotate(v, theta));
    const auto rhs = phase_rotate(apply_interferometer(u, v), theta);
    for (int j = 0; j < m; ++j) EXPECT_NEAR(std::abs(lhs[j] - rhs[j]), 0.0, 1e-12);
  }
}

TEST(evaluation, decomposition_reproduces_matrix) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int m = 1 + static_cast<int>(seed % 6);
    const auto u = haar_random_unitary(m, seed);
    const auto program = decompose_interferometer(u);
    for (int col = 0; col < m; ++col) {
      std::vector<Complex> e(static_cast<std::size_t>(m), 0.0);
      e[static_cast<std::size_t>(col)] = 1.0;
      const auto out = apply_optical_elements(program, AmplitudeVector(e));
      for (int row = 0; row < m; ++row) EXPECT_NEAR(std::abs(out[row] - u.matrix()(row, col)), 0.0, 1e-12);
    }
  }
}

TEST(evaluation, beamsplitter_zero_angle_is_identity) {
  std::mt19937_64 rng(3);
  const auto psi = random_low_photon_state(rng, 2, 5);
  EXPECT_LT((beamsplitter_fock(0.0, psi).amps() - psi.amps()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(evaluation, beamsplitter_single_photon) {
  const FockVector basis(2, 1);
  const auto at = [&basis](int a, int b) { return static_cast<Eigen::Index>(basis.index_of(std::vector<int>{a, b})); };
  ComplexVector amps = ComplexVector::Zero(4);
  amps[at(1, 0)] = 1.0;
  const auto out = beamsplitter_fock(std::numbers::pi / 4.0, FockVector(2, 1, amps));
  const double h = 1.0 / std::sqrt(2.0);
  // exp(theta (a^dag b - a b^dag)) |1,0> = cos|1,0> - sin|0,1>
  EXPECT_NEAR(std::abs(out.amps()[at(1, 0)] - h), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(out.amps()[at(0, 1)] + h), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(out.amps()[at(1, 1)]), 0.0, 1e-14);
}

TEST(evaluation, beamsplitter_matches_matrix_exponential) {
  std::mt19937_64 rng(11);
  for (double theta : {0.3, std::numbers::pi / 4.0, 1.9}) {
    const int cutoff = 5;
    const auto psi = random_low_photon_state(rng, 2, cutoff);
    const ComplexVector expected = beamsplitter_by_taylor(cutoff, theta) * psi.amps();
    EXPECT_LT((beamsplitter_fock(theta, psi).amps() - expected).cwiseAbs().maxCoeff(), 1e-12) << theta;
  }
}

TEST(evaluation, beamsplitter_preserves_photon_number) {
  std::mt19937_64 rng(13);
  const auto psi = random_low_photon_state(rng, 2, 6);
  const auto before = psi.photon_number_distribution();
  for (double theta : {0.2, 1.0, 2.5}) {
    const auto after = beamsplitter_fock(theta, psi).photon_number_distribution();
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t n = 0; n < before.size(); ++n) EXPECT_NEAR(after[n], before[n], 1e-10);
  }
}

TEST(evaluation, beamsplitter_rotates_coherent_amplitudes) {
  const double theta = 0.7;
  const Complex a(0.8, 0.2);
  const Complex b(-0.3, 0.5);
  const int n = truncation_bound(std::norm(a) + std::norm(b), 1e-14);
  const auto out = beamsplitter_fock(theta, coherent_product_state(std::vector<Complex>{a, b}, n));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto target = coherent_product_state(std::vector<Complex>{c * a + s * b, -s * a + c * b}, n);
  EXPECT_GE(std::abs(overlap(target, out)), 1.0 - 1e-10);
}

TEST(evaluation, interferometer_fock_matches_amplitude_level) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int m = 2 + static_cast<int>(seed % 2);
    const auto u = haar_random_unitary(m, seed);
    const auto v = encode(BitString::leading_ones(m, 1), 0.8);
    const int n = truncation_bound(v.energy(), 1e-12);
    const auto evolved = apply_interferometer_fock(u, to_fock(v, n));
    const auto target = to_fock(apply_interferometer(u, v), n);
    EXPECT_GE(std::abs(overlap(target, evolved)), 1.0 - 1e-8) << seed;
  }
}

TEST(evaluation, fock_level_commutation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = random_low_photon_state(rng, 2, 6);
    const double theta = angle(rng);
    const double bs = angle(rng);
    const auto spec = cross_kerr_spec(angle(rng), 0.9);
    EXPECT_LT((global_phase_rotate(beamsplitter_fock(bs, psi), theta).amps() -
               beamsplitter_fock(bs, global_phase_rotate(psi, theta)).amps())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
    EXPECT_LT((global_phase_rotate(nonlinear_phase_evolve(spec, psi), theta).amps() -
               nonlinear_phase_evolve(spec, global_phase_rotate(psi, theta)).amps())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(evaluation, nonlinear_phase_is_diagonal) {
  std::mt19937_64 rng(19);
  const auto psi = random_low_photon_state(rng, 2, 5);
  NonlinearPhaseSpec spec{{{{2, 0}, 0.3}, {{1, 3}, -0.05}}, 2.0};
  const auto out = nonlinear_phase_evolve(spec, psi);
  for (Eigen::Index i = 0; i < psi.amps().size(); ++i) EXPECT_NEAR(std::abs(out.amps()[i]), std::abs(psi.amps()[i]), 1e-15);
  const auto before = psi.photon_number_distribution();
  const auto after = out.photon_number_distribution();
  for (std::size_t n = 0; n < before.size(); ++n) EXPECT_NEAR(after[n], before[n], 1e-15);
}

TEST(evaluation, kerr_full_period_is_identity) {
  // K (n^2 - n) t with K t = pi: n^2 - n is even.
  const auto psi = coherent_state(1.2, 20);
  const auto out = nonlinear_phase_evolve(kerr_spec(1.0, std::numbers::pi), psi);
  EXPECT_LT((out.amps() - psi.amps()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(evaluation, kerr_cat_identity) {
  for (double a : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}) {
    const int n = truncation_bound(a * a, 1e-14);
    EXPECT_GE(std::abs(overlap(kerr_cat_reference(a, n), kerr_cat_target(a, n))), 1.0 - 1e-8) << a;
  }
  // Complex alpha.
  const Complex z = std::polar(1.3, 0.6);
  const int n = truncation_bound(std::norm(z), 1e-14);
  EXPECT_GE(std::abs(overlap(kerr_cat_reference(z, n), kerr_cat_target(z, n))), 1.0 - 1e-8);
}

TEST(evaluation, nonlinear_spec_validation) {
  const auto psi = coherent_state(0.5, 6);
  EXPECT_THROW(nonlinear_phase_evolve(cross_kerr_spec(1.0, 1.0), psi), ShapeError);
  EXPECT_THROW(nonlinear_phase_evolve(NonlinearPhaseSpec{{{{0}, 1.0}}, 1.0}, psi), DomainError);
  EXPECT_THROW(nonlinear_phase_evolve(NonlinearPhaseSpec{{{{-1}, 1.0}}, 1.0}, psi), DomainError);
  EXPECT_THROW(nonlinear_phase_evolve(NonlinearPhaseSpec{{{{2}, NAN}}, 1.0}, psi), DomainError);
  EXPECT_NO_THROW(nonlinear_phase_evolve(NonlinearPhaseSpec{{}, 1.0}, psi));
}

TEST(evaluation, two_mode_rotation_errors) {
  const auto psi = coherent_product_state(std::vector<Complex>{0.1, 0.1, 0.1}, 3);
  EXPECT_THROW(two_mode_rotation(psi, 1, 1, 0.3), ShapeError);
  EXPECT_THROW(two_mode_rotation(psi, 0, 3, 0.3), ShapeError);
  EXPECT_THROW(beamsplitter_fock(0.3, psi), ShapeError);
}
