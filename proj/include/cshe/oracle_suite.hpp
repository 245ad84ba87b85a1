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

// Cross-checks of the closed forms against brute-force Fock-space
// computations. Used by `cshe oracle-check` and by the test suites.

#ifndef CSHE_ORACLE_SUITE_HPP
#define CSHE_ORACLE_SUITE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "cshe/encoding.hpp"
#include "cshe/evaluation.hpp"
#include "cshe/fock.hpp"
#include "cshe/security.hpp"

namespace cshe {

// Above this dimension the numeric distance uses the low-rank route.
inline constexpr std::size_t kDenseOracleDimension = 400;

/// D(E(rho_u), E(rho_v)) from the explicit key ensembles in the truncated
/// Fock basis. Does not use the residue-class structure.
inline double numeric_encrypted_distance(const BitString& u, const BitString& v, double abs_alpha, int d,
                                         double eps = kDefaultTruncationEps) {
  const int n_max = truncation_bound(u.size() * abs_alpha * abs_alpha, eps);
  const auto first = encrypted_ensemble(u, abs_alpha, d, n_max);
  const auto second = encrypted_ensemble(v, abs_alpha, d, n_max);
  if (first.front().dim() <= kDenseOracleDimension) {
    return trace_distance_numeric(DensityOperator::mixture(first), DensityOperator::mixture(second));
  }
  return trace_distance_of_mixtures(first, second);
}

/// q_k and A_k by summing |b_z|^2 and |b_z|^2 (-1)^{x.z} over every
/// occupation tuple in the class, via the block states.
inline std::vector<BlockWeight> enumerated_block_weights(int m, double abs_alpha, int d, int w, double eps) {
  const int n_max = truncation_bound(m * abs_alpha * abs_alpha, eps);
  const BitString x = BitString::leading_ones(m, w);
  std::vector<BlockWeight> out;
  for (const auto& block : block_decomposition(abs_alpha, m, d, n_max)) {
    BlockWeight bw;
    bw.q = block.weight;
    bw.absent = block.empty;
    if (!block.empty) bw.a = overlap(apply_sign_flips(block, x), block.state).real();
    out.push_back(bw);
  }
  return out;
}

enum class OracleLevel { kFast, kFull };

struct OracleCheck {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_deviation <= tolerance; }
};

struct OracleReport {
  std::vector<OracleCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed(); });
  }

  std::string format() const {
    std::string out;
    for (const auto& c : checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%s %-40s max_dev=%.3e tol=%.1e\n", c.passed() ? "PASS" : "FAIL",
                    c.name.c_str(), c.max_deviation, c.tolerance);
      out += line;
    }
    out += all_passed() ? "ALL PASSED\n" : "FAILURES PRESENT\n";
    return out;
  }
};

namespace detail {

/// Alternating pattern so u is not the all-zero string.
inline BitString alternating(int m) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i % 2);
  return BitString(std::move(bits));
}

inline double max_abs_diff(const ComplexVector& a, const ComplexVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace detail

inline OracleCheck check_encrypted_distance_grid(int max_m) {
  OracleCheck c{"enc_distance_vs_density_matrix", 0.0, 1e-6};
  for (int m = 1; m <= max_m; ++m) {
    const BitString u = detail::alternating(m);
    for (double a : {0.3, 0.7, 1.0, 1.5}) {
      for (int d : {2, 3, 5, 8}) {
        for (int w = 0; w <= m; ++w) {
          const BitString v = u ^ BitString::leading_ones(m, w);
          const double closed = encrypted_trace_distance(SecurityParams::make(m, d, a, w));
          c.max_deviation = std::max(c.max_deviation, std::abs(closed - numeric_encrypted_distance(u, v, a, d)));
        }
      }
    }
  }
  return c;
}

inline OracleCheck check_unencrypted_distance(int max_m) {
  OracleCheck c{"unenc_distance_vs_density_matrix", 0.0, 1e-8};
  for (int m = 1; m <= max_m; ++m) {
    for (double a : {0.3, 0.7, 1.0, 1.5}) {
      const int n_max = truncation_bound(m * a * a, 1e-12);
      for (int w = 0; w <= m; ++w) {
        const auto rho = DensityOperator::pure(to_fock(encode(BitString::zeros(m), a), n_max));
        const auto sigma = DensityOperator::pure(to_fock(encode(BitString::leading_ones(m, w), a), n_max));
        c.max_deviation = std::max(c.max_deviation,
                                   std::abs(trace_distance_numeric(rho, sigma) - unencrypted_trace_distance(w, a)));
      }
    }
  }
  return c;
}

inline OracleCheck check_finite_weights_vs_enumeration(int max_m) {
  OracleCheck c{"qk_ak_finite_vs_enumeration", 0.0, 1e-10};
  for (int m = 1; m <= max_m; ++m) {
    for (double a : {0.5, 1.0}) {
      for (int d : {2, 3, 5}) {
        for (int w = 0; w <= m; ++w) {
          const auto closed = block_weights_finite(SecurityParams::make(m, d, a, w));
          const auto brute = enumerated_block_weights(m, a, d, w, 1e-12);
          for (std::size_t k = 0; k < brute.size(); ++k) {
            const BlockWeight cf = k < closed.size() ? closed[k] : BlockWeight{0.0, 0.0, true};
            c.max_deviation = std::max(c.max_deviation, std::abs(cf.q - brute[k].q));
            if (!cf.absent && !brute[k].absent) {
              c.max_deviation = std::max(c.max_deviation, std::abs(cf.q * cf.a - brute[k].q * brute[k].a));
            }
          }
        }
      }
    }
  }
  return c;
}

inline OracleCheck check_block_reconstruction(int max_m) {
  OracleCheck c{"channel_vs_block_reconstruction", 0.0, 1e-9};
  for (int m = 1; m <= max_m; ++m) {
    for (double a : {0.5, 1.0}) {
      const int n_max = std::min(truncation_bound(m * a * a), m == 1 ? 40 : 12);
      for (int d : {2, 3, 7}) {
        const auto channel = encryption_channel_density(BitString::zeros(m), a, d, n_max);
        const auto blocks = reconstruct_density(block_decomposition(a, m, d, n_max));
        c.max_deviation = std::max(c.max_deviation, (channel.matrix() - blocks.matrix()).cwiseAbs().maxCoeff());
      }
    }
  }
  return c;
}

inline OracleCheck check_complement(int max_m) {
  OracleCheck c{"complement_indistinguishability", 0.0, 1e-10};
  for (int m = 1; m <= max_m; ++m) {
    for (double a : {0.5, 1.0, 1.5}) {
      for (int d : {2, 4, 8}) {
        const double closed = encrypted_trace_distance(SecurityParams::make(m, d, a, m));
        const BitString u = detail::alternating(m);
        const double numeric = numeric_encrypted_distance(u, u ^ BitString::ones(m), a, d);
        c.max_deviation = std::max({c.max_deviation, closed, numeric});
      }
    }
  }
  return c;
}

inline OracleCheck check_amplitude_commutation() {
  OracleCheck c{"amplitude_level_commutation", 0.0, 1e-12};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int m = 1 + static_cast<int>(seed % 6);
    const auto u = haar_random_unitary(m, seed);
    const auto v = apply_interferometer(haar_random_unitary(m, seed + 1000), encode(BitString::zeros(m), 1.3));
    const double theta = 0.37 * static_cast<double>(seed);
    const auto lhs = apply_interferometer(u, phase_rotate(v, theta));
    const auto rhs = phase_rotate(apply_interferometer(u, v), theta);
    for (int j = 0; j < m; ++j) c.max_deviation = std::max(c.max_deviation, std::abs(lhs[j] - rhs[j]));
  }
  return c;
}

inline OracleCheck check_fock_commutation() {
  OracleCheck c{"fock_level_commutation", 0.0, 1e-10};
  const std::vector<Complex> amps = {Complex(0.8, 0.3), Complex(-0.5, 0.6)};
  const FockVector psi = coherent_product_state(amps, 14);
  for (double theta : {0.3, 1.1, 2.9}) {
    const auto kerr = cross_kerr_spec(0.7, 1.3);
    c.max_deviation = std::max(
        c.max_deviation,
        detail::max_abs_diff(global_phase_rotate(nonlinear_phase_evolve(kerr, psi), theta).amps(),
                             nonlinear_phase_evolve(kerr, global_phase_rotate(psi, theta)).amps()));
    c.max_deviation = std::max(
        c.max_deviation, detail::max_abs_diff(global_phase_rotate(beamsplitter_fock(0.6, psi), theta).amps(),
                                              beamsplitter_fock(0.6, global_phase_rotate(psi, theta)).amps()));
  }
  return c;
}

inline OracleCheck check_kerr_cat() {
  OracleCheck c{"kerr_cat_identity", 0.0, 1e-8};
  for (double a : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const int n_max = truncation_bound(a * a, 1e-14);
    const double fidelity =
        std::abs(overlap(kerr_cat_reference(a, n_max), kerr_cat_target(a, n_max)));
    c.max_deviation = std::max(c.max_deviation, 1.0 - fidelity);
  }
  return c;
}

inline OracleCheck check_pgm() {
  OracleCheck c{"pgm_closed_vs_numeric", 0.0, 1e-6};
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const auto closed = pgm_closed_form(a);
    const auto numeric = pgm_numeric_oracle(a, truncation_bound(a * a, 1e-14));
    c.max_deviation = std::max({c.max_deviation, std::abs(closed.i_single - numeric.i_single),
                                std::abs(closed.p_same - numeric.p_same), std::abs(closed.a_plus - numeric.a_plus)});
  }
  return c;
}

/// kFast covers m <= 2; kFull adds m = 3 density-matrix checks and the PGM.
inline OracleReport run_oracle_suite(OracleLevel level) {
  const int max_m = level == OracleLevel::kFull ? 3 : 2;
  OracleReport report;
  report.checks.push_back(check_encrypted_distance_grid(max_m));
  report.checks.push_back(check_unencrypted_distance(std::min(max_m, 2)));
  report.checks.push_back(check_finite_weights_vs_enumeration(max_m));
  report.checks.push_back(check_block_reconstruction(2));
  report.checks.push_back(check_complement(max_m));
  report.checks.push_back(check_amplitude_commutation());
  report.checks.push_back(check_fock_commutation());
  report.checks.push_back(check_kerr_cat());
  if (level == OracleLevel::kFull) report.checks.push_back(check_pgm());
  return report;
}

}  // namespace cshe

#endif  // CSHE_ORACLE_SUITE_HPP
