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

#include "cshe/security.hpp"

#include <cmath>
#include <random>

#include "cshe/oracle_suite.hpp"
#include "gtest/gtest.h"

using namespace cshe;

namespace {

SecurityParams params(int m, std::optional<int> d, double a, int w) { return SecurityParams::make(m, d, a, w); }

}  // namespace

TEST(security, params_validation) {
  EXPECT_THROW(params(0, 3, 1.0, 0), DomainError);
  EXPECT_THROW(params(2, 0, 1.0, 0), DomainError);
  EXPECT_THROW(params(2, 3, 1.0, 3), DomainError);
  EXPECT_THROW(params(2, 3, -1.0, 1), DomainError);
  EXPECT_THROW(params(2, 3, NAN, 1), DomainError);
  EXPECT_DOUBLE_EQ(params(10, 100, 0.5, 1).energy(), 2.5);
}

TEST(security, rank2_eigenvalues_match_gram_eigensolve) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = unit(rng);
    const double cos_theta = unit(rng);
    // Operator sum M_ij |v_i><v_j| with Gram matrix G: nonzero spectrum is
    // that of L^T M L, G = L L^T.
    Eigen::Matrix2d m;
    m << 1.0, -c, -c, 1.0;
    Eigen::Matrix2d g;
    g << 1.0, cos_theta, cos_theta, 1.0;
    const Eigen::Matrix2d l = g.llt().matrixL();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(l.transpose() * m * l);
    auto [lp, lm] = rank2_eigenvalues(c, cos_theta);
    const double lo = std::min(lp, lm);
    const double hi = std::max(lp, lm);
    EXPECT_NEAR(solver.eigenvalues()[0], lo, 1e-12);
    EXPECT_NEAR(solver.eigenvalues()[1], hi, 1e-12);
  }
  EXPECT_THROW(rank2_eigenvalues(0.5, 1.5), DomainError);
}

TEST(security, limit_weights) {
  const auto p = params(2, std::nullopt, 1.0, 1);
  EXPECT_NEAR(qk_limit(p, 0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(qk_limit(p, 2), 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_EQ(ak_limit(p, 0), 1.0);
  EXPECT_EQ(ak_limit(p, 3), 0.0);
  EXPECT_NEAR(ak_limit(params(4, std::nullopt, 1.0, 1), 2), 0.25, 1e-15);
}

TEST(security, finite_weights_regression) {
  // m=2, |alpha|=1, d=5, w=1: frozen from brute-force enumeration.
  const double q_expected[] = {0.17146288534167865, 0.28270731346071315, 0.27410881034968903, 0.18130649400188422,
                               0.090414496846034955};
  const auto p = params(2, 5, 1.0, 1);
  const auto weights = block_weights_finite(p);
  ASSERT_EQ(weights.size(), 5u);
  double total = 0.0;
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(weights[k].q, q_expected[k], 1e-12);
    total += weights[k].q;
    const auto single = qk_ak_finite(p, k);
    EXPECT_EQ(single.q, weights[k].q);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // m - 2w = 0: A_k vanishes except in the vacuum class.
  EXPECT_NEAR(weights[0].a, std::exp(-2.0) / q_expected[0], 1e-12);
  EXPECT_NEAR(weights[0].a, 0.78929782948027777, 1e-12);
  for (int k = 1; k < 5; ++k) EXPECT_EQ(weights[k].a, 0.0);
  EXPECT_NEAR(encrypted_trace_distance(p), 0.93381713252001939, 1e-12);
  EXPECT_THROW(qk_ak_finite(p, 5), DomainError);
  EXPECT_THROW(block_weights_finite(params(2, std::nullopt, 1.0, 1)), DomainError);
}

TEST(security, weights_sum_to_one) {
  for (int m : {1, 3, 10}) {
    for (double a : {0.1, 0.8, 1.7}) {
      for (int d : {1, 2, 7, 100}) {
        double total = 0.0;
        for (const auto& b : block_weights_finite(params(m, d, a, 1))) total += b.q;
        EXPECT_NEAR(total, 1.0, 1e-12) << m << " " << a << " " << d;
      }
    }
  }
}

TEST(security, finite_weights_match_enumeration) {
  for (int m = 1; m <= 3; ++m) {
    for (double a : {0.5, 1.0}) {
      for (int d : {2, 3, 5}) {
        for (int w = 0; w <= m; ++w) {
          const auto closed = block_weights_finite(params(m, d, a, w));
          const auto brute = enumerated_block_weights(m, a, d, w, 1e-12);
          for (std::size_t k = 0; k < brute.size(); ++k) {
            const BlockWeight cf = k < closed.size() ? closed[k] : BlockWeight{0.0, 0.0, true};
            EXPECT_NEAR(cf.q, brute[k].q, 1e-10);
            if (!cf.absent && !brute[k].absent) {
              EXPECT_NEAR(cf.q * cf.a, brute[k].q * brute[k].a, 1e-10);
            }
          }
        }
      }
    }
  }
}

TEST(security, encrypted_distance_regression) {
  EXPECT_NEAR(encrypted_trace_distance(params(10, 100, 1.0, 1)), 0.98593201467487834, 1e-12);
  EXPECT_NEAR(encrypted_trace_distance(params(10, std::nullopt, 1.0, 1)), 0.98593201467487834, 1e-12);
  EXPECT_NEAR(encrypted_trace_distance(params(3, 3, 0.7, 2)), 0.9010023642926763, 1e-12);
  EXPECT_NEAR(encrypted_trace_distance(params(1, 3, 1.0, 1)), 0.49827913993379738, 1e-12);
  EXPECT_NEAR(encrypted_trace_distance(params(2, std::nullopt, 1.0, 1)), 1.0 - std::exp(-2.0), 1e-13);
}

TEST(security, trivial_cases) {
  EXPECT_EQ(encrypted_trace_distance(params(4, 10, 1.0, 0)), 0.0);
  EXPECT_EQ(encrypted_trace_distance(params(4, 10, 0.0, 2)), 0.0);
  EXPECT_EQ(unencrypted_trace_distance(0, 1.0), 0.0);
  EXPECT_EQ(unencrypted_trace_distance(3, 0.0), 0.0);
  // d = 1: no key, so encryption changes nothing.
  for (int m : {1, 2, 5}) {
    for (int w = 1; w <= m; ++w) {
      for (double a : {0.2, 0.9, 1.4}) {
        EXPECT_NEAR(encrypted_trace_distance(params(m, 1, a, w)), unencrypted_trace_distance(w, a), 1e-12);
      }
    }
  }
}

TEST(security, unencrypted_distance_values) {
  EXPECT_NEAR(unencrypted_trace_distance(1, 1.0), 0.99079985926082257, 1e-15);
  EXPECT_THROW(unencrypted_trace_distance(-1, 1.0), DomainError);
}

TEST(security, convergence_to_limit) {
  for (int m : {1, 5, 10}) {
    for (int w = 1; w <= m; ++w) {
      for (double e = 0.5; e <= 20.0; e += 0.5) {
        const double a = std::sqrt(e / m);
        EXPECT_LT(std::abs(encrypted_trace_distance(params(m, 100, a, w)) -
                           encrypted_trace_distance(params(m, std::nullopt, a, w))),
                  1e-8);
      }
    }
  }
}

// Slack of 1e-13 covers series round-off where D saturates at 1.
TEST(security, monotone_in_alpha) {
  for (int w = 1; w <= 10; ++w) {
    double prev_enc = 0.0;
    double prev_unenc = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double a = 0.02 * i;
      const double enc = encrypted_trace_distance(params(10, 100, a, w));
      const double unenc = unencrypted_trace_distance(w, a);
      EXPECT_GE(enc, prev_enc - 1e-13) << w << " " << a;
      EXPECT_GE(unenc, prev_unenc - 1e-15) << w << " " << a;
      prev_enc = enc;
      prev_unenc = unenc;
    }
  }
}

TEST(security, monotone_in_weight) {
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    for (int w = 1; w <= 10; ++w) {
      EXPECT_GE(unencrypted_trace_distance(w, a), unencrypted_trace_distance(w - 1, a));
    }
    // The encrypted distance is symmetric about w = m/2, where it peaks.
    for (int w = 1; w <= 5; ++w) {
      EXPECT_GE(encrypted_trace_distance(params(10, 100, a, w)),
                encrypted_trace_distance(params(10, 100, a, w - 1)) - 1e-13);
    }
    for (int w = 0; w <= 10; ++w) {
      EXPECT_NEAR(encrypted_trace_distance(params(10, 100, a, w)),
                  encrypted_trace_distance(params(10, 100, a, 10 - w)), 1e-12);
    }
  }
}

TEST(security, suppression_ratio) {
  const auto r = suppression_ratio(params(10, 100, 1.0, 1));
  ASSERT_TRUE(r.ratio.has_value());
  EXPECT_NEAR(*r.ratio, r.encrypted / r.unencrypted, 1e-15);
  EXPECT_LT(*r.ratio, 1.0);
  EXPECT_FALSE(suppression_ratio(params(10, 100, 1.0, 0)).ratio.has_value());
  EXPECT_FALSE(suppression_ratio(params(10, 100, 0.0, 2)).ratio.has_value());
}

TEST(security, encrypted_never_exceeds_unencrypted) {
  for (int m = 1; m <= 12; ++m) {
    for (int w = 1; w <= m; ++w) {
      for (double a : {0.05, 0.3, 0.9, 1.6, 2.0}) {
        for (std::optional<int> d : {std::optional<int>(2), std::optional<int>(7), std::optional<int>(100),
                                     std::optional<int>()}) {
          EXPECT_LE(encrypted_trace_distance(params(m, d, a, w)), unencrypted_trace_distance(w, a) + 1e-12);
        }
      }
    }
  }
}

TEST(security, pgm_closed_form_values) {
  const auto r = pgm_closed_form(1.0);
  EXPECT_NEAR(r.a_plus, 0.56766764161830635, 1e-15);
  EXPECT_NEAR(r.a_minus, 0.43233235838169365, 1e-15);
  EXPECT_NEAR(r.i_single, 0.957663252144504, 1e-12);
  EXPECT_NEAR(r.a_plus + r.a_minus, 1.0, 1e-15);
  EXPECT_NEAR(r.p_same + r.p_diff, 1.0, 1e-15);
  EXPECT_NEAR(pgm_closed_form(1.0, 7).i_total, 7 * r.i_single, 1e-14);
  EXPECT_EQ(pgm_closed_form(0.0).i_single, 0.0);
  EXPECT_GE(pgm_closed_form(3.0).i_single, 0.999);
  const double small = pgm_closed_form(0.05).i_single / (2 * 0.05 * 0.05 / std::log(2.0));
  EXPECT_GE(small, 0.99);
  EXPECT_LE(small, 1.01);
  EXPECT_THROW(pgm_closed_form(1.0, 0), DomainError);
}

TEST(security, pgm_bounds_and_monotonicity) {
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const auto r = pgm_closed_form(0.02 * i);
    EXPECT_GE(r.i_single, 0.0);
    EXPECT_LE(r.i_single, 1.0);
    EXPECT_GE(r.i_single, prev - 1e-13);
    prev = r.i_single;
  }
}

TEST(security, binary_mutual_information_cases) {
  EXPECT_NEAR(binary_mutual_information({{{1.0, 0.0}, {0.0, 1.0}}}), 1.0, 1e-15);
  EXPECT_NEAR(binary_mutual_information({{{0.5, 0.5}, {0.5, 0.5}}}), 0.0, 1e-15);
  // Binary symmetric channel: 1 - h(0.1).
  const double h = -0.1 * std::log2(0.1) - 0.9 * std::log2(0.9);
  EXPECT_NEAR(binary_mutual_information({{{0.9, 0.1}, {0.1, 0.9}}}), 1.0 - h, 1e-15);
}

TEST(security, pgm_numeric_matches_closed_form) {
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const auto closed = pgm_closed_form(a);
    const auto numeric = pgm_numeric_oracle(a, truncation_bound(a * a, 1e-14));
    EXPECT_NEAR(numeric.i_single, closed.i_single, 1e-6) << a;
    EXPECT_NEAR(numeric.p_same, closed.p_same, 1e-6) << a;
    EXPECT_NEAR(numeric.a_plus, closed.a_plus, 1e-6) << a;
    EXPECT_NEAR(numeric.p_same + numeric.p_diff, 1.0, 1e-9) << a;
  }
}

TEST(security, pgm_numeric_vacuum) {
  const auto r = pgm_numeric_oracle(0.0, 4);
  EXPECT_NEAR(r.p_same, 0.5, 1e-12);
  EXPECT_NEAR(r.p_diff, 0.5, 1e-12);
  EXPECT_NEAR(r.i_single, 0.0, 1e-12);
}
