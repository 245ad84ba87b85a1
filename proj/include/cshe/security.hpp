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

// Security figures of merit for the phase-key coherent-state code.
//
// For two strings u, v with w = wt(u xor v) and E = m|alpha|^2 the
// key-averaged states are block diagonal over residue classes of the total
// photon number t mod d. Block k has weight q_k and the two block states
// overlap in A_k, giving
//
//   D_enc = sum_k q_k sqrt(1 - A_k^2).
//
// Grouping each class by fixed t and applying the multinomial theorem
// inside it gives, for any finite d,
//
//   q_k     = sum_{t = k mod d} e^{-E} E^t / t!
//   q_k A_k = sum_{t = k mod d} e^{-E} ((m - 2w)|alpha|^2)^t / t!
//
// and for d -> infinity only t = k survives.

#ifndef CSHE_SECURITY_HPP
#define CSHE_SECURITY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cshe/errors.hpp"
#include "cshe/fock.hpp"

namespace cshe {

// Poisson tail below which series are cut.
inline constexpr double kSeriesTailEps = 1e-14;
// Pseudoinverse eigenvalue cut, relative to the largest eigenvalue.
inline constexpr double kPseudoinverseCut = 1e-12;

struct SecurityParams {
  int m = 1;
  std::optional<int> d;  // empty: d -> infinity
  double abs_alpha = 0.0;
  int w = 0;

  double energy() const { return m * abs_alpha * abs_alpha; }

  static SecurityParams make(int m, std::optional<int> d, double abs_alpha, int w) {
    if (m < 1) throw DomainError("SecurityParams: m must be >= 1");
    if (d && *d < 1) throw DomainError("SecurityParams: d must be >= 1");
    if (w < 0 || w > m) throw DomainError("SecurityParams: need 0 <= w <= m");
    if (!(abs_alpha >= 0.0) || !std::isfinite(abs_alpha)) {
      throw DomainError("SecurityParams: |alpha| must be finite and >= 0");
    }
    return SecurityParams{m, d, abs_alpha, w};
  }
};

/// Eigenvalues (lambda_+, lambda_-) = ((1+C)(1-cos), (1-C)(1+cos)) of
/// |x><x| - C|x><y| - C|y><x| + |y><y| with <x|y> = cos.
inline std::pair<double, double> rank2_eigenvalues(double c, double cos_theta) {
  if (std::abs(cos_theta) > 1.0 + 1e-15) throw DomainError("rank2_eigenvalues: |cos theta| must be <= 1");
  return {(1.0 + c) * (1.0 - cos_theta), (1.0 - c) * (1.0 + cos_theta)};
}

/// Last photon number kept by the series: Poisson(E) tail < kSeriesTailEps.
inline int series_cutoff(double energy) { return truncation_bound(energy, kSeriesTailEps); }

inline double qk_limit(const SecurityParams& p, int k) {
  if (k < 0) return 0.0;
  return std::exp(poisson_log_pmf(p.energy(), k));
}

inline double ak_limit(const SecurityParams& p, int k) {
  if (k < 0) throw DomainError("ak_limit: k must be >= 0");
  return std::pow(static_cast<double>(p.m - 2 * p.w) / p.m, k);
}

struct BlockWeight {
  double q = 0.0;
  double a = 0.0;
  bool absent = false;  // q underflowed; a is meaningless
};

/// q_k and A_k for every k in 0 .. min(d, T+1)-1, T the series cutoff.
/// Classes with k > T hold only negligible mass and are not listed.
inline std::vector<BlockWeight> block_weights_finite(const SecurityParams& p) {
  if (!p.d) throw DomainError("block_weights_finite: d must be finite");
  const int d = *p.d;
  const double energy = p.energy();
  const int last = series_cutoff(energy);
  // e^{-E} ((m-2w)|alpha|^2)^t / t! = pmf(t) r^t with r = (m-2w)/m; the
  // shared pmf makes A_k = +-1 exactly when |r| = 1.
  const double r = static_cast<double>(p.m - 2 * p.w) / p.m;

  const auto classes = static_cast<std::size_t>(std::min(d, last + 1));
  std::vector<double> q(classes, 0.0);
  std::vector<double> s(classes, 0.0);
  for (int t = 0; t <= last; ++t) {
    const auto k = static_cast<std::size_t>(t % d);
    const double pmf = std::exp(poisson_log_pmf(energy, t));
    q[k] += pmf;
    s[k] += pmf * std::pow(r, t);
  }

  std::vector<BlockWeight> out(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    out[k].q = q[k];
    out[k].absent = q[k] < 1e-300;
    out[k].a = out[k].absent ? 0.0 : std::clamp(s[k] / q[k], -1.0, 1.0);
  }
  return out;
}

inline BlockWeight qk_ak_finite(const SecurityParams& p, int k) {
  if (!p.d) throw DomainError("qk_ak_finite: d must be finite");
  if (k < 0 || k >= *p.d) throw DomainError("qk_ak_finite: k must satisfy 0 <= k < d");
  const auto all = block_weights_finite(p);
  if (static_cast<std::size_t>(k) >= all.size()) return BlockWeight{0.0, 0.0, true};
  return all[static_cast<std::size_t>(k)];
}

/// d -> infinity closed form: sum_{k>=1} e^{-E} E^k/k! sqrt(1 - r^{2k}),
/// r = (m - 2w)/m.
inline double encrypted_trace_distance_limit(const SecurityParams& p) {
  const double energy = p.energy();
  if (energy == 0.0 || p.w == 0) return 0.0;
  const double r = static_cast<double>(p.m - 2 * p.w) / p.m;
  const double log_abs_r = std::log(std::abs(r));
  const int last = series_cutoff(energy);
  double sum = 0.0;
  for (int k = 1; k <= last; ++k) {
    // 1 - r^{2k} without cancellation for |r| close to 1
    const double gap = (r == 0.0) ? 1.0 : -std::expm1(2.0 * k * log_abs_r);
    sum += std::exp(poisson_log_pmf(energy, k)) * std::sqrt(std::max(gap, 0.0));
  }
  return sum;
}

/// D(E(rho_u), E(rho_v)); uses the limit form when params.d is empty.
inline double encrypted_trace_distance(const SecurityParams& p) {
  if (!p.d) return encrypted_trace_distance_limit(p);
  if (p.energy() == 0.0 || p.w == 0) return 0.0;
  double sum = 0.0;
  for (const auto& block : block_weights_finite(p)) {
    if (block.absent) continue;
    sum += block.q * std::sqrt(std::max((1.0 - block.a) * (1.0 + block.a), 0.0));
  }
  return sum;
}

/// D(rho_u, rho_v) = sqrt(1 - B^2), B = exp(-2 w |alpha|^2).
inline double unencrypted_trace_distance(int w, double abs_alpha) {
  if (w < 0) throw DomainError("unencrypted_trace_distance: w must be >= 0");
  return std::sqrt(-std::expm1(-4.0 * w * abs_alpha * abs_alpha));
}

struct RatioResult {
  double encrypted = 0.0;
  double unencrypted = 0.0;
  std::optional<double> ratio;  // empty when w = 0 or alpha = 0
};

inline RatioResult suppression_ratio(const SecurityParams& p) {
  RatioResult r;
  r.encrypted = encrypted_trace_distance(p);
  r.unencrypted = unencrypted_trace_distance(p.w, p.abs_alpha);
  if (p.w >= 1 && p.abs_alpha > 0.0 && r.unencrypted > 0.0) r.ratio = r.encrypted / r.unencrypted;
  return r;
}

struct PgmResult {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double p_same = 0.0;   // p(j|l), j = l
  double p_diff = 0.0;   // p(j|l), j != l
  double i_single = 0.0; // bits
  double i_total = 0.0;  // m * i_single
};

namespace detail {

inline double xlog2x_term(double s) { return s > 0.0 ? s * s * std::log2(s) : 0.0; }

inline double plogp_ratio(double p, double q) { return p > 0.0 ? p * std::log2(p / q) : 0.0; }

}  // namespace detail

/// Mutual information between a uniform bit and the outcome of a binary
/// measurement with conditionals cond[l][j] = p(j | l). 0 log 0 = 0.
inline double binary_mutual_information(const std::array<std::array<double, 2>, 2>& cond) {
  const std::array<double, 2> py = {0.5 * (cond[0][0] + cond[1][0]), 0.5 * (cond[0][1] + cond[1][1])};
  double info = 0.0;
  for (int l = 0; l < 2; ++l) {
    for (int j = 0; j < 2; ++j) info += 0.5 * detail::plogp_ratio(cond[l][j], py[j]);
  }
  return info;
}

/// Pretty-good-measurement information for the single-mode code {|alpha>, |-alpha>}.
inline PgmResult pgm_closed_form(double abs_alpha, int m = 1) {
  if (m < 1) throw DomainError("pgm_closed_form: m must be >= 1");
  PgmResult r;
  r.a_minus = -0.5 * std::expm1(-2.0 * abs_alpha * abs_alpha);
  r.a_plus = 1.0 - r.a_minus;
  const double s_plus = std::sqrt(r.a_plus) + std::sqrt(r.a_minus);
  const double s_minus = std::sqrt(r.a_plus) - std::sqrt(r.a_minus);
  r.p_same = 0.5 * s_plus * s_plus;
  r.p_diff = 0.5 * s_minus * s_minus;
  r.i_single = std::clamp(detail::xlog2x_term(s_plus) + detail::xlog2x_term(s_minus), 0.0, 1.0);
  r.i_total = m * r.i_single;
  return r;
}

/// The same quantities from an explicit POVM built in the truncated Fock
/// basis: Pi_j = rho^{-1/2} (rho_j / 2) rho^{-1/2}, rho = (rho_0 + rho_1)/2.
///
/// Throws Error when Pi_0 + Pi_1 differs from the support projector by
/// more than 1e-9.
inline PgmResult pgm_numeric_oracle(double abs_alpha, int n_max, int m = 1) {
  const FockVector plus = coherent_state(Complex(abs_alpha, 0.0), n_max);
  const FockVector minus = coherent_state(Complex(-abs_alpha, 0.0), n_max);
  const std::array<FockVector, 2> states = {plus, minus};
  const ComplexMatrix rho = DensityOperator::mixture(states).matrix();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho);
  if (solver.info() != Eigen::Success) throw Error("pgm_numeric_oracle: eigensolver failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const ComplexMatrix& vecs = solver.eigenvectors();
  const double cut = kPseudoinverseCut * lambda.maxCoeff();

  const auto n = rho.rows();
  ComplexMatrix inv_sqrt = ComplexMatrix::Zero(n, n);
  ComplexMatrix projector = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] <= cut) continue;
    const ComplexMatrix outer = vecs.col(i) * vecs.col(i).adjoint();
    inv_sqrt += outer / std::sqrt(lambda[i]);
    projector += outer;
  }

  std::array<ComplexMatrix, 2> povm;
  for (std::size_t j = 0; j < 2; ++j) {
    const ComplexVector half = inv_sqrt * states[j].amps();
    povm[j] = 0.5 * half * half.adjoint();
  }
  const double defect = (povm[0] + povm[1] - projector).cwiseAbs().maxCoeff();
  if (defect > 1e-9) throw Error("pgm_numeric_oracle: POVM is not complete on the support");

  std::array<std::array<double, 2>, 2> cond{};
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t j = 0; j < 2; ++j) {
      cond[l][j] = states[l].amps().dot(povm[j] * states[l].amps()).real();
    }
  }

  PgmResult r;
  r.a_plus = lambda[n - 1];
  r.a_minus = n > 1 ? std::max(lambda[n - 2], 0.0) : 0.0;
  r.p_same = cond[0][0];
  r.p_diff = cond[0][1];
  r.i_single = binary_mutual_information(cond);
  r.i_total = m * r.i_single;
  return r;
}

}  // namespace cshe

#endif  // CSHE_SECURITY_HPP
