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

// Photon-number-preserving gates: passive linear optics and nonlinear
// phases that are polynomials in the mode number operators. All of them
// commute with exp(-i theta N), which is what makes evaluation on
// ciphertexts possible. hbar = 1 throughout.
//
// Linear-optics convention: an interferometer u maps a product of coherent
// states |a> to |u a>. In the Fock basis this is a_i^dag -> sum_j u_ji a_j^dag.

#ifndef CSHE_EVALUATION_HPP
#define CSHE_EVALUATION_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "cshe/encoding.hpp"
#include "cshe/errors.hpp"
#include "cshe/fock.hpp"

namespace cshe {

inline constexpr double kUnitarityTolerance = 1e-10;

class Interferometer {
 public:
  /// Rejects matrices that are not square or not unitary within tol.
  static Interferometer from_matrix(ComplexMatrix u, double tol = kUnitarityTolerance) {
    if (u.rows() != u.cols() || u.rows() < 1) throw ShapeError("Interferometer: matrix must be square and non-empty");
    const auto n = u.rows();
    const double defect = (u.adjoint() * u - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= tol)) throw DomainError("Interferometer: matrix is not unitary");
    return Interferometer(std::move(u));
  }

  static Interferometer identity(int m) {
    return Interferometer(ComplexMatrix::Identity(m, m));
  }

  /// Sends the amplitude of mode i to mode perm[i].
  static Interferometer permutation(const std::vector<int>& perm) {
    const auto m = static_cast<Eigen::Index>(perm.size());
    ComplexMatrix u = ComplexMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int target = perm[static_cast<std::size_t>(i)];
      if (target < 0 || target >= m) throw DomainError("Interferometer::permutation: index out of range");
      u(target, i) = 1.0;
    }
    return from_matrix(std::move(u));
  }

  int modes() const { return static_cast<int>(u_.rows()); }
  const ComplexMatrix& matrix() const { return u_; }

 private:
  explicit Interferometer(ComplexMatrix u) : u_(std::move(u)) {}
  ComplexMatrix u_;
};

/// amps' = u amps.
inline AmplitudeVector apply_interferometer(const Interferometer& u, const AmplitudeVector& v) {
  if (u.modes() != v.size()) throw ShapeError("apply_interferometer: mode count mismatch");
  ComplexVector in(v.size());
  for (int i = 0; i < v.size(); ++i) in[i] = v[i];
  const ComplexVector out = u.matrix() * in;
  return AmplitudeVector(std::vector<Complex>(out.data(), out.data() + out.size()));
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
inline Interferometer haar_random_unitary(int m, std::uint64_t seed) {
  if (m < 1) throw DomainError("haar_random_unitary: m must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(m, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < m; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double mag = std::abs(r(i, i));
    q.col(i) *= (mag > 0.0) ? r(i, i) / mag : Complex(1.0, 0.0);
  }
  return Interferometer::from_matrix(std::move(q), 1e-12);
}

/// Elementary step of a decomposed interferometer.
///   kPhase:    a_p -> e^{i angle} a_p
///   kRotation: (a_p, a_q) -> (c a_p + s a_q, -s a_p + c a_q)
struct OpticalElement {
  enum class Kind { kPhase, kRotation };
  Kind kind;
  int p;
  int q;
  double angle;
};

/// Factorises u into phases and nearest-neighbour real rotations by
/// Givens elimination. Applying the returned elements in order to an
/// amplitude vector is the same as multiplying by u.
inline std::vector<OpticalElement> decompose_interferometer(const Interferometer& u) {
  ComplexMatrix w = u.matrix();
  const int m = u.modes();
  std::vector<OpticalElement> eliminations;
  for (int col = 0; col + 1 < m; ++col) {
    for (int row = m - 1; row > col; --row) {
      const Complex below = w(row, col);
      if (std::abs(below) < 1e-300) continue;
      const Complex above = w(row - 1, col);
      const double phi = (std::abs(above) > 0.0 ? std::arg(above) : 0.0) - std::arg(below);
      w.row(row) *= std::polar(1.0, phi);
      eliminations.push_back({OpticalElement::Kind::kPhase, row, row, phi});

      const double theta = std::atan2(std::abs(below), std::abs(above));
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const ComplexVector upper = w.row(row - 1).transpose();
      const ComplexVector lower = w.row(row).transpose();
      w.row(row - 1) = (c * upper + s * lower).transpose();
      w.row(row) = (-s * upper + c * lower).transpose();
      w(row, col) = 0.0;
      eliminations.push_back({OpticalElement::Kind::kRotation, row - 1, row, theta});
    }
  }

  // w is now a diagonal of phases and u = E_1^-1 ... E_K^-1 w.
  std::vector<OpticalElement> program;
  program.reserve(eliminations.size() + static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) program.push_back({OpticalElement::Kind::kPhase, i, i, std::arg(w(i, i))});
  for (auto it = eliminations.rbegin(); it != eliminations.rend(); ++it) {
    program.push_back({it->kind, it->p, it->q, -it->angle});
  }
  return program;
}

inline AmplitudeVector apply_optical_elements(const std::vector<OpticalElement>& program,
                                              const AmplitudeVector& v) {
  std::vector<Complex> a = v.amps();
  for (const auto& e : program) {
    const auto p = static_cast<std::size_t>(e.p);
    const auto q = static_cast<std::size_t>(e.q);
    if (e.kind == OpticalElement::Kind::kPhase) {
      a.at(p) *= std::polar(1.0, e.angle);
    } else {
      const double c = std::cos(e.angle);
      const double s = std::sin(e.angle);
      const Complex x = a.at(p);
      const Complex y = a.at(q);
      a[p] = c * x + s * y;
      a[q] = -s * x + c * y;
    }
  }
  return AmplitudeVector(std::move(a));
}

namespace detail {

/// exp(theta (a^dag b - a b^dag)) restricted to N photons shared by two
/// modes, basis |n, N-n>, n = photons in the first mode.
inline Eigen::MatrixXd rotation_block(int total, double theta) {
  const Eigen::Index dim = total + 1;
  ComplexMatrix hermitian = ComplexMatrix::Zero(dim, dim);  // i * generator
  for (int n = 0; n < total; ++n) {
    const double up = std::sqrt(static_cast<double>(n + 1) * (total - n));
    hermitian(n + 1, n) = Complex(0.0, up);
    hermitian(n, n + 1) = Complex(0.0, -up);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
  const ComplexVector phases = (solver.eigenvalues() * (-theta)).unaryExpr(
      [](double x) { return std::polar(1.0, x); });
  const ComplexMatrix& v = solver.eigenvectors();
  return (v * phases.asDiagonal() * v.adjoint()).real();
}

inline std::size_t mode_stride(int modes, int cutoff, int mode) {
  std::size_t stride = 1;
  for (int i = modes - 1; i > mode; --i) stride *= static_cast<std::size_t>(cutoff + 1);
  return stride;
}

}  // namespace detail

/// Real two-mode rotation exp(theta (a_p^dag a_q - a_p a_q^dag)) on an
/// m-mode state. It acts on |z_p + z_q = N> blocks; components pushed past
/// the per-mode cutoff are dropped.
inline FockVector two_mode_rotation(const FockVector& psi, int p, int q, double theta) {
  if (p == q || p < 0 || q < 0 || p >= psi.modes() || q >= psi.modes()) {
    throw ShapeError("two_mode_rotation: invalid mode pair");
  }
  const int cutoff = psi.cutoff();
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(2 * cutoff + 1));
  for (int total = 0; total <= 2 * cutoff; ++total) blocks.push_back(detail::rotation_block(total, theta));

  const auto stride_p = static_cast<std::ptrdiff_t>(detail::mode_stride(psi.modes(), cutoff, p));
  const auto stride_q = static_cast<std::ptrdiff_t>(detail::mode_stride(psi.modes(), cutoff, q));
  ComplexVector out = ComplexVector::Zero(psi.amps().size());
  OccupationCounter counter(psi.modes(), cutoff);
  std::ptrdiff_t index = 0;
  do {
    const Complex amp = psi.amps()[index];
    if (amp != Complex(0.0, 0.0)) {
      const int zp = counter.occupation()[static_cast<std::size_t>(p)];
      const int zq = counter.occupation()[static_cast<std::size_t>(q)];
      const int total = zp + zq;
      const auto& block = blocks[static_cast<std::size_t>(total)];
      for (int np = std::max(0, total - cutoff); np <= std::min(cutoff, total); ++np) {
        const std::ptrdiff_t target = index + (np - zp) * stride_p + ((total - np) - zq) * stride_q;
        out[target] += block(np, zp) * amp;
      }
    }
    ++index;
  } while (counter.next());
  return FockVector(psi.modes(), cutoff, std::move(out));
}

/// Two-mode beamsplitter exp(theta (a^dag b - a b^dag)).
inline FockVector beamsplitter_fock(double theta, const FockVector& psi) {
  if (psi.modes() != 2) throw ShapeError("beamsplitter_fock: state must have two modes");
  return two_mode_rotation(psi, 0, 1, theta);
}

/// Fock-level action of an interferometer through its decomposition.
inline FockVector apply_interferometer_fock(const Interferometer& u, const FockVector& psi) {
  if (u.modes() != psi.modes()) throw ShapeError("apply_interferometer_fock: mode count mismatch");
  FockVector out = psi;
  for (const auto& e : decompose_interferometer(u)) {
    if (e.kind == OpticalElement::Kind::kPhase) {
      out = mode_phase_rotate(out, e.p, -e.angle);
    } else {
      out = two_mode_rotation(out, e.p, e.q, e.angle);
    }
  }
  return out;
}

struct NonlinearTerm {
  std::vector<int> exponents;  // one per mode
  double coupling = 0.0;       // g_{n_1..n_m}
};

/// H = sum_terms g prod_k n_k^{e_k}, evolved for time t.
struct NonlinearPhaseSpec {
  std::vector<NonlinearTerm> terms;
  double time = 0.0;

  int modes() const { return terms.empty() ? 0 : static_cast<int>(terms.front().exponents.size()); }

  void validate(int m) const {
    for (const auto& term : terms) {
      if (static_cast<int>(term.exponents.size()) != m) {
        throw ShapeError("NonlinearPhaseSpec: exponent tuple length differs from mode count");
      }
      bool any = false;
      for (int e : term.exponents) {
        if (e < 0) throw DomainError("NonlinearPhaseSpec: exponents must be >= 0");
        any = any || e > 0;
      }
      if (!any) throw DomainError("NonlinearPhaseSpec: a term needs at least one positive exponent");
      if (!std::isfinite(term.coupling)) throw DomainError("NonlinearPhaseSpec: coupling must be finite");
    }
    if (!std::isfinite(time)) throw DomainError("NonlinearPhaseSpec: time must be finite");
  }
};

/// Single-mode Kerr: g_1 = -K, g_2 = K, i.e. K (n^2 - n).
inline NonlinearPhaseSpec kerr_spec(double k, double t) {
  return {{{{1}, -k}, {{2}, k}}, t};
}

/// Pure K n^2 interaction.
inline NonlinearPhaseSpec kerr_square_spec(double k, double t) { return {{{{2}, k}}, t}; }

/// Cross-Kerr: g_{1,1} = K.
inline NonlinearPhaseSpec cross_kerr_spec(double k, double t) { return {{{{1, 1}, k}}, t}; }

/// Multiplies the |z> coefficient by exp(-i t sum g prod z_k^{e_k}).
inline FockVector nonlinear_phase_evolve(const NonlinearPhaseSpec& spec, const FockVector& psi) {
  spec.validate(psi.modes());
  constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;
  ComplexVector amps = psi.amps();
  OccupationCounter counter(psi.modes(), psi.cutoff());
  Eigen::Index i = 0;
  do {
    long double phase = 0.0L;
    for (const auto& term : spec.terms) {
      long double monomial = 1.0L;
      for (std::size_t k = 0; k < term.exponents.size(); ++k) {
        const int e = term.exponents[k];
        if (e > 0) monomial *= std::pow(static_cast<long double>(counter.occupation()[k]), e);
      }
      phase = std::fmod(phase + std::fmod(static_cast<long double>(spec.time) * term.coupling * monomial, kTwoPi),
                        kTwoPi);
    }
    amps[i] *= std::polar(1.0, -static_cast<double>(phase));
    ++i;
  } while (counter.next());
  return FockVector(psi.modes(), psi.cutoff(), std::move(amps));
}

/// |alpha> evolved under n^2 for K t = pi/2.
inline FockVector kerr_cat_reference(Complex alpha, int n_max) {
  return nonlinear_phase_evolve(kerr_square_spec(1.0, std::numbers::pi / 2.0), coherent_state(alpha, n_max));
}

/// (e^{-i pi/4}|alpha> + e^{i pi/4}|-alpha>) / sqrt(2).
inline FockVector kerr_cat_target(Complex alpha, int n_max) {
  const ComplexVector plus = coherent_state(alpha, n_max).amps();
  const ComplexVector minus = coherent_state(-alpha, n_max).amps();
  const ComplexVector cat =
      (std::polar(1.0, -std::numbers::pi / 4.0) * plus + std::polar(1.0, std::numbers::pi / 4.0) * minus) /
      std::sqrt(2.0);
  return FockVector(1, n_max, cat);
}

}  // namespace cshe

#endif  // CSHE_EVALUATION_HPP
