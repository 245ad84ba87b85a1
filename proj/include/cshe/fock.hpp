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

// Truncated Fock-space linear algebra.
//
// A FockVector over m modes with cutoff n_max stores (n_max+1)^m amplitudes.
// Occupation tuples (z_1, ..., z_m) are ordered lexicographically with the
// first mode most significant, so the flat index is
//
//   index(z) = sum_i z_i * (n_max+1)^(m-1-i).
//
// Every computation picks one cutoff from the total mean photon number via
// truncation_bound(), which bounds the mass lost outside the box.

#ifndef CSHE_FOCK_HPP
#define CSHE_FOCK_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cshe/errors.hpp"

namespace cshe {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultCutoffCap = 4096;
inline constexpr double kDefaultTruncationEps = 1e-10;
// Largest Hilbert-space dimension for which a dense density operator is built.
inline constexpr std::size_t kDenseDimensionCap = 2500;
// Largest number of amplitudes a FockVector may hold.
inline constexpr std::size_t kFockAmplitudeCap = std::size_t{1} << 24;

/// Number of amplitudes in an m-mode space with per-mode cutoff n_max.
/// Throws CapabilityError when the count exceeds kFockAmplitudeCap.
inline std::size_t fock_dimension(int modes, int cutoff) {
  if (modes < 1) throw DomainError("fock_dimension: modes must be >= 1");
  if (cutoff < 0) throw DomainError("fock_dimension: cutoff must be >= 0");
  std::size_t dim = 1;
  const auto base = static_cast<std::size_t>(cutoff) + 1;
  for (int i = 0; i < modes; ++i) {
    if (dim > kFockAmplitudeCap / base) {
      throw CapabilityError("fock_dimension: (n_max+1)^m exceeds the amplitude cap");
    }
    dim *= base;
  }
  return dim;
}

/// Walks occupation tuples in flat-index order.
class OccupationCounter {
 public:
  OccupationCounter(int modes, int cutoff)
      : cutoff_(cutoff), occupation_(static_cast<std::size_t>(modes), 0) {}

  const std::vector<int>& occupation() const { return occupation_; }
  int total() const { return total_; }

  /// Advances to the next tuple; returns false after the last one.
  bool next() {
    for (std::size_t i = occupation_.size(); i-- > 0;) {
      if (occupation_[i] < cutoff_) {
        ++occupation_[i];
        ++total_;
        return true;
      }
      total_ -= occupation_[i];
      occupation_[i] = 0;
    }
    return false;
  }

 private:
  int cutoff_;
  int total_ = 0;
  std::vector<int> occupation_;
};

/// Truncated number-basis pure state of m modes.
class FockVector {
 public:
  /// Zero vector.
  FockVector(int modes, int cutoff)
      : modes_(modes), cutoff_(cutoff), amps_(ComplexVector::Zero(
            static_cast<Eigen::Index>(fock_dimension(modes, cutoff)))) {}

  FockVector(int modes, int cutoff, ComplexVector amps)
      : modes_(modes), cutoff_(cutoff), amps_(std::move(amps)) {
    if (static_cast<std::size_t>(amps_.size()) != fock_dimension(modes, cutoff)) {
      throw ShapeError("FockVector: amplitude count does not match (n_max+1)^m");
    }
  }

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amps() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double squared_norm() const { return amps_.squaredNorm(); }

  std::size_t index_of(std::span<const int> occupation) const {
    if (occupation.size() != static_cast<std::size_t>(modes_)) {
      throw ShapeError("FockVector::index_of: wrong tuple length");
    }
    std::size_t index = 0;
    for (int z : occupation) {
      if (z < 0 || z > cutoff_) throw DomainError("FockVector::index_of: occupation outside cutoff");
      index = index * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(z);
    }
    return index;
  }

  std::vector<int> occupation(std::size_t index) const {
    std::vector<int> z(static_cast<std::size_t>(modes_));
    const auto base = static_cast<std::size_t>(cutoff_ + 1);
    for (std::size_t i = z.size(); i-- > 0;) {
      z[i] = static_cast<int>(index % base);
      index /= base;
    }
    return z;
  }

  /// Probability of each total photon number N = 0 .. m*n_max.
  std::vector<double> photon_number_distribution() const {
    std::vector<double> dist(static_cast<std::size_t>(modes_ * cutoff_ + 1), 0.0);
    OccupationCounter counter(modes_, cutoff_);
    std::size_t i = 0;
    do {
      dist[static_cast<std::size_t>(counter.total())] += std::norm(amps_[static_cast<Eigen::Index>(i)]);
      ++i;
    } while (counter.next());
    return dist;
  }

 private:
  int modes_;
  int cutoff_;
  ComplexVector amps_;
};

/// Coefficients b_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!) for n = 0..n_max.
inline std::vector<Complex> coherent_coefficients(Complex alpha, int n_max) {
  if (n_max < 0) throw DomainError("coherent_coefficients: n_max must be >= 0");
  std::vector<Complex> b(static_cast<std::size_t>(n_max) + 1);
  b[0] = Complex(std::exp(-0.5 * std::norm(alpha)), 0.0);
  for (int n = 0; n < n_max; ++n) {
    b[static_cast<std::size_t>(n) + 1] =
        b[static_cast<std::size_t>(n)] * alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return b;
}

inline double poisson_log_pmf(double mean, int t) {
  if (mean == 0.0) {
    return t == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return -mean + t * std::log(mean) - std::lgamma(static_cast<double>(t) + 1.0);
}

/// Smallest n_max with P(Poisson(total_energy) > n_max) < eps.
///
/// The tail is accumulated from the top down so that no 1 - CDF
/// cancellation occurs. Throws CapabilityError if the answer exceeds cap.
inline int truncation_bound(double total_energy, double eps = kDefaultTruncationEps,
                            int cap = kDefaultCutoffCap) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("truncation_bound: eps must lie in (0,1)");
  if (!(total_energy >= 0.0) || !std::isfinite(total_energy)) {
    throw DomainError("truncation_bound: energy must be finite and >= 0");
  }
  if (total_energy == 0.0) return 0;
  if (total_energy > cap) {
    throw CapabilityError("truncation_bound: mean photon number exceeds the cutoff cap");
  }

  // Extend the pmf table until the geometric bound on what is left is far
  // below eps.
  std::vector<double> pmf;
  double remainder = 0.0;
  for (int t = 0;; ++t) {
    pmf.push_back(std::exp(poisson_log_pmf(total_energy, t)));
    if (t > total_energy) {
      const double ratio = total_energy / (t + 1.0);
      remainder = pmf.back() * ratio / (1.0 - ratio);
      if (remainder < eps * 1e-6) break;
    }
    if (t > cap + 64 + static_cast<int>(16.0 * std::sqrt(static_cast<double>(cap)))) {
      throw CapabilityError("truncation_bound: eps too small for the cutoff cap");
    }
  }

  // tail[n] = sum_{t > n} pmf[t]
  double tail = remainder;
  int answer = -1;
  for (int n = static_cast<int>(pmf.size()) - 1; n >= 0; --n) {
    if (tail < eps) answer = n;
    else break;
    tail += pmf[static_cast<std::size_t>(n)];
  }
  if (answer < 0 || answer > cap) {
    throw CapabilityError("truncation_bound: required cutoff exceeds the cap");
  }
  return answer;
}

/// Single-mode coherent state |alpha> truncated at n_max.
inline FockVector coherent_state(Complex alpha, int n_max) {
  const auto b = coherent_coefficients(alpha, n_max);
  ComplexVector amps(static_cast<Eigen::Index>(b.size()));
  for (std::size_t n = 0; n < b.size(); ++n) amps[static_cast<Eigen::Index>(n)] = b[n];
  return FockVector(1, n_max, std::move(amps));
}

/// Product of coherent states |a_1>|a_2>...|a_m> truncated per mode at n_max.
inline FockVector coherent_product_state(std::span<const Complex> amplitudes, int n_max) {
  const int modes = static_cast<int>(amplitudes.size());
  if (modes < 1) throw DomainError("coherent_product_state: need at least one mode");
  std::vector<std::vector<Complex>> coeffs;
  coeffs.reserve(amplitudes.size());
  for (const Complex& a : amplitudes) coeffs.push_back(coherent_coefficients(a, n_max));

  ComplexVector amps(static_cast<Eigen::Index>(fock_dimension(modes, n_max)));
  OccupationCounter counter(modes, n_max);
  Eigen::Index i = 0;
  do {
    Complex value = 1.0;
    const auto& z = counter.occupation();
    for (std::size_t mode = 0; mode < z.size(); ++mode) {
      value *= coeffs[mode][static_cast<std::size_t>(z[mode])];
    }
    amps[i++] = value;
  } while (counter.next());
  return FockVector(modes, n_max, std::move(amps));
}

/// Tensor product |u>|v>; u's modes come first.
inline FockVector tensor(const FockVector& u, const FockVector& v) {
  if (u.cutoff() != v.cutoff()) throw ShapeError("tensor: cutoffs differ");
  const auto n = static_cast<Eigen::Index>(v.dim());
  ComplexVector amps(static_cast<Eigen::Index>(u.dim()) * n);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(u.dim()); ++i) {
    amps.segment(i * n, n) = u.amps()[i] * v.amps();
  }
  return FockVector(u.modes() + v.modes(), u.cutoff(), std::move(amps));
}

/// Hermitian inner product <u|v>.
inline Complex overlap(const FockVector& u, const FockVector& v) {
  if (u.modes() != v.modes() || u.cutoff() != v.cutoff()) {
    throw ShapeError("overlap: mode count or cutoff mismatch");
  }
  return u.amps().dot(v.amps());
}

/// Applies exp(-i theta N) with N the total photon number.
inline FockVector global_phase_rotate(const FockVector& psi, double theta) {
  ComplexVector amps = psi.amps();
  OccupationCounter counter(psi.modes(), psi.cutoff());
  Eigen::Index i = 0;
  do {
    amps[i++] *= std::polar(1.0, -theta * counter.total());
  } while (counter.next());
  return FockVector(psi.modes(), psi.cutoff(), std::move(amps));
}

/// Applies exp(-i theta n_mode) to a single mode.
inline FockVector mode_phase_rotate(const FockVector& psi, int mode, double theta) {
  if (mode < 0 || mode >= psi.modes()) throw ShapeError("mode_phase_rotate: mode out of range");
  ComplexVector amps = psi.amps();
  OccupationCounter counter(psi.modes(), psi.cutoff());
  Eigen::Index i = 0;
  do {
    amps[i++] *= std::polar(1.0, -theta * counter.occupation()[static_cast<std::size_t>(mode)]);
  } while (counter.next());
  return FockVector(psi.modes(), psi.cutoff(), std::move(amps));
}

/// Dense Hermitian operator on a truncated Fock space.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw ShapeError("DensityOperator: matrix must be square");
  }

  static DensityOperator pure(const FockVector& psi) {
    return mixture(std::span<const FockVector>(&psi, 1));
  }

  /// Uniform mixture (1/K) sum_k |psi_k><psi_k|.
  static DensityOperator mixture(std::span<const FockVector> states) {
    if (states.empty()) throw DomainError("DensityOperator::mixture: empty ensemble");
    const std::size_t dim = states.front().dim();
    if (dim > kDenseDimensionCap) {
      throw CapabilityError("DensityOperator: dimension exceeds the dense cap");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (const auto& psi : states) {
      if (psi.dim() != dim) throw ShapeError("DensityOperator::mixture: dimension mismatch");
      rho.noalias() += psi.amps() * psi.amps().adjoint();
    }
    rho /= static_cast<double>(states.size());
    return DensityOperator(std::move(rho));
  }

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex trace() const { return entries_.trace(); }

  double max_hermiticity_defect() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  }

 private:
  ComplexMatrix entries_;
};

/// Eigenvalues of a Hermitian matrix in ascending order.
inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("hermitian_eigenvalues: eigensolver failed");
  return solver.eigenvalues();
}

/// D(rho, sigma) = 1/2 sum_i |lambda_i(rho - sigma)|.
inline double trace_distance_numeric(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw ShapeError("trace_distance_numeric: dimension mismatch");
  return 0.5 * hermitian_eigenvalues(rho.matrix() - sigma.matrix()).cwiseAbs().sum();
}

/// Trace distance between two uniform mixtures of pure states without
/// forming either density operator.
///
/// The difference X = sum_i c_i |v_i><v_i| lives in span{v_i}. With the
/// thin QR factorisation V = QR, X = Q (R C R^dag) Q^dag, so the nonzero
/// spectrum of X is that of the small Hermitian matrix R C R^dag.
inline double trace_distance_of_mixtures(std::span<const FockVector> first,
                                         std::span<const FockVector> second) {
  if (first.empty() || second.empty()) throw DomainError("trace_distance_of_mixtures: empty ensemble");
  const std::size_t dim = first.front().dim();
  const auto cols = static_cast<Eigen::Index>(first.size() + second.size());
  const auto rows = static_cast<Eigen::Index>(dim);
  if (rows < cols) {
    // Span is the whole space; the dense route is cheaper.
    return trace_distance_numeric(DensityOperator::mixture(first), DensityOperator::mixture(second));
  }
  ComplexMatrix stacked(rows, cols);
  Eigen::VectorXd weights(cols);
  Eigen::Index c = 0;
  for (const auto& psi : first) {
    if (psi.dim() != dim) throw ShapeError("trace_distance_of_mixtures: dimension mismatch");
    stacked.col(c) = psi.amps();
    weights[c++] = 1.0 / static_cast<double>(first.size());
  }
  for (const auto& psi : second) {
    if (psi.dim() != dim) throw ShapeError("trace_distance_of_mixtures: dimension mismatch");
    stacked.col(c) = psi.amps();
    weights[c++] = -1.0 / static_cast<double>(second.size());
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(stacked);
  const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  const ComplexMatrix small = r * weights.cast<Complex>().asDiagonal() * r.adjoint();
  const ComplexMatrix hermitian = 0.5 * (small + small.adjoint());
  return 0.5 * hermitian_eigenvalues(hermitian).cwiseAbs().sum();
}

}  // namespace cshe

#endif  // CSHE_FOCK_HPP
