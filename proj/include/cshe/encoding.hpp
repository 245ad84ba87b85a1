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

// Codewords, phase keys, and the key-averaged encryption channel.
//
// Bit x_j is carried by mode j as the coherent state |(-1)^{x_j} alpha>.
// Encryption with key k rotates every mode by theta_k = 2 pi k / d using
// exp(-i theta n), which maps |alpha> to |alpha e^{-i theta}>.

#ifndef CSHE_ENCODING_HPP
#define CSHE_ENCODING_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cshe/errors.hpp"
#include "cshe/fock.hpp"

namespace cshe {

class BitString {
 public:
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw DomainError("BitString: length must be >= 1");
    for (auto b : bits_) {
      if (b > 1) throw DomainError("BitString: entries must be 0 or 1");
    }
  }

  /// Parses a string of '0'/'1' characters, first character is bit 1.
  static BitString parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw DomainError("BitString::parse: expected only '0' and '1'");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
  }

  static BitString zeros(int m) { return BitString(std::vector<std::uint8_t>(static_cast<std::size_t>(m), 0)); }
  static BitString ones(int m) { return BitString(std::vector<std::uint8_t>(static_cast<std::size_t>(m), 1)); }

  /// Weight-w string with its ones in the leading positions.
  static BitString leading_ones(int m, int w) {
    if (w < 0 || w > m) throw DomainError("BitString::leading_ones: need 0 <= w <= m");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < w; ++i) bits[static_cast<std::size_t>(i)] = 1;
    return BitString(std::move(bits));
  }

  int size() const { return static_cast<int>(bits_.size()); }
  int operator[](int i) const { return bits_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  int weight() const {
    int w = 0;
    for (auto b : bits_) w += b;
    return w;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend BitString operator^(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) throw ShapeError("BitString xor: lengths differ");
    std::vector<std::uint8_t> out(a.bits_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.bits_[i] ^ b.bits_[i];
    return BitString(std::move(out));
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Secret key k in {0, ..., d-1}; the rotation angle is 2 pi k / d.
class PhaseKey {
 public:
  PhaseKey(int k, int d) : k_(k), d_(d) {
    if (d < 1) throw DomainError("PhaseKey: d must be >= 1");
    if (k < 0 || k >= d) throw DomainError("PhaseKey: k must satisfy 0 <= k < d");
  }

  int k() const { return k_; }
  int d() const { return d_; }
  double angle() const { return 2.0 * std::numbers::pi * k_ / d_; }

 private:
  int k_;
  int d_;
};

/// Draws k uniformly from {0, ..., d-1}; the same seed gives the same key.
inline PhaseKey keygen(int d, std::uint64_t seed) {
  if (d < 1) throw DomainError("keygen: d must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, d - 1);
  return PhaseKey(dist(rng), d);
}

/// Coherent amplitudes of a product state, one per mode.
class AmplitudeVector {
 public:
  AmplitudeVector() = default;
  explicit AmplitudeVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw DomainError("AmplitudeVector: amplitudes must be finite");
      }
    }
  }

  int size() const { return static_cast<int>(amps_.size()); }
  Complex operator[](int i) const { return amps_.at(static_cast<std::size_t>(i)); }
  const std::vector<Complex>& amps() const { return amps_; }

  /// Mean total photon number sum_j |a_j|^2.
  double energy() const {
    double e = 0.0;
    for (const auto& a : amps_) e += std::norm(a);
    return e;
  }

 private:
  std::vector<Complex> amps_;
};

/// A zero amplitude makes |0_L> and |1_L> the same state.
inline bool is_degenerate_code(Complex alpha) { return alpha == Complex(0.0, 0.0); }

inline AmplitudeVector encode(const BitString& x, Complex alpha) {
  std::vector<Complex> amps;
  amps.reserve(static_cast<std::size_t>(x.size()));
  for (int j = 0; j < x.size(); ++j) amps.push_back(x[j] ? -alpha : alpha);
  return AmplitudeVector(std::move(amps));
}

/// Amplitude-level action of exp(-i theta n) on every mode.
inline AmplitudeVector phase_rotate(const AmplitudeVector& v, double theta) {
  const Complex factor = std::polar(1.0, -theta);
  std::vector<Complex> amps = v.amps();
  for (auto& a : amps) a *= factor;
  return AmplitudeVector(std::move(amps));
}

inline FockVector to_fock(const AmplitudeVector& v, int n_max) {
  return coherent_product_state(v.amps(), n_max);
}

/// The d rotated copies Phi(theta_k)^{(x)m} |psi_x>, k = 0..d-1.
inline std::vector<FockVector> encrypted_ensemble(const BitString& x, Complex alpha, int d, int n_max) {
  if (d < 1) throw DomainError("encrypted_ensemble: d must be >= 1");
  const AmplitudeVector plain = encode(x, alpha);
  std::vector<FockVector> states;
  states.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    states.push_back(to_fock(phase_rotate(plain, PhaseKey(k, d).angle()), n_max));
  }
  return states;
}

/// E(rho_x) = (1/d) sum_k Phi(theta_k)^{(x)m} rho_x Phi(-theta_k)^{(x)m}.
/// Throws CapabilityError above kDenseDimensionCap.
inline DensityOperator encryption_channel_density(const BitString& x, Complex alpha, int d, int n_max) {
  if (fock_dimension(x.size(), n_max) > kDenseDimensionCap) {
    throw CapabilityError("encryption_channel_density: dense dimension cap exceeded");
  }
  const auto states = encrypted_ensemble(x, alpha, d, n_max);
  return DensityOperator::mixture(states);
}

/// One residue class G_j = {z : sum z_i = j mod d} of the key-averaged state.
struct PartitionBlock {
  int index = 0;
  double weight = 0.0;  // q_j
  FockVector state;     // normalised projection onto G_j; zero when empty
  bool empty = false;   // q_j underflowed
};

inline constexpr double kEmptyBlockThreshold = 1e-300;

/// Splits E(rho_0) = sum_j q_j |g_j><g_j| along total-photon residues mod d.
inline std::vector<PartitionBlock> block_decomposition(Complex alpha, int m, int d, int n_max) {
  if (d < 1) throw DomainError("block_decomposition: d must be >= 1");
  const FockVector codeword = to_fock(encode(BitString::zeros(m), alpha), n_max);

  std::vector<ComplexVector> parts(static_cast<std::size_t>(d),
                                   ComplexVector::Zero(static_cast<Eigen::Index>(codeword.dim())));
  OccupationCounter counter(m, n_max);
  Eigen::Index i = 0;
  do {
    parts[static_cast<std::size_t>(counter.total() % d)][i] = codeword.amps()[i];
    ++i;
  } while (counter.next());

  std::vector<PartitionBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    auto& part = parts[static_cast<std::size_t>(j)];
    const double q = part.squaredNorm();
    PartitionBlock block{j, q, FockVector(m, n_max), q < kEmptyBlockThreshold};
    if (!block.empty) block.state = FockVector(m, n_max, part / std::sqrt(q));
    blocks.push_back(std::move(block));
  }
  return blocks;
}

/// sum_j q_j |g_j><g_j| over non-empty blocks.
inline DensityOperator reconstruct_density(const std::vector<PartitionBlock>& blocks) {
  if (blocks.empty()) throw DomainError("reconstruct_density: no blocks");
  const std::size_t dim = blocks.front().state.dim();
  if (dim > kDenseDimensionCap) throw CapabilityError("reconstruct_density: dense dimension cap exceeded");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (const auto& block : blocks) {
    if (block.empty) continue;
    rho.noalias() += block.weight * (block.state.amps() * block.state.amps().adjoint());
  }
  return DensityOperator(std::move(rho));
}

/// (V^{x_1} (x) ... (x) V^{x_m}) |g_j>, V = Phi(pi): the coefficient of |z>
/// picks up (-1)^{x.z}.
inline FockVector apply_sign_flips(const PartitionBlock& block, const BitString& x) {
  const FockVector& g = block.state;
  if (g.modes() != x.size()) throw ShapeError("apply_sign_flips: mode count mismatch");
  ComplexVector amps = g.amps();
  OccupationCounter counter(g.modes(), g.cutoff());
  Eigen::Index i = 0;
  do {
    int parity = 0;
    const auto& z = counter.occupation();
    for (int mode = 0; mode < x.size(); ++mode) parity += x[mode] * z[static_cast<std::size_t>(mode)];
    if (parity % 2) amps[i] = -amps[i];
    ++i;
  } while (counter.next());
  return FockVector(g.modes(), g.cutoff(), std::move(amps));
}

}  // namespace cshe

#endif  // CSHE_ENCODING_HPP
