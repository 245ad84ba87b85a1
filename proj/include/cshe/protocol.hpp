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

// Client / evaluator exchange.
//
// The client encodes and encrypts, the evaluator applies a circuit to the
// ciphertext without ever seeing the key, and the client undoes the phase
// rotation and decodes each mode. Messages are single-line JSON:
//
//   {"type":"ciphertext","repr":"amplitude|fock","m":M,"payload":[[re,im],...],"cutoff":N}
//   {"type":"circuit","gates":[{"kind":"interferometer","matrix":[[[re,im],...],...]},
//                              {"kind":"nonlinear","terms":[{"exps":[...],"g":G}],"t":T}]}
//
// "cutoff" is present only for Fock payloads. Floats use 17 significant
// digits so that a message round-trips bit for bit.

#ifndef CSHE_PROTOCOL_HPP
#define CSHE_PROTOCOL_HPP

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cshe/encoding.hpp"
#include "cshe/errors.hpp"
#include "cshe/evaluation.hpp"
#include "cshe/fock.hpp"
#include "cshe/json_writer.hpp"

namespace cshe {

using Gate = std::variant<Interferometer, NonlinearPhaseSpec>;

struct CircuitDescription {
  std::vector<Gate> gates;

  bool has_nonlinear() const {
    return std::any_of(gates.begin(), gates.end(),
                       [](const Gate& g) { return std::holds_alternative<NonlinearPhaseSpec>(g); });
  }
};

enum class Representation { kAmplitude, kFock };

/// Wire object: an amplitude vector or a truncated Fock state. It carries
/// the mode count and cutoff, never the key.
class CipherText {
 public:
  static CipherText amplitude(AmplitudeVector v) { return CipherText(std::move(v)); }
  static CipherText fock(FockVector psi) { return CipherText(std::move(psi)); }

  Representation repr() const {
    return std::holds_alternative<AmplitudeVector>(payload_) ? Representation::kAmplitude : Representation::kFock;
  }
  int modes() const {
    return repr() == Representation::kAmplitude ? amplitudes().size() : fock_state().modes();
  }
  std::optional<int> cutoff() const {
    if (repr() == Representation::kAmplitude) return std::nullopt;
    return fock_state().cutoff();
  }
  const AmplitudeVector& amplitudes() const { return std::get<AmplitudeVector>(payload_); }
  const FockVector& fock_state() const { return std::get<FockVector>(payload_); }

 private:
  explicit CipherText(AmplitudeVector v) : payload_(std::move(v)) {}
  explicit CipherText(FockVector psi) : payload_(std::move(psi)) {}
  std::variant<AmplitudeVector, FockVector> payload_;
};

// ---------------------------------------------------------------------------
// Serialisation

inline std::string to_json(const CipherText& ct) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("ciphertext");
  w.key("repr").value(ct.repr() == Representation::kAmplitude ? "amplitude" : "fock");
  w.key("m").value(ct.modes());
  w.key("payload").begin_array();
  if (ct.repr() == Representation::kAmplitude) {
    for (const auto& a : ct.amplitudes().amps()) w.value(a);
  } else {
    const auto& amps = ct.fock_state().amps();
    for (Eigen::Index i = 0; i < amps.size(); ++i) w.value(amps[i]);
  }
  w.end_array();
  if (auto cutoff = ct.cutoff()) w.key("cutoff").value(*cutoff);
  w.end_object();
  return w.str();
}

inline std::string to_json(const CircuitDescription& circuit) {
  JsonWriter w;
  w.begin_object();
  w.key("type").value("circuit");
  w.key("gates").begin_array();
  for (const auto& gate : circuit.gates) {
    w.begin_object();
    if (const auto* u = std::get_if<Interferometer>(&gate)) {
      w.key("kind").value("interferometer");
      w.key("matrix").begin_array();
      for (Eigen::Index r = 0; r < u->matrix().rows(); ++r) {
        w.begin_array();
        for (Eigen::Index c = 0; c < u->matrix().cols(); ++c) w.value(u->matrix()(r, c));
        w.end_array();
      }
      w.end_array();
    } else {
      const auto& spec = std::get<NonlinearPhaseSpec>(gate);
      w.key("kind").value("nonlinear");
      w.key("terms").begin_array();
      for (const auto& term : spec.terms) {
        w.begin_object();
        w.key("exps").begin_array();
        for (int e : term.exponents) w.value(e);
        w.end_array();
        w.key("g").value(term.coupling);
        w.end_object();
      }
      w.end_array();
      w.key("t").value(spec.time);
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

namespace detail {

using nlohmann::json;

inline std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError(std::string("malformed JSON: ") + e.what(), line, column);
  }
}

[[noreturn]] inline void schema_error(const std::string& what) { throw ParseError(what, 0, 0); }

inline const json& field(const json& obj, const char* name) {
  if (!obj.is_object()) schema_error(std::string("expected an object holding \"") + name + "\"");
  const auto it = obj.find(name);
  if (it == obj.end()) schema_error(std::string("missing field \"") + name + "\"");
  return *it;
}

inline double number(const json& v, const char* what) {
  if (!v.is_number()) schema_error(std::string(what) + ": expected a number");
  return v.get<double>();
}

inline int integer(const json& v, const char* what) {
  if (!v.is_number_integer()) schema_error(std::string(what) + ": expected an integer");
  return v.get<int>();
}

inline Complex complex_pair(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) schema_error(std::string(what) + ": expected [re, im]");
  return {number(v[0], what), number(v[1], what)};
}

inline Gate gate_from_json(const json& g) {
  const json& kind = field(g, "kind");
  if (kind == "interferometer") {
    const json& rows = field(g, "matrix");
    if (!rows.is_array() || rows.empty()) schema_error("interferometer matrix must be a non-empty array");
    const auto n = static_cast<Eigen::Index>(rows.size());
    ComplexMatrix u(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) schema_error("interferometer matrix must be square");
      for (Eigen::Index c = 0; c < n; ++c) u(r, c) = complex_pair(row[static_cast<std::size_t>(c)], "matrix entry");
    }
    try {
      return Interferometer::from_matrix(std::move(u));
    } catch (const DomainError& e) {
      schema_error(e.what());
    }
  }
  if (kind == "nonlinear") {
    NonlinearPhaseSpec spec;
    const json& terms = field(g, "terms");
    if (!terms.is_array()) schema_error("nonlinear terms must be an array");
    for (const json& t : terms) {
      NonlinearTerm term;
      const json& exps = field(t, "exps");
      if (!exps.is_array()) schema_error("exps must be an array");
      for (const json& e : exps) term.exponents.push_back(integer(e, "exps entry"));
      term.coupling = number(field(t, "g"), "g");
      spec.terms.push_back(std::move(term));
    }
    spec.time = number(field(g, "t"), "t");
    return spec;
  }
  schema_error("unknown gate kind");
}

}  // namespace detail

inline CircuitDescription parse_circuit(std::string_view text) {
  const auto doc = detail::parse_document(text);
  if (detail::field(doc, "type") != "circuit") detail::schema_error("type must be \"circuit\"");
  const auto& gates = detail::field(doc, "gates");
  if (!gates.is_array()) detail::schema_error("gates must be an array");
  CircuitDescription circuit;
  for (const auto& g : gates) circuit.gates.push_back(detail::gate_from_json(g));
  return circuit;
}

inline CipherText parse_ciphertext(std::string_view text) {
  const auto doc = detail::parse_document(text);
  if (detail::field(doc, "type") != "ciphertext") detail::schema_error("type must be \"ciphertext\"");
  const auto& repr = detail::field(doc, "repr");
  const int m = detail::integer(detail::field(doc, "m"), "m");
  if (m < 1) detail::schema_error("m must be >= 1");
  const auto& payload = detail::field(doc, "payload");
  if (!payload.is_array()) detail::schema_error("payload must be an array");
  std::vector<Complex> values;
  values.reserve(payload.size());
  for (const auto& v : payload) values.push_back(detail::complex_pair(v, "payload entry"));

  if (repr == "amplitude") {
    if (doc.contains("cutoff")) detail::schema_error("amplitude ciphertext must not carry a cutoff");
    if (static_cast<int>(values.size()) != m) detail::schema_error("payload length differs from m");
    return CipherText::amplitude(AmplitudeVector(std::move(values)));
  }
  if (repr == "fock") {
    const int cutoff = detail::integer(detail::field(doc, "cutoff"), "cutoff");
    if (cutoff < 0) detail::schema_error("cutoff must be >= 0");
    ComplexVector amps(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) amps[static_cast<Eigen::Index>(i)] = values[i];
    try {
      return CipherText::fock(FockVector(m, cutoff, std::move(amps)));
    } catch (const Error& e) {
      detail::schema_error(e.what());
    }
  }
  detail::schema_error("repr must be \"amplitude\" or \"fock\"");
}

// ---------------------------------------------------------------------------
// Evaluator

struct EvaluatorOptions {
  double truncation_eps = kDefaultTruncationEps;
  int max_fock_modes = 3;
};

/// Applies the circuit gate by gate. Amplitude ciphertexts stay amplitude
/// level until the first nonlinear gate, which expands them into the
/// truncated Fock basis with a cutoff chosen from the total energy.
inline CipherText evaluator_apply(const CircuitDescription& circuit, const CipherText& ct,
                                  const EvaluatorOptions& options = {}) {
  const int m = ct.modes();
  std::optional<AmplitudeVector> amps;
  std::optional<FockVector> fock;
  if (ct.repr() == Representation::kAmplitude) amps = ct.amplitudes();
  else fock = ct.fock_state();

  for (const auto& gate : circuit.gates) {
    if (const auto* u = std::get_if<Interferometer>(&gate)) {
      if (u->modes() != m) throw ShapeError("evaluator_apply: interferometer size differs from mode count");
      if (amps) amps = apply_interferometer(*u, *amps);
      else fock = apply_interferometer_fock(*u, *fock);
      continue;
    }
    const auto& spec = std::get<NonlinearPhaseSpec>(gate);
    spec.validate(m);
    if (amps) {
      if (m > options.max_fock_modes) {
        throw CapabilityError("evaluator_apply: nonlinear gates are simulated only for m <= " +
                              std::to_string(options.max_fock_modes));
      }
      const int cutoff = truncation_bound(amps->energy(), options.truncation_eps);
      fock = to_fock(*amps, cutoff);
      amps.reset();
    }
    fock = nonlinear_phase_evolve(spec, *fock);
  }
  return amps ? CipherText::amplitude(std::move(*amps)) : CipherText::fock(std::move(*fock));
}

// ---------------------------------------------------------------------------
// Client

inline CipherText client_encrypt(const BitString& x, Complex alpha, const PhaseKey& key) {
  return CipherText::amplitude(phase_rotate(encode(x, alpha), key.angle()));
}

struct Decryption {
  CipherText state;
  int phase_rotations = 0;
};

/// Applies Phi(-theta_k) to each mode: one rotation per mode.
inline Decryption client_decrypt(const CipherText& ct, const PhaseKey& key) {
  const double theta = key.angle();
  if (ct.repr() == Representation::kAmplitude) {
    return {CipherText::amplitude(phase_rotate(ct.amplitudes(), -theta)), ct.modes()};
  }
  FockVector psi = ct.fock_state();
  const int modes = psi.modes();
  for (int mode = 0; mode < modes; ++mode) psi = mode_phase_rotate(psi, mode, -theta);
  return {CipherText::fock(std::move(psi)), modes};
}

inline constexpr double kUndecodableOverlap = 1e-6;

// Relative margin below which the two codewords count as equally close;
// ties decode to 0.
inline constexpr double kDecodeTieTolerance = 1e-9;

namespace detail {

/// <beta| rho_mode |beta> for the reduced state of one mode.
inline double reduced_overlap(const FockVector& psi, int mode, Complex beta) {
  const auto coeffs = coherent_coefficients(beta, psi.cutoff());
  const auto stride = static_cast<Eigen::Index>(mode_stride(psi.modes(), psi.cutoff(), mode));
  ComplexVector contracted = ComplexVector::Zero(psi.amps().size());
  OccupationCounter counter(psi.modes(), psi.cutoff());
  Eigen::Index i = 0;
  do {
    const int z = counter.occupation()[static_cast<std::size_t>(mode)];
    contracted[i - z * stride] += std::conj(coeffs[static_cast<std::size_t>(z)]) * psi.amps()[i];
    ++i;
  } while (counter.next());
  return contracted.squaredNorm();
}

}  // namespace detail

/// Nearest-codeword decoding of an already decrypted state: y_j = 1 only
/// when out_j is closer to -alpha than to alpha by more than the tie
/// margin. Fock states compare the magnitudes of the single-mode overlaps
/// with |alpha> and |-alpha>.
inline BitString decode(const CipherText& plain, Complex alpha) {
  if (is_degenerate_code(alpha)) throw UndecodableError("decode: alpha = 0, codewords coincide");
  std::vector<std::uint8_t> bits;
  if (plain.repr() == Representation::kAmplitude) {
    for (const auto& out : plain.amplitudes().amps()) {
      const double margin = kDecodeTieTolerance * std::abs(alpha);
      bits.push_back(std::abs(out + alpha) < std::abs(out - alpha) - margin ? 1 : 0);
    }
    return BitString(std::move(bits));
  }
  const auto& psi = plain.fock_state();
  for (int mode = 0; mode < psi.modes(); ++mode) {
    const double zero = std::sqrt(detail::reduced_overlap(psi, mode, alpha));
    const double one = std::sqrt(detail::reduced_overlap(psi, mode, -alpha));
    if (zero < kUndecodableOverlap && one < kUndecodableOverlap) {
      throw UndecodableError("decode: mode " + std::to_string(mode) + " overlaps neither codeword");
    }
    bits.push_back(zero < one - kDecodeTieTolerance ? 1 : 0);
  }
  return BitString(std::move(bits));
}

struct DecryptionResult {
  BitString bits;
  int phase_rotations = 0;
  int decode_decisions = 0;
};

inline DecryptionResult client_decrypt_decode(const CipherText& ct, const PhaseKey& key, Complex alpha) {
  auto dec = client_decrypt(ct, key);
  BitString bits = decode(dec.state, alpha);
  return {bits, dec.phase_rotations, bits.size()};
}

// ---------------------------------------------------------------------------
// End-to-end session

inline constexpr double kLinearCorrectnessTolerance = 1e-12;
inline constexpr double kNonlinearFidelityTolerance = 1e-8;

struct ProtocolTranscript {
  BitString input;
  Complex alpha;
  std::uint64_t seed = 0;
  PhaseKey key;
  CipherText sent;
  CircuitDescription circuit;
  CipherText returned;
  DecryptionResult decryption;
  BitString reference;  // decode of the circuit run on the plaintext codeword
  bool correct = false;
  std::string check;    // "amplitude" or "fock"
  double deviation = 0.0;
  std::optional<double> cat_fidelity;

  bool trivial_key_space() const { return key.d() == 1; }

  /// Line-delimited JSON, one record per line, fixed order.
  std::string to_jsonl() const {
    std::ostringstream out;
    {
      JsonWriter w;
      w.begin_object().key("type").value("session").key("m").value(input.size());
      w.key("x").value(input.to_string()).key("alpha").value(alpha);
      w.key("seed").value(static_cast<unsigned long long>(seed)).end_object();
      out << w.str() << '\n';
    }
    {
      JsonWriter w;
      w.begin_object().key("type").value("key").key("d").value(key.d()).key("k").value(key.k());
      w.key("theta").value(key.angle()).end_object();
      out << w.str() << '\n';
    }
    if (trivial_key_space()) {
      JsonWriter w;
      w.begin_object().key("type").value("warning").key("message").value("no security: trivial key space");
      w.end_object();
      out << w.str() << '\n';
    }
    const auto exchange = [&out](const char* direction, const std::string& message) {
      JsonWriter w;
      w.begin_object().key("type").value("exchange").key("direction").value(direction);
      w.key("message").raw(message).end_object();
      out << w.str() << '\n';
    };
    exchange("client_to_evaluator", to_json(sent));
    exchange("client_to_evaluator", to_json(circuit));
    exchange("evaluator_to_client", to_json(returned));
    {
      JsonWriter w;
      w.begin_object().key("type").value("decryption");
      w.key("phase_rotations").value(decryption.phase_rotations);
      w.key("decode_decisions").value(decryption.decode_decisions).end_object();
      out << w.str() << '\n';
    }
    {
      JsonWriter w;
      w.begin_object().key("type").value("output").key("y").value(decryption.bits.to_string());
      w.key("reference").value(reference.to_string()).end_object();
      out << w.str() << '\n';
    }
    if (cat_fidelity) {
      JsonWriter w;
      w.begin_object().key("type").value("cat_fidelity").key("value").value(*cat_fidelity).end_object();
      out << w.str() << '\n';
    }
    {
      JsonWriter w;
      w.begin_object().key("type").value("verdict").key("correct").value(correct);
      w.key("check").value(check).key("deviation").value(deviation).end_object();
      out << w.str() << '\n';
    }
    return out.str();
  }
};

namespace detail {

/// True for the single gate exp(-i (pi/2) n^2) on one mode.
inline bool is_cat_circuit(const CircuitDescription& circuit) {
  if (circuit.gates.size() != 1) return false;
  const auto* spec = std::get_if<NonlinearPhaseSpec>(&circuit.gates.front());
  if (!spec || spec->terms.size() != 1) return false;
  const auto& term = spec->terms.front();
  return term.exponents == std::vector<int>{2} &&
         std::abs(term.coupling * spec->time - std::numbers::pi / 2.0) < 1e-12;
}

}  // namespace detail

/// keygen -> encrypt -> evaluate -> decrypt/decode, checked against running
/// the same circuit on the unencrypted codeword.
inline ProtocolTranscript run_protocol(const BitString& x, Complex alpha, int d, const CircuitDescription& circuit,
                                       std::uint64_t seed, const EvaluatorOptions& options = {}) {
  const PhaseKey key = keygen(d, seed);
  CipherText sent = client_encrypt(x, alpha, key);
  CipherText returned = evaluator_apply(circuit, sent, options);
  const Decryption decrypted = client_decrypt(returned, key);
  BitString output = decode(decrypted.state, alpha);
  DecryptionResult result{output, decrypted.phase_rotations, output.size()};

  const CipherText plain_out = evaluator_apply(circuit, CipherText::amplitude(encode(x, alpha)), options);
  BitString reference = decode(plain_out, alpha);

  ProtocolTranscript t{x, alpha, seed, key, std::move(sent), circuit, std::move(returned),
                       std::move(result), std::move(reference), false, {}, 0.0, std::nullopt};
  if (decrypted.state.repr() == Representation::kAmplitude) {
    t.check = "amplitude";
    double dev = 0.0;
    for (int j = 0; j < x.size(); ++j) {
      dev = std::max(dev, std::abs(decrypted.state.amplitudes()[j] - plain_out.amplitudes()[j]));
    }
    t.deviation = dev;
    t.correct = dev <= kLinearCorrectnessTolerance && t.decryption.bits == t.reference;
  } else {
    t.check = "fock";
    const double fidelity = std::abs(overlap(decrypted.state.fock_state(), plain_out.fock_state()));
    t.deviation = 1.0 - fidelity;
    t.correct = fidelity >= 1.0 - kNonlinearFidelityTolerance && t.decryption.bits == t.reference;
    if (x.size() == 1 && detail::is_cat_circuit(circuit)) {
      const Complex codeword = x[0] ? -alpha : alpha;
      const auto& psi = decrypted.state.fock_state();
      t.cat_fidelity = std::abs(overlap(kerr_cat_target(codeword, psi.cutoff()), psi));
    }
  }
  return t;
}

}  // namespace cshe

#endif  // CSHE_PROTOCOL_HPP
