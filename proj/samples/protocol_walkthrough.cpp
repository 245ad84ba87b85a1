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

// Walks one message through the scheme: the client encrypts four bits with
// a secret phase, the evaluator runs a random interferometer on the
// ciphertext, and the client decrypts and decodes. Then prints how much the
// key-averaged ciphertexts of two messages differ compared to the bare
// codewords.

#include <cstdio>

#include "cshe/protocol.hpp"
#include "cshe/security.hpp"

int main() {
  const cshe::BitString x = cshe::BitString::parse("0110");
  const double alpha = 1.0;
  const int d = 100;

  const cshe::PhaseKey key = cshe::keygen(d, /*seed=*/2026);
  const cshe::CipherText sent = cshe::client_encrypt(x, alpha, key);

  cshe::CircuitDescription circuit;
  circuit.gates.emplace_back(cshe::haar_random_unitary(x.size(), 7));
  const cshe::CipherText returned = cshe::evaluator_apply(circuit, sent);

  const auto result = cshe::client_decrypt_decode(returned, key, alpha);
  const auto reference =
      cshe::decode(cshe::evaluator_apply(circuit, cshe::CipherText::amplitude(cshe::encode(x, alpha))), alpha);
  std::printf("input %s  output %s  plaintext run %s  (%d phase rotations)\n", x.to_string().c_str(),
              result.bits.to_string().c_str(), reference.to_string().c_str(), result.phase_rotations);

  std::printf("\n  w   D(encrypted)         D(bare)              R\n");
  for (int w = 1; w <= x.size(); ++w) {
    const auto r = cshe::suppression_ratio(cshe::SecurityParams::make(x.size(), d, alpha, w));
    std::printf("  %d   %.15f    %.15f    %.6f\n", w, r.encrypted, r.unencrypted, r.ratio.value_or(0.0));
  }
  return result.bits == reference ? 0 : 1;
}
