// Copyright 2026 The QDB Lab Authors
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

#ifndef QDB_PROTOCOL_H_
#define QDB_PROTOCOL_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdb/quantum.h"
#include "qdb/random.h"
#include "qdb/timing.h"

namespace qdb {

// One bit per element, each 0 or 1.
using BitString = std::vector<std::uint8_t>;

// Packs bits MSB-first into bytes (the last byte zero-padded) and renders
// them as lowercase hex.
std::string ToHex(const BitString& bits);
std::vector<std::uint8_t> PackBits(const BitString& bits);

struct SessionConfig {
  int lambda = 256;              // key length in bits
  int n = 64;                    // fast rounds
  int tau = 64;                  // acceptance threshold
  double bound_b = 300.0;        // metres
  double eta = 0.0;              // depolarizing parameter per hop
  double prover_distance = 150.0;  // metres from the verifier
  std::uint64_t seed = 1;
  // Gap between the end of the slow phase and the first challenge, seconds.
  double setup_gap = 1e-3;

  // Throws ArgumentError when an invariant does not hold.
  void Validate() const;
};

struct Key {
  BitString bits;
};

// Uniform lambda-bit key; consumes lambda draws. Requires lambda >= 128.
Key KeyGen(int lambda, RandomStream& rng);

// Uniform nonce of `n` bits; consumes n draws.
BitString DrawNonce(int n, RandomStream& rng);

struct RoundSecrets {
  std::vector<Basis> a;  // challenge bases
  std::vector<Basis> b;  // response bases
};

// Keyed PRF expansion a || b = f_x(N_v, N_p): HMAC-SHA256 in counter mode,
// bit 0 -> Z, 1 -> X. Throws ArgumentError unless both nonces have n bits.
RoundSecrets DeriveSecrets(const Key& key, const BitString& nonce_v,
                           const BitString& nonce_p, int n);

struct RoundRecord {
  int index = 0;
  Bit challenge_bit = 0;
  Basis challenge_basis = Basis::kZ;
  Basis response_basis = Basis::kZ;
  SimTime t_send;
  std::optional<SimTime> t_recv;        // empty when nothing came back
  std::optional<Bit> verifier_outcome;  // c''_i
  bool timely = false;
  bool value_ok = false;
  bool accepted = false;
};

enum class Decision : std::uint8_t { kReject = 0, kAccept = 1 };

struct Transcript {
  SessionConfig config;
  BitString nonce_v;
  BitString nonce_p;
  SimTime fast_phase_start;
  std::vector<RoundRecord> rounds;
  int accepted_count = 0;
  Decision decision = Decision::kReject;
};

// accept iff at least `tau` rounds were accepted.
Decision Decide(std::span<const RoundRecord> rounds, int tau);

// Throws InvariantViolation if per-round flags, S or the decision disagree.
void CheckTranscript(const Transcript& transcript);

// Stable schema "qdb.transcript/1"; see README for field names.
nlohmann::ordered_json TranscriptToJson(const Transcript& transcript);

// Everything a prover-side strategy may use when it deploys its parties.
// The key is handed over because the verifier's partner holds it; a strategy
// decides which of its own parties get to see it.
struct DeploymentContext {
  const SessionConfig& config;
  const Key& key;
  RandomStream prover_rng;
  RandomStream near_rng;
  RandomStream far_rng;
};

// Owns the parties a strategy places on the line.
struct Deployment {
  std::vector<std::unique_ptr<Party>> owned;
  std::vector<PartySlot> slots;

  template <typename T>
  T& Add(PartyId id, double distance, std::unique_ptr<T> party) {
    T& ref = *party;
    slots.push_back({id, Location{distance}, party.get()});
    owned.push_back(std::move(party));
    return ref;
  }
};

// The prover side of a session: honest prover, or an adversarial
// configuration of parties. The verifier talks only to Respondent(); the
// protocol places depolarizing noise on that link in both directions.
//
// Slow phase: the respondent receives the verifier nonce and must answer with
// a prover nonce. Before the fast phase it receives the public timetable.
// Fast phase: each round's challenge qubit arrives tagged with its index and
// any qubit the respondent sends back with that index is the response.
class ProverBehavior {
 public:
  virtual ~ProverBehavior() = default;
  virtual PartyId Respondent() const = 0;
  virtual void Deploy(DeploymentContext& context, Deployment& deployment) = 0;
};

struct SessionRun {
  Transcript transcript;
  MessageLog log;
};

// Runs slow, fast and decision phases on the event schedule. All randomness
// comes from config.seed: Split(0) key, Split(1) verifier, Split(2) prover,
// Split(3) near adversary, Split(4) far adversary.
Transcript RunSession(const SessionConfig& config, ProverBehavior& prover);
SessionRun RunSessionWithLog(const SessionConfig& config,
                             ProverBehavior& prover);
// Same, but with a given long-term key instead of one drawn from the seed.
SessionRun RunSessionWithKey(const SessionConfig& config, const Key& key,
                             ProverBehavior& prover);

// The key RunSession() draws for `config`.
Key SessionKey(const SessionConfig& config);

// Public fast-phase timetable as carried in the kTimetable payload.
struct Timetable {
  SimTime start;
  SimTime period;
  SimTime SendTime(int round) const { return start + static_cast<std::int64_t>(round) * period; }
};
Timetable DecodeTimetable(const ClassicalPayload& payload);

}  // namespace qdb

#endif  // QDB_PROTOCOL_H_
