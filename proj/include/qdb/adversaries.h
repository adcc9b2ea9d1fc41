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

#ifndef QDB_ADVERSARIES_H_
#define QDB_ADVERSARIES_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "qdb/protocol.h"
#include "qdb/quantum.h"
#include "qdb/random.h"
#include "qdb/timing.h"

namespace qdb {

enum class Strategy : std::uint8_t {
  kHonest,
  kDistanceFraud,
  kMafiaFraud,
  kTerroristFraud,
  kTerroristReplay,
};

// CLI names: honest, df, mf, tf, tf-replay.
std::string_view StrategyName(Strategy strategy);
std::optional<Strategy> ParseStrategy(std::string_view name);
bool IsAdversarial(Strategy strategy);

// ---------------------------------------------------------------------------
// Per-round responses.

// Measure the challenge in `a`, re-encode the outcome in `b`. One draw.
QubitState HonestResponse(const QubitState& challenge, Basis a, Basis b,
                          RandomStream& rng);

// Density-matrix form of HonestResponse averaged over the measurement
// outcome: sum_r tr(Pi_{a,r} rho) |r>_b<r|.
QubitState HonestResponseChannel(const QubitState& challenge, Basis a, Basis b);

// Guess a bit and encode it in `b`, without looking at any challenge.
// One draw.
QubitState DfBlindResponse(Basis b, RandomStream& rng);

// Latest emission time from `distance` that still reaches the verifier by
// t_send + 2B/c, or nothing if that time lies before `earliest`.
std::optional<SimTime> DfEmitTime(SimTime t_send, double bound,
                                  double distance, SimTime earliest);

// Intermediate state cos(3pi/8)|0> + sin(3pi/8)|1> sent during pre-ask.
const QubitState& PreaskProbe();

// Honest-response mixtures of the probe conditioned on the parity
// k = a xor b, averaged over the two (a, b) pairs with that parity.
struct ParityMixtures {
  QubitState same_basis;       // k = 0
  QubitState different_basis;  // k = 1
};
const ParityMixtures& PreaskParityMixtures();

// Helstrom measurement between the two parity mixtures at equal priors;
// its `guess_one` projector is the k' = 1 outcome.
const HelstromResult& PreaskMeasurement();

// The prover as seen by A2: a port that answers one probe qubit.
using ProverPort = std::function<QubitState(const QubitState&)>;

// Sends the probe through `port` and measures the reply with
// PreaskMeasurement(). Consumes one draw from `rng` plus whatever the port
// consumes.
Bit MfPreask(const ProverPort& port, RandomStream& rng);

// Reflect the challenge for k' = 0, apply a Hadamard for k' = 1.
QubitState MfFastResponse(const QubitState& challenge, Bit k_prime);

// What the TF helper carries out of an assisted session.
struct HelperMemory {
  BitString nonce_v;
  BitString nonce_p;
  RoundSecrets leaked;  // (a, b) only; never the key
};

// a || b as sent over the P* -> helper link.
ClassicalPayload LeakSecrets(const RoundSecrets& secrets);
RoundSecrets DecodeLeak(const ClassicalPayload& payload);

// Closed-form per-round acceptance probability, averaged over the challenge
// bit and uniform bases. Throws RegimeError for eta > 0 with an adversarial
// strategy.
double ExactRoundSuccess(Strategy strategy, double eta);

// ---------------------------------------------------------------------------
// Prover-side behaviours.

// Honest prover at config.prover_distance.
class HonestProverBehavior : public ProverBehavior {
 public:
  PartyId Respondent() const override { return PartyId::kProver; }
  void Deploy(DeploymentContext& context, Deployment& deployment) override;
};

// Keyed prover beyond the bound that answers every round blind and early.
class DistanceFraudBehavior : public ProverBehavior {
 public:
  PartyId Respondent() const override { return PartyId::kProver; }
  void Deploy(DeploymentContext& context, Deployment& deployment) override;
};

// Keyless relays A1 (next to the verifier) and A2 (next to the honest prover
// at config.prover_distance) running the pre-ask attack.
class MafiaFraudBehavior : public ProverBehavior {
 public:
  PartyId Respondent() const override { return PartyId::kNearAdversary; }
  void Deploy(DeploymentContext& context, Deployment& deployment) override;
};

// Dishonest prover P* at config.prover_distance leaking (a, b) to a helper
// next to the verifier.
class TerroristFraudBehavior : public ProverBehavior {
 public:
  PartyId Respondent() const override { return PartyId::kNearAdversary; }
  void Deploy(DeploymentContext& context, Deployment& deployment) override;

  // Helper state after the session ran; empty if no leak arrived.
  std::optional<HelperMemory> helper_memory() const;

 private:
  std::shared_ptr<std::optional<HelperMemory>> memory_;
};

// The TF helper alone in a fresh session, holding only stale memory. It
// answers each challenge with a random bit encoded in its stale response
// basis, so its reply is independent of the fresh challenge.
class TerroristReplayBehavior : public ProverBehavior {
 public:
  explicit TerroristReplayBehavior(HelperMemory memory)
      : memory_(std::move(memory)) {}
  PartyId Respondent() const override { return PartyId::kNearAdversary; }
  void Deploy(DeploymentContext& context, Deployment& deployment) override;

 private:
  HelperMemory memory_;
};

// Runs one fresh session against the verifier holding `key`, with the helper
// acting alone from `memory`. `fresh` must carry a new seed so nonces and
// verifier randomness are resampled.
Transcript TfReplay(const HelperMemory& memory, const Key& key,
                    const SessionConfig& fresh);

// Behaviour for a strategy other than tf-replay.
std::unique_ptr<ProverBehavior> MakeBehavior(Strategy strategy);

}  // namespace qdb

#endif  // QDB_ADVERSARIES_H_
