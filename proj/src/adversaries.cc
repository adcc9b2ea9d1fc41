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

#include "qdb/adversaries.h"

#include <array>
#include <cmath>
#include <numbers>

#include "qdb/errors.h"

namespace qdb {
namespace {

constexpr std::array<Basis, 2> kBases = {Basis::kZ, Basis::kX};

ClassicalPayload ProverNonce(BitString bits) {
  return ClassicalPayload{PayloadKind::kProverNonce, std::move(bits), {}};
}

// Prover that follows the protocol. Answers whoever sends it a verifier
// nonce, and every qubit that arrives afterwards.
class HonestProver : public Party {
 public:
  HonestProver(const SessionConfig& config, const Key& key, RandomStream rng)
      : config_(config), key_(key), rng_(rng) {}

  void Receive(Inbound& message, Outbox& out) override {
    if (message.kind() == PayloadKind::kVerifierNonce) {
      const BitString& nonce_v = message.classical().bits;
      if (secrets_ || nonce_v.size() != static_cast<std::size_t>(config_.n)) return;
      BitString nonce_p = DrawNonce(config_.n, rng_);
      secrets_ = DeriveSecrets(key_, nonce_v, nonce_p, config_.n);
      out.Send(message.sender(), kNoRound, ProverNonce(std::move(nonce_p)));
    } else if (message.kind() == PayloadKind::kQubit) {
      OnChallenge(message, out);
    }
  }

 private:
  void OnChallenge(Inbound& message, Outbox& out) {
    const int i = message.round();
    if (!secrets_ || i < 0 || i >= config_.n) return;
    out.Send(message.sender(), i,
             HonestResponse(message.qubit(), secrets_->a[i], secrets_->b[i], rng_));
  }

  const SessionConfig& config_;
  const Key& key_;
  RandomStream rng_;
  std::optional<RoundSecrets> secrets_;
};

// Keyed prover at distance d > B. It never looks at a challenge: as soon as
// the timetable is known it schedules, for every round, a blind response
// timed to arrive exactly at the deadline.
class DistanceFraudProver : public Party {
 public:
  DistanceFraudProver(const SessionConfig& config, const Key& key,
                      RandomStream rng)
      : config_(config), key_(key), rng_(rng) {}

  void Receive(Inbound& message, Outbox& out) override {
    switch (message.kind()) {
      case PayloadKind::kVerifierNonce: {
        if (secrets_) return;
        BitString nonce_p = DrawNonce(config_.n, rng_);
        secrets_ = DeriveSecrets(key_, message.classical().bits, nonce_p, config_.n);
        out.Send(message.sender(), kNoRound, ProverNonce(std::move(nonce_p)));
        break;
      }
      case PayloadKind::kTimetable:
        if (secrets_) ScheduleResponses(DecodeTimetable(message.classical()), out);
        break;
      default:
        // Challenges are ignored unread.
        break;
    }
  }

 private:
  void ScheduleResponses(const Timetable& timetable, Outbox& out) {
    for (int i = 0; i < config_.n; ++i) {
      const auto emit = DfEmitTime(timetable.SendTime(i), config_.bound_b,
                                   config_.prover_distance, out.now());
      if (!emit) continue;  // unanswerable in time
      out.SendAt(*emit, PartyId::kVerifier, i, DfBlindResponse(secrets_->b[i], rng_));
    }
  }

  const SessionConfig& config_;
  const Key& key_;
  RandomStream rng_;
  std::optional<RoundSecrets> secrets_;
};

// A1: relays the slow phase to A2 and answers challenges from the parity
// hints. Holds no key and never sees (a, b).
class MafiaNearRelay : public Party {
 public:
  explicit MafiaNearRelay(int n) : hints_(n, 0) {}

  void Receive(Inbound& message, Outbox& out) override {
    switch (message.kind()) {
      case PayloadKind::kVerifierNonce:
        out.Send(PartyId::kFarAdversary, kNoRound, message.classical());
        break;
      case PayloadKind::kProverNonce:
        if (message.sender() == PartyId::kFarAdversary) {
          out.Send(PartyId::kVerifier, kNoRound, message.classical());
        }
        break;
      case PayloadKind::kParityHint:
        if (message.classical().bits.size() == hints_.size()) {
          hints_ = message.classical().bits;
        }
        break;
      case PayloadKind::kQubit: {
        const int i = message.round();
        if (message.sender() != PartyId::kVerifier || i < 0 ||
            i >= static_cast<int>(hints_.size())) {
          return;
        }
        out.Send(PartyId::kVerifier, i, MfFastResponse(message.qubit(), hints_[i]));
        break;
      }
      default:
        break;
    }
  }

 private:
  BitString hints_;
};

// A2: relays the slow phase to the honest prover, then pre-asks every round
// with the probe state and forwards the parity guesses to A1.
class MafiaFarRelay : public Party {
 public:
  MafiaFarRelay(int n, RandomStream rng)
      : n_(n), rng_(rng), guesses_(n, 0), answered_(n, false) {}

  void Receive(Inbound& message, Outbox& out) override {
    switch (message.kind()) {
      case PayloadKind::kVerifierNonce:
        if (message.sender() == PartyId::kNearAdversary) {
          out.Send(PartyId::kProver, kNoRound, message.classical());
        }
        break;
      case PayloadKind::kProverNonce:
        if (message.sender() != PartyId::kProver) return;
        out.Send(PartyId::kNearAdversary, kNoRound, message.classical());
        for (int i = 0; i < n_; ++i) out.Send(PartyId::kProver, i, PreaskProbe());
        break;
      case PayloadKind::kQubit: {
        const int i = message.round();
        if (message.sender() != PartyId::kProver || i < 0 || i >= n_ || answered_[i]) {
          return;
        }
        guesses_[i] = SampleProjective(message.qubit(),
                                       PreaskMeasurement().guess_one, rng_);
        answered_[i] = true;
        if (++answered_count_ == n_) {
          out.Send(PartyId::kNearAdversary, kNoRound,
                   ClassicalPayload{PayloadKind::kParityHint, guesses_, {}});
        }
        break;
      }
      default:
        break;
    }
  }

 private:
  int n_;
  RandomStream rng_;
  BitString guesses_;
  std::vector<bool> answered_;
  int answered_count_ = 0;
};

// P*: holds the key, stays far away, leaks the session bases to the helper.
class TerroristProver : public Party {
 public:
  TerroristProver(const SessionConfig& config, const Key& key, RandomStream rng)
      : config_(config), key_(key), rng_(rng) {}

  void Receive(Inbound& message, Outbox& out) override {
    if (message.kind() != PayloadKind::kVerifierNonce || leaked_) return;
    BitString nonce_p = DrawNonce(config_.n, rng_);
    const RoundSecrets secrets =
        DeriveSecrets(key_, message.classical().bits, nonce_p, config_.n);
    out.Send(message.sender(), kNoRound, ProverNonce(std::move(nonce_p)));
    out.Send(message.sender(), kNoRound, LeakSecrets(secrets));
    leaked_ = true;
  }

 private:
  const SessionConfig& config_;
  const Key& key_;
  RandomStream rng_;
  bool leaked_ = false;
};

// Helper next to the verifier: relays the slow phase and answers challenges
// honestly with the leaked bases.
class TerroristHelper : public Party {
 public:
  TerroristHelper(int n, RandomStream rng,
                  std::shared_ptr<std::optional<HelperMemory>> memory)
      : n_(n), rng_(rng), memory_(std::move(memory)) {}

  void Receive(Inbound& message, Outbox& out) override {
    switch (message.kind()) {
      case PayloadKind::kVerifierNonce:
        nonce_v_ = message.classical().bits;
        out.Send(PartyId::kProver, kNoRound, message.classical());
        break;
      case PayloadKind::kProverNonce:
        nonce_p_ = message.classical().bits;
        out.Send(PartyId::kVerifier, kNoRound, message.classical());
        break;
      case PayloadKind::kBasisLeak: {
        RoundSecrets leaked = DecodeLeak(message.classical());
        if (static_cast<int>(leaked.a.size()) != n_) return;
        *memory_ = HelperMemory{nonce_v_, nonce_p_, std::move(leaked)};
        break;
      }
      case PayloadKind::kQubit: {
        const int i = message.round();
        if (!memory_->has_value() || message.sender() != PartyId::kVerifier ||
            i < 0 || i >= n_) {
          return;
        }
        const RoundSecrets& s = (*memory_)->leaked;
        out.Send(PartyId::kVerifier, i,
                 HonestResponse(message.qubit(), s.a[i], s.b[i], rng_));
        break;
      }
      default:
        break;
    }
  }

 private:
  int n_;
  RandomStream rng_;
  std::shared_ptr<std::optional<HelperMemory>> memory_;
  BitString nonce_v_;
  BitString nonce_p_;
};

// The helper on its own in a later session.
class ReplayHelper : public Party {
 public:
  ReplayHelper(int n, RandomStream rng, const HelperMemory& memory)
      : n_(n), rng_(rng), memory_(memory) {}

  void Receive(Inbound& message, Outbox& out) override {
    if (message.kind() == PayloadKind::kVerifierNonce) {
      out.Send(PartyId::kVerifier, kNoRound, ProverNonce(DrawNonce(n_, rng_)));
      return;
    }
    if (message.kind() != PayloadKind::kQubit) return;
    const int i = message.round();
    if (i < 0 || i >= n_) return;
    const std::vector<Basis>& stale_b = memory_.leaked.b;
    const Basis basis = stale_b.empty() ? Basis::kZ : stale_b[i % stale_b.size()];
    out.Send(PartyId::kVerifier, i, DfBlindResponse(basis, rng_));
  }

 private:
  int n_;
  RandomStream rng_;
  const HelperMemory& memory_;
};

// tr(Pi_{b,c} rho) averaged over c for a response produced by `respond`
// from the challenge |c>_a, and over uniform (a, b).
template <typename Respond>
double AverageAcceptance(Respond respond) {
  double total = 0.0;
  for (Basis a : kBases) {
    for (Basis b : kBases) {
      for (Bit c : {Bit{0}, Bit{1}}) {
        const QubitState response = respond(Bb84State(c, a), a, b);
        const MeasurementDistribution dist = MeasureDist(response, b);
        total += c == 0 ? dist.p0 : dist.p1;
      }
    }
  }
  return total / 8.0;
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kHonest: return "honest";
    case Strategy::kDistanceFraud: return "df";
    case Strategy::kMafiaFraud: return "mf";
    case Strategy::kTerroristFraud: return "tf";
    case Strategy::kTerroristReplay: return "tf-replay";
  }
  return "unknown";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kHonest, Strategy::kDistanceFraud,
                     Strategy::kMafiaFraud, Strategy::kTerroristFraud,
                     Strategy::kTerroristReplay}) {
    if (StrategyName(s) == name) return s;
  }
  return std::nullopt;
}

bool IsAdversarial(Strategy strategy) { return strategy != Strategy::kHonest; }

QubitState HonestResponse(const QubitState& challenge, Basis a, Basis b,
                          RandomStream& rng) {
  return Bb84State(SampleMeasure(challenge, a, rng), b);
}

QubitState HonestResponseChannel(const QubitState& challenge, Basis a, Basis b) {
  return Mix(Bb84State(0, b), Bb84State(1, b), MeasureDist(challenge, a).p0);
}

QubitState DfBlindResponse(Basis b, RandomStream& rng) {
  return Bb84State(rng.NextBit(), b);
}

std::optional<SimTime> DfEmitTime(SimTime t_send, double bound,
                                  double distance, SimTime earliest) {
  const SimTime emit =
      t_send + DeadlineTicks(bound) - PropagationDelayTicks(distance);
  if (emit < earliest) return std::nullopt;
  return emit;
}

const QubitState& PreaskProbe() {
  static const QubitState probe = QubitState::FromAmplitudes(
      std::cos(3.0 * std::numbers::pi / 8.0), std::sin(3.0 * std::numbers::pi / 8.0));
  return probe;
}

const ParityMixtures& PreaskParityMixtures() {
  static const ParityMixtures mixtures = [] {
    const QubitState& probe = PreaskProbe();
    auto response = [&](Basis a, Basis b) { return HonestResponseChannel(probe, a, b); };
    return ParityMixtures{
        Mix(response(Basis::kZ, Basis::kZ), response(Basis::kX, Basis::kX), 0.5),
        Mix(response(Basis::kZ, Basis::kX), response(Basis::kX, Basis::kZ), 0.5)};
  }();
  return mixtures;
}

const HelstromResult& PreaskMeasurement() {
  static const HelstromResult result =
      HelstromSuccess(PreaskParityMixtures().same_basis,
                      PreaskParityMixtures().different_basis, 0.5);
  return result;
}

Bit MfPreask(const ProverPort& port, RandomStream& rng) {
  return SampleProjective(port(PreaskProbe()), PreaskMeasurement().guess_one, rng);
}

QubitState MfFastResponse(const QubitState& challenge, Bit k_prime) {
  return k_prime ? Hadamard(challenge) : challenge;
}

ClassicalPayload LeakSecrets(const RoundSecrets& secrets) {
  ClassicalPayload payload{PayloadKind::kBasisLeak, {}, {}};
  payload.bits.reserve(secrets.a.size() + secrets.b.size());
  for (Basis a : secrets.a) payload.bits.push_back(BitFromBasis(a));
  for (Basis b : secrets.b) payload.bits.push_back(BitFromBasis(b));
  return payload;
}

RoundSecrets DecodeLeak(const ClassicalPayload& payload) {
  if (payload.kind != PayloadKind::kBasisLeak || payload.bits.size() % 2 != 0) {
    throw ArgumentError("malformed basis leak");
  }
  const std::size_t n = payload.bits.size() / 2;
  RoundSecrets s;
  for (std::size_t i = 0; i < n; ++i) {
    s.a.push_back(BasisFromBit(payload.bits[i]));
    s.b.push_back(BasisFromBit(payload.bits[n + i]));
  }
  return s;
}

double ExactRoundSuccess(Strategy strategy, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [0, 1]");
  if (IsAdversarial(strategy) && eta > 0.0) {
    throw RegimeError("adversarial strategies are analysed noiseless only");
  }
  switch (strategy) {
    case Strategy::kHonest:
    case Strategy::kTerroristFraud:
      return AverageAcceptance([eta](const QubitState& challenge, Basis a, Basis b) {
        return Depolarize(HonestResponseChannel(Depolarize(challenge, eta), a, b), eta);
      });
    case Strategy::kDistanceFraud:
    case Strategy::kTerroristReplay:
      // A uniformly guessed bit in some basis b', whatever b' is.
      return AverageAcceptance([](const QubitState&, Basis, Basis) {
        return Mix(Bb84State(0, Basis::kZ), Bb84State(1, Basis::kZ), 0.5);
      });
    case Strategy::kMafiaFraud: {
      const HelstromResult& m = PreaskMeasurement();
      return AverageAcceptance([&m](const QubitState& challenge, Basis a, Basis b) {
        const QubitState probe_reply = HonestResponseChannel(PreaskProbe(), a, b);
        const double p_one = (m.guess_one * probe_reply.rho()).trace().real();
        return Mix(MfFastResponse(challenge, 1), MfFastResponse(challenge, 0), p_one);
      });
    }
  }
  throw ArgumentError("unknown strategy");
}

void HonestProverBehavior::Deploy(DeploymentContext& context,
                                  Deployment& deployment) {
  deployment.Add(PartyId::kProver, context.config.prover_distance,
                 std::make_unique<HonestProver>(context.config, context.key,
                                                context.prover_rng));
}

void DistanceFraudBehavior::Deploy(DeploymentContext& context,
                                   Deployment& deployment) {
  deployment.Add(PartyId::kProver, context.config.prover_distance,
                 std::make_unique<DistanceFraudProver>(context.config, context.key,
                                                       context.prover_rng));
}

void MafiaFraudBehavior::Deploy(DeploymentContext& context,
                                Deployment& deployment) {
  const SessionConfig& config = context.config;
  deployment.Add(PartyId::kProver, config.prover_distance,
                 std::make_unique<HonestProver>(config, context.key, context.prover_rng));
  deployment.Add(PartyId::kNearAdversary, 0.0,
                 std::make_unique<MafiaNearRelay>(config.n));
  deployment.Add(PartyId::kFarAdversary, config.prover_distance,
                 std::make_unique<MafiaFarRelay>(config.n, context.far_rng));
}

void TerroristFraudBehavior::Deploy(DeploymentContext& context,
                                    Deployment& deployment) {
  const SessionConfig& config = context.config;
  memory_ = std::make_shared<std::optional<HelperMemory>>();
  deployment.Add(PartyId::kProver, config.prover_distance,
                 std::make_unique<TerroristProver>(config, context.key, context.prover_rng));
  deployment.Add(PartyId::kNearAdversary, 0.0,
                 std::make_unique<TerroristHelper>(config.n, context.near_rng, memory_));
}

std::optional<HelperMemory> TerroristFraudBehavior::helper_memory() const {
  if (!memory_) return std::nullopt;
  return *memory_;
}

void TerroristReplayBehavior::Deploy(DeploymentContext& context,
                                     Deployment& deployment) {
  deployment.Add(PartyId::kNearAdversary, 0.0,
                 std::make_unique<ReplayHelper>(context.config.n, context.near_rng,
                                                memory_));
}

Transcript TfReplay(const HelperMemory& memory, const Key& key,
                    const SessionConfig& fresh) {
  TerroristReplayBehavior replay(memory);
  return RunSessionWithKey(fresh, key, replay).transcript;
}

std::unique_ptr<ProverBehavior> MakeBehavior(Strategy strategy) {
  switch (strategy) {
    case Strategy::kHonest: return std::make_unique<HonestProverBehavior>();
    case Strategy::kDistanceFraud: return std::make_unique<DistanceFraudBehavior>();
    case Strategy::kMafiaFraud: return std::make_unique<MafiaFraudBehavior>();
    case Strategy::kTerroristFraud: return std::make_unique<TerroristFraudBehavior>();
    case Strategy::kTerroristReplay: break;
  }
  throw ArgumentError("tf-replay needs helper memory; use TfReplay()");
}

}  // namespace qdb
