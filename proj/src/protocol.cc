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

#include "qdb/protocol.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdb/errors.h"

namespace qdb {
namespace {

// Verifier side of one session.
class Verifier : public Party {
 public:
  Verifier(const SessionConfig& config, const Key& key, PartyId respondent,
           RandomStream rng)
      : config_(config), key_(key), respondent_(respondent), rng_(rng) {}

  void Start(Outbox& out) override {
    nonce_v_ = DrawNonce(config_.n, rng_);
    out.Send(respondent_, kNoRound,
             ClassicalPayload{PayloadKind::kVerifierNonce, nonce_v_, {}});
  }

  void Receive(Inbound& message, Outbox& out) override {
    switch (message.kind()) {
      case PayloadKind::kProverNonce:
        if (message.sender() == respondent_ && nonce_p_.empty()) {
          StartFastPhase(message.classical().bits, out);
        }
        break;
      case PayloadKind::kQubit:
        OnResponse(message, out);
        break;
      default:
        break;
    }
  }

  Transcript Finish() && {
    Transcript t;
    t.config = config_;
    t.nonce_v = std::move(nonce_v_);
    t.nonce_p = std::move(nonce_p_);
    t.fast_phase_start = timetable_.start;
    t.rounds = std::move(rounds_);
    const SimTime deadline = DeadlineTicks(config_.bound_b);
    for (RoundRecord& r : t.rounds) {
      r.timely = r.t_recv.has_value() && RoundTimely(r.t_send, *r.t_recv, deadline);
      r.value_ok = r.verifier_outcome.has_value() &&
                   *r.verifier_outcome == r.challenge_bit;
      r.accepted = r.timely && r.value_ok;
      if (r.accepted) ++t.accepted_count;
    }
    t.decision = Decide(t.rounds, config_.tau);
    return t;
  }

 private:
  void StartFastPhase(const BitString& nonce_p, Outbox& out) {
    if (nonce_p.size() != static_cast<std::size_t>(config_.n)) return;
    nonce_p_ = nonce_p;
    secrets_ = DeriveSecrets(key_, nonce_v_, nonce_p_, config_.n);

    const SimTime period =
        std::max(DeadlineTicks(config_.bound_b) + DeadlineTicks(config_.bound_b),
                 SimTime::FromTicks(1));
    timetable_ = {out.now() + SimTime::FromSeconds(config_.setup_gap), period};
    out.Send(respondent_, kNoRound,
             ClassicalPayload{PayloadKind::kTimetable,
                              {},
                              {timetable_.start.ticks(), timetable_.period.ticks()}});

    // Challenge bits are drawn up front, one per round, and only ever leave
    // the verifier encoded in the challenge qubit.
    rounds_.resize(config_.n);
    for (int i = 0; i < config_.n; ++i) {
      RoundRecord& r = rounds_[i];
      r.index = i;
      r.challenge_bit = rng_.NextBit();
      r.challenge_basis = secrets_.a[i];
      r.response_basis = secrets_.b[i];
      r.t_send = timetable_.SendTime(i);
    }
    for (const RoundRecord& r : rounds_) {
      out.SendAt(r.t_send, respondent_, r.index,
                 Bb84State(r.challenge_bit, r.challenge_basis));
    }
  }

  void OnResponse(Inbound& message, Outbox& out) {
    const int i = message.round();
    if (message.sender() != respondent_ || i < 0 ||
        i >= static_cast<int>(rounds_.size())) {
      return;
    }
    RoundRecord& r = rounds_[i];
    // The verifier listens for round i only after sending its challenge and
    // keeps the first response.
    if (r.t_recv.has_value() || out.now() < r.t_send) return;
    r.t_recv = out.now();
    r.verifier_outcome = SampleMeasure(message.qubit(), r.response_basis, rng_);
  }

  const SessionConfig& config_;
  const Key& key_;
  PartyId respondent_;
  RandomStream rng_;
  BitString nonce_v_;
  BitString nonce_p_;
  RoundSecrets secrets_;
  Timetable timetable_;
  std::vector<RoundRecord> rounds_;
};

const char* DecisionName(Decision d) {
  return d == Decision::kAccept ? "accept" : "reject";
}

}  // namespace

void SessionConfig::Validate() const {
  if (n < 1) throw ArgumentError("n must be at least 1");
  if (tau < 0 || tau > n) throw ArgumentError("tau must lie in [0, n]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [0, 1]");
  if (!(bound_b > 0.0) || !std::isfinite(bound_b)) {
    throw ArgumentError("bound B must be positive");
  }
  if (!(prover_distance >= 0.0) || !std::isfinite(prover_distance)) {
    throw ArgumentError("prover distance must be non-negative");
  }
  if (lambda < 128) throw ArgumentError("lambda must be at least 128");
  if (!(setup_gap >= 0.0) || !std::isfinite(setup_gap)) {
    throw ArgumentError("setup gap must be non-negative");
  }
}

Key KeyGen(int lambda, RandomStream& rng) {
  if (lambda < 128) {
    throw ArgumentError("key length lambda must be at least 128, got " +
                        std::to_string(lambda));
  }
  Key key;
  key.bits.reserve(lambda);
  for (int i = 0; i < lambda; ++i) key.bits.push_back(rng.NextBit());
  return key;
}

BitString DrawNonce(int n, RandomStream& rng) {
  BitString bits;
  bits.reserve(n);
  for (int i = 0; i < n; ++i) bits.push_back(rng.NextBit());
  return bits;
}

Decision Decide(std::span<const RoundRecord> rounds, int tau) {
  int accepted = 0;
  for (const RoundRecord& r : rounds) accepted += r.accepted ? 1 : 0;
  return accepted >= tau ? Decision::kAccept : Decision::kReject;
}

void CheckTranscript(const Transcript& t) {
  int accepted = 0;
  for (const RoundRecord& r : t.rounds) {
    if (r.accepted != (r.timely && r.value_ok)) {
      throw InvariantViolation("round " + std::to_string(r.index) +
                               ": accepted != timely && value_ok");
    }
    accepted += r.accepted ? 1 : 0;
  }
  if (accepted != t.accepted_count) {
    throw InvariantViolation("accepted_count does not match the rounds");
  }
  if ((t.decision == Decision::kAccept) != (accepted >= t.config.tau)) {
    throw InvariantViolation("decision does not match S >= tau");
  }
}

Timetable DecodeTimetable(const ClassicalPayload& payload) {
  if (payload.kind != PayloadKind::kTimetable || payload.words.size() != 2) {
    throw ArgumentError("malformed timetable payload");
  }
  return {SimTime::FromTicks(payload.words[0]), SimTime::FromTicks(payload.words[1])};
}

nlohmann::ordered_json TranscriptToJson(const Transcript& t) {
  using Json = nlohmann::ordered_json;
  Json config;
  config["lambda"] = t.config.lambda;
  config["n"] = t.config.n;
  config["tau"] = t.config.tau;
  config["bound_b"] = t.config.bound_b;
  config["eta"] = t.config.eta;
  config["prover_distance"] = t.config.prover_distance;
  config["seed"] = t.config.seed;
  config["setup_gap"] = t.config.setup_gap;

  Json rounds = Json::array();
  for (const RoundRecord& r : t.rounds) {
    Json jr;
    jr["index"] = r.index;
    jr["challenge_bit"] = r.challenge_bit;
    jr["challenge_basis"] = std::string(1, BasisName(r.challenge_basis));
    jr["response_basis"] = std::string(1, BasisName(r.response_basis));
    jr["t_send"] = r.t_send.seconds();
    jr["t_recv"] = r.t_recv ? Json(r.t_recv->seconds()) : Json(nullptr);
    jr["verifier_outcome"] =
        r.verifier_outcome ? Json(*r.verifier_outcome) : Json(nullptr);
    jr["timely"] = r.timely;
    jr["value_ok"] = r.value_ok;
    jr["accepted"] = r.accepted;
    rounds.push_back(std::move(jr));
  }

  Json out;
  out["schema"] = "qdb.transcript/1";
  out["config"] = std::move(config);
  out["nonces"] = {{"verifier", ToHex(t.nonce_v)}, {"prover", ToHex(t.nonce_p)}};
  out["fast_phase_start"] = t.fast_phase_start.seconds();
  out["rounds"] = std::move(rounds);
  out["accepted_count"] = t.accepted_count;
  out["decision"] = DecisionName(t.decision);
  return out;
}

Key SessionKey(const SessionConfig& config) {
  RandomStream key_rng = RandomStream(config.seed).Split(0);
  return KeyGen(config.lambda, key_rng);
}

SessionRun RunSessionWithLog(const SessionConfig& config,
                             ProverBehavior& prover) {
  config.Validate();
  return RunSessionWithKey(config, SessionKey(config), prover);
}

SessionRun RunSessionWithKey(const SessionConfig& config, const Key& key,
                             ProverBehavior& prover) {
  config.Validate();
  if (key.bits.size() != static_cast<std::size_t>(config.lambda)) {
    throw ArgumentError("key length does not match lambda");
  }
  const RandomStream root(config.seed);

  const PartyId respondent = prover.Respondent();
  Verifier verifier(config, key, respondent, root.Split(1));

  DeploymentContext context{config, key, root.Split(2), root.Split(3), root.Split(4)};
  Deployment deployment;
  deployment.slots.push_back({PartyId::kVerifier, Location{0.0}, &verifier});
  prover.Deploy(context, deployment);

  EventSchedule schedule;
  if (config.eta > 0.0) {
    const double eta = config.eta;
    auto noise = [eta](const QubitState& q) { return Depolarize(q, eta); };
    schedule.SetQubitChannel(PartyId::kVerifier, respondent, noise);
    schedule.SetQubitChannel(respondent, PartyId::kVerifier, noise);
  }
  RunSchedule(schedule, deployment.slots);

  SessionRun run{std::move(verifier).Finish(), schedule.TakeMessages()};
  CheckTranscript(run.transcript);
  return run;
}

Transcript RunSession(const SessionConfig& config, ProverBehavior& prover) {
  return RunSessionWithLog(config, prover).transcript;
}

}  // namespace qdb
