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

#include "qdb/timing.h"

#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"
#include "qdb/errors.h"

namespace qdb {

double PropagationDelay(double distance) {
  if (!(distance >= 0.0) || !std::isfinite(distance)) {
    throw ArgumentError("distance must be finite and non-negative");
  }
  return distance / kSpeedOfLight;
}

double Deadline(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw ArgumentError("distance bound B must be finite and positive");
  }
  return 2.0 * bound / kSpeedOfLight;
}

bool RoundTimely(double t_send, double t_recv, double bound) {
  if (t_recv < t_send) {
    throw ArgumentError("response received before the challenge was sent");
  }
  return t_recv - t_send <= Deadline(bound);
}

SimTime SimTime::FromSeconds(double seconds) {
  const double ticks = std::round(seconds * kTicksPerSecond);
  if (!std::isfinite(ticks) || std::abs(ticks) > 9.0e18) {
    throw ArgumentError("time out of simulation clock range");
  }
  return SimTime(static_cast<std::int64_t>(ticks));
}

SimTime PropagationDelayTicks(double distance) {
  return SimTime::FromSeconds(PropagationDelay(distance));
}

SimTime DeadlineTicks(double bound) {
  Deadline(bound);  // domain check
  return 2 * PropagationDelayTicks(bound);
}

bool RoundTimely(SimTime t_send, SimTime t_recv, SimTime deadline) {
  if (t_recv < t_send) {
    throw ArgumentError("response received before the challenge was sent");
  }
  return t_recv - t_send <= deadline;
}

std::string_view PartyName(PartyId id) {
  switch (id) {
    case PartyId::kVerifier: return "verifier";
    case PartyId::kProver: return "prover";
    case PartyId::kNearAdversary: return "near_adversary";
    case PartyId::kFarAdversary: return "far_adversary";
  }
  return "unknown";
}

std::string_view PayloadKindName(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::kVerifierNonce: return "verifier_nonce";
    case PayloadKind::kProverNonce: return "prover_nonce";
    case PayloadKind::kTimetable: return "timetable";
    case PayloadKind::kBasisLeak: return "basis_leak";
    case PayloadKind::kParityHint: return "parity_hint";
    case PayloadKind::kQubit: return "qubit";
  }
  return "unknown";
}

PayloadKind KindOf(const Payload& payload) {
  if (const auto* c = std::get_if<ClassicalPayload>(&payload)) return c->kind;
  return PayloadKind::kQubit;
}

nlohmann::ordered_json MessageToJson(const TimedMessage& m) {
  nlohmann::ordered_json line;
  line["round"] = m.round == kNoRound ? nlohmann::ordered_json(nullptr)
                                      : nlohmann::ordered_json(m.round);
  line["sender"] = PartyName(m.sender);
  line["receiver"] = PartyName(m.receiver);
  line["emit_time"] = m.emit_time.seconds();
  line["arrival_time"] = m.arrival_time.seconds();
  line["payload_kind"] = PayloadKindName(KindOf(m.payload));
  return line;
}

void WriteMessageLogJsonl(const MessageLog& log, std::ostream& out) {
  for (const TimedMessage& m : log) out << MessageToJson(m).dump() << '\n';
}

const ClassicalPayload& Inbound::classical() const {
  const auto* c = std::get_if<ClassicalPayload>(&message_.payload);
  if (c == nullptr) throw InvariantViolation("payload is a qubit");
  return *c;
}

const QubitState& Inbound::qubit() {
  const auto* q = std::get_if<QubitState>(&message_.payload);
  if (q == nullptr) throw InvariantViolation("payload is classical");
  message_.qubit_read = true;
  return *q;
}

void Outbox::SendAt(SimTime emit_time, PartyId to, int round, Payload payload) {
  if (emit_time < now_) {
    throw CausalityError(std::string(PartyName(self_)) +
                         " tried to emit at " + std::to_string(emit_time.seconds()) +
                         " s, before its latest consumed arrival at " +
                         std::to_string(now_.seconds()) + " s");
  }
  schedule_.Enqueue(self_, emit_time, to, round, std::move(payload));
}

void EventSchedule::SetQubitChannel(PartyId from, PartyId to,
                                    QubitChannel channel) {
  channels_[static_cast<int>(from) * kPartyCount + static_cast<int>(to)] =
      std::move(channel);
}

void EventSchedule::Enqueue(PartyId from, SimTime emit_time, PartyId to,
                            int round, Payload payload) {
  const auto& from_loc = locations_[static_cast<int>(from)];
  const auto& to_loc = locations_[static_cast<int>(to)];
  if (!from_loc || !to_loc) {
    throw ArgumentError(std::string("message between absent parties ") +
                        std::string(PartyName(from)) + " -> " +
                        std::string(PartyName(to)));
  }
  const SimTime delay = PropagationDelayTicks(
      std::abs(from_loc->distance_from_verifier - to_loc->distance_from_verifier));
  TimedMessage& m = messages_.emplace_back();
  m.round = round;
  m.sender = from;
  m.receiver = to;
  m.emit_time = emit_time;
  m.arrival_time = emit_time + delay;
  m.payload = std::move(payload);
  pending_.push({m.arrival_time, messages_.size() - 1});
}

const MessageLog& RunSchedule(EventSchedule& schedule,
                              std::span<const PartySlot> parties) {
  std::array<Party*, kPartyCount> behaviors{};
  for (const PartySlot& slot : parties) {
    const int idx = static_cast<int>(slot.id);
    if (schedule.locations_[idx]) {
      throw ArgumentError("party placed twice: " + std::string(PartyName(slot.id)));
    }
    PropagationDelay(slot.location.distance_from_verifier);  // domain check
    schedule.locations_[idx] = slot.location;
    behaviors[idx] = slot.behavior;
  }

  for (const PartySlot& slot : parties) {
    if (slot.behavior == nullptr) continue;
    Outbox out(schedule, slot.id, schedule.now_);
    slot.behavior->Start(out);
  }

  while (!schedule.pending_.empty()) {
    const EventSchedule::Pending next = schedule.pending_.top();
    schedule.pending_.pop();
    TimedMessage& message = schedule.messages_[next.sequence];
    schedule.now_ = message.arrival_time;

    if (auto* qubit = std::get_if<QubitState>(&message.payload)) {
      const QubitChannel& channel =
          schedule.channels_[static_cast<int>(message.sender) * kPartyCount +
                             static_cast<int>(message.receiver)];
      if (channel) *qubit = channel(*qubit);
    }

    Party* receiver = behaviors[static_cast<int>(message.receiver)];
    if (receiver == nullptr) continue;
    Inbound in(message);
    Outbox out(schedule, message.receiver, schedule.now_);
    receiver->Receive(in, out);
  }
  return schedule.messages_;
}

}  // namespace qdb
