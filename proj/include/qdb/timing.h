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

#ifndef QDB_TIMING_H_
#define QDB_TIMING_H_

#include <cstdint>
#include <deque>
#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <queue>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qdb/quantum.h"

namespace qdb {

// Speed of light in vacuum, m/s (exact by definition of the metre).
inline constexpr double kSpeedOfLight = 299'792'458.0;

// Seconds a light-speed signal needs to cover `distance` metres. Throws
// ArgumentError for negative or non-finite distances.
double PropagationDelay(double distance);

// Round-trip deadline 2B/c. Throws ArgumentError unless bound > 0.
double Deadline(double bound);

// True iff t_recv - t_send <= Deadline(bound). Throws ArgumentError when
// t_recv < t_send.
bool RoundTimely(double t_send, double t_recv, double bound);

// Simulation clock in integer femtoseconds. Integer time makes round-trip
// arithmetic exact, so a prover sitting exactly at the bound meets the
// deadline with equality instead of by a rounding accident.
class SimTime {
 public:
  static constexpr double kTicksPerSecond = 1e15;

  constexpr SimTime() = default;
  static constexpr SimTime FromTicks(std::int64_t ticks) { return SimTime(ticks); }
  static SimTime FromSeconds(double seconds);

  constexpr std::int64_t ticks() const { return ticks_; }
  double seconds() const { return static_cast<double>(ticks_) / kTicksPerSecond; }

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime(a.ticks_ + b.ticks_); }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime(a.ticks_ - b.ticks_); }
  friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return SimTime(k * a.ticks_); }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;

 private:
  constexpr explicit SimTime(std::int64_t ticks) : ticks_(ticks) {}
  std::int64_t ticks_ = 0;
};

// Light-speed delay over `distance` metres, rounded to the nearest tick.
SimTime PropagationDelayTicks(double distance);
// Exactly 2 * PropagationDelayTicks(bound).
SimTime DeadlineTicks(double bound);
bool RoundTimely(SimTime t_send, SimTime t_recv, SimTime deadline);

// Parties live on a line; only their distance from the verifier matters.
struct Location {
  double distance_from_verifier = 0;
};

enum class PartyId : std::uint8_t {
  kVerifier = 0,
  kProver = 1,         // honest prover, or the dishonest prover P*
  kNearAdversary = 2,  // MF relay A1 / TF helper, next to the verifier
  kFarAdversary = 3,   // MF relay A2, next to the prover
};
inline constexpr int kPartyCount = 4;
std::string_view PartyName(PartyId id);

enum class PayloadKind : std::uint8_t {
  kVerifierNonce,
  kProverNonce,
  kTimetable,   // words = {fast-phase start, round period} in ticks
  kBasisLeak,   // bits = a || b
  kParityHint,  // bits = k'
  kQubit,
};
std::string_view PayloadKindName(PayloadKind kind);

struct ClassicalPayload {
  PayloadKind kind = PayloadKind::kVerifierNonce;
  std::vector<std::uint8_t> bits;
  std::vector<std::int64_t> words;
};

using Payload = std::variant<ClassicalPayload, QubitState>;

PayloadKind KindOf(const Payload& payload);

// Round index used for slow-phase and other round-less messages.
inline constexpr int kNoRound = -1;

struct TimedMessage {
  int round = kNoRound;
  PartyId sender = PartyId::kVerifier;
  PartyId receiver = PartyId::kVerifier;
  SimTime emit_time;
  SimTime arrival_time;
  Payload payload;
  // Set once the receiver has looked at a qubit payload.
  bool qubit_read = false;
};

// std::deque keeps references stable while parties send during delivery.
using MessageLog = std::deque<TimedMessage>;

// {"round", "sender", "receiver", "emit_time", "arrival_time", "payload_kind"}
// with times in seconds and round null for round-less messages.
nlohmann::ordered_json MessageToJson(const TimedMessage& message);

// Writes MessageToJson() of each message, one per line.
void WriteMessageLogJsonl(const MessageLog& log, std::ostream& out);

// What a party sees when a message arrives. Reading the qubit is tracked so
// tests can assert that a strategy never looked at a challenge.
class Inbound {
 public:
  explicit Inbound(TimedMessage& message) : message_(message) {}

  int round() const { return message_.round; }
  PartyId sender() const { return message_.sender; }
  SimTime arrival_time() const { return message_.arrival_time; }
  PayloadKind kind() const { return KindOf(message_.payload); }
  // Throws InvariantViolation if the payload is a qubit.
  const ClassicalPayload& classical() const;
  // Throws InvariantViolation if the payload is classical.
  const QubitState& qubit();

 private:
  TimedMessage& message_;
};

class EventSchedule;

// Send interface handed to a party for the duration of one reaction.
class Outbox {
 public:
  Outbox(EventSchedule& schedule, PartyId self, SimTime now)
      : schedule_(schedule), self_(self), now_(now) {}

  SimTime now() const { return now_; }
  PartyId self() const { return self_; }

  void Send(PartyId to, int round, Payload payload) {
    SendAt(now_, to, round, std::move(payload));
  }
  // Emits at `emit_time`; the content is fixed now. Throws CausalityError if
  // emit_time precedes the latest arrival this party has consumed.
  void SendAt(SimTime emit_time, PartyId to, int round, Payload payload);

 private:
  EventSchedule& schedule_;
  PartyId self_;
  SimTime now_;
};

// A reactive participant. Behaviours are invoked only with their causal past:
// Start() at time zero and Receive() at each arrival.
class Party {
 public:
  virtual ~Party() = default;
  virtual void Start(Outbox& out) { (void)out; }
  virtual void Receive(Inbound& message, Outbox& out) = 0;
};

struct PartySlot {
  PartyId id = PartyId::kVerifier;
  Location location;
  Party* behavior = nullptr;
};

using QubitChannel = std::function<QubitState(const QubitState&)>;

// Time-ordered queue of in-flight messages. Ties in arrival time are broken
// by send order.
class EventSchedule {
 public:
  EventSchedule() = default;

  // Applied to every qubit payload travelling from `from` to `to`.
  void SetQubitChannel(PartyId from, PartyId to, QubitChannel channel);

  SimTime now() const { return now_; }
  const MessageLog& messages() const { return messages_; }
  MessageLog TakeMessages() { return std::move(messages_); }

 private:
  friend class Outbox;
  friend const MessageLog& RunSchedule(EventSchedule& schedule,
                                       std::span<const PartySlot> parties);

  struct Pending {
    SimTime arrival;
    std::uint64_t sequence;
    bool operator>(const Pending& other) const {
      if (arrival != other.arrival) return arrival > other.arrival;
      return sequence > other.sequence;
    }
  };

  void Enqueue(PartyId from, SimTime emit_time, PartyId to, int round,
               Payload payload);

  std::array<std::optional<Location>, kPartyCount> locations_;
  std::array<QubitChannel, kPartyCount * kPartyCount> channels_;
  MessageLog messages_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending_;
  SimTime now_;
};

// Runs every party's Start(), then delivers messages in arrival order until
// the queue drains. Returns every message that was sent, in send order; the
// log is owned by `schedule`. Throws ArgumentError for duplicate parties or
// messages to an absent party, and CausalityError for emissions into a
// party's past.
const MessageLog& RunSchedule(EventSchedule& schedule,
                       std::span<const PartySlot> parties);

}  // namespace qdb

#endif  // QDB_TIMING_H_
