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

#include "qdb/harness.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "qdb/errors.h"
#include "qdb/random.h"

namespace qdb {
namespace {

struct Tally {
  std::int64_t session_accepts = 0;
  std::int64_t rounds = 0;
  std::int64_t round_accepts = 0;
};

Transcript RunTrial(const ExperimentSpec& spec, std::int64_t trial) {
  RandomStream stream =
      RandomStream(spec.session.seed).Split(static_cast<std::uint64_t>(trial));
  SessionConfig config = spec.session;
  config.seed = stream.NextU64();

  if (spec.attack != Strategy::kTerroristReplay) {
    std::unique_ptr<ProverBehavior> behavior = MakeBehavior(spec.attack);
    return RunSession(config, *behavior);
  }
  TerroristFraudBehavior assisted;
  RunSession(config, assisted);
  std::optional<HelperMemory> memory = assisted.helper_memory();
  if (!memory) throw InvariantViolation("terrorist helper never received the leak");
  SessionConfig fresh = config;
  fresh.seed = stream.NextU64();
  return TfReplay(*memory, SessionKey(config), fresh);
}

Tally RunRange(const ExperimentSpec& spec, std::int64_t begin, std::int64_t end) {
  Tally tally;
  for (std::int64_t trial = begin; trial < end; ++trial) {
    const Transcript transcript = RunTrial(spec, trial);
    CheckTranscript(transcript);
    tally.session_accepts += transcript.decision == Decision::kAccept;
    tally.rounds += static_cast<std::int64_t>(transcript.rounds.size());
    tally.round_accepts += transcript.accepted_count;
  }
  return tally;
}

std::optional<AnalyticalBound> BoundFor(const ExperimentSpec& spec, double oracle) {
  const SessionConfig& s = spec.session;
  if (!(oracle > 0.0 && oracle < 1.0)) return std::nullopt;
  const TailBoundQuery query{s.n, s.tau, oracle};
  if (IsAdversarial(spec.attack)) {
    if (s.tau > s.n * oracle) return AnalyticalBound{"false_accept", ChernoffUpper(query)};
  } else if (s.tau >= 1 && s.tau < s.n * oracle) {
    return AnalyticalBound{"honest_reject", ChernoffLower(query)};
  }
  return std::nullopt;
}

std::string_view FormatName(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "json";
}

}  // namespace

void ExperimentSpec::Validate() const {
  session.Validate();
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  if (threads < 1) throw ArgumentError("threads must be at least 1");
}

RateEstimate WilsonInterval(std::int64_t successes, std::int64_t total, double z) {
  if (total < 1) throw ArgumentError("Wilson interval needs at least one sample");
  if (successes < 0 || successes > total) {
    throw ArgumentError("successes must lie in [0, total]");
  }
  const double n = static_cast<double>(total);
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  RateEstimate estimate;
  estimate.successes = successes;
  estimate.total = total;
  estimate.rate = p;
  estimate.lower = std::clamp(centre - half, 0.0, p);
  estimate.upper = std::clamp(centre + half, p, 1.0);
  return estimate;
}

ExperimentStats MonteCarlo(const ExperimentSpec& spec) {
  spec.Validate();
  ExperimentStats stats;
  stats.spec = spec;
  // Throws RegimeError for adversaries on a noisy channel before any work.
  stats.exact_round_success = ExactRoundSuccess(spec.attack, spec.session.eta);
  stats.bound = BoundFor(spec, stats.exact_round_success);

  const std::int64_t workers =
      std::min<std::int64_t>(spec.threads, spec.trials);
  std::vector<Tally> tallies(workers);
  std::vector<std::exception_ptr> failures(workers);
  auto chunk_begin = [&](std::int64_t w) { return spec.trials * w / workers; };
  auto work = [&](std::int64_t w) {
    try {
      tallies[w] = RunRange(spec, chunk_begin(w), chunk_begin(w + 1));
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  Tally total;
  for (const Tally& t : tallies) {
    total.session_accepts += t.session_accepts;
    total.rounds += t.rounds;
    total.round_accepts += t.round_accepts;
  }
  stats.session_accept = WilsonInterval(total.session_accepts, spec.trials);
  stats.round_accept = WilsonInterval(total.round_accepts, total.rounds);

  const double p = stats.exact_round_success;
  const double deviation = std::abs(stats.round_accept.rate - p);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(total.rounds));
  if (sigma > 0) {
    stats.round_deviation_sigma = deviation / sigma;
  } else {
    stats.round_deviation_sigma =
        deviation == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return stats;
}

std::string StatsToCsv(const ExperimentStats& stats) {
  const ExperimentSpec& spec = stats.spec;
  const SessionConfig& s = spec.session;
  std::string out =
      "attack,n,tau,eta,bound_b,distance,trials,seed,session_accepts,"
      "session_rate,session_lo,session_hi,rounds,round_accepts,round_rate,"
      "round_lo,round_hi,exact_round_success,round_deviation_sigma,"
      "bound_kind,bound_value,bound_log2\n";
  const RateEstimate& sa = stats.session_accept;
  const RateEstimate& ra = stats.round_accept;
  out += fmt::format("{},{},{},{},{},{},{},{},", StrategyName(spec.attack), s.n, s.tau,
                     FormatProbability(s.eta), FormatProbability(s.bound_b),
                     FormatProbability(s.prover_distance), spec.trials, s.seed);
  out += fmt::format("{},{},{},{},", sa.successes, FormatProbability(sa.rate),
                     FormatProbability(sa.lower), FormatProbability(sa.upper));
  out += fmt::format("{},{},{},{},{},", ra.total, ra.successes,
                     FormatProbability(ra.rate), FormatProbability(ra.lower),
                     FormatProbability(ra.upper));
  out += fmt::format("{},{},", FormatProbability(stats.exact_round_success),
                     fmt::format("{:.4f}", stats.round_deviation_sigma));
  if (stats.bound) {
    out += fmt::format("{},{},{}\n", stats.bound->kind,
                       FormatProbability(stats.bound->value.value()),
                       FormatLog2(stats.bound->value.log2()));
  } else {
    out += ",,\n";
  }
  return out;
}

nlohmann::ordered_json StatsToJson(const ExperimentStats& stats) {
  const ExperimentSpec& spec = stats.spec;
  const SessionConfig& s = spec.session;
  auto rate = [](const RateEstimate& r) {
    return nlohmann::ordered_json{{"successes", r.successes}, {"total", r.total},
                                  {"rate", r.rate}, {"wilson95_lo", r.lower},
                                  {"wilson95_hi", r.upper}};
  };
  nlohmann::ordered_json j;
  j["schema"] = "qdb.experiment/1";
  j["attack"] = StrategyName(spec.attack);
  j["config"] = {{"lambda", s.lambda}, {"n", s.n}, {"tau", s.tau},
                 {"eta", s.eta}, {"bound_b", s.bound_b},
                 {"distance", s.prover_distance}, {"setup_gap", s.setup_gap}};
  j["seed"] = s.seed;
  j["trials"] = spec.trials;
  j["format"] = FormatName(spec.format);
  j["session_accept"] = rate(stats.session_accept);
  j["round_accept"] = rate(stats.round_accept);
  j["exact_round_success"] = stats.exact_round_success;
  if (std::isfinite(stats.round_deviation_sigma)) {
    j["round_deviation_sigma"] = stats.round_deviation_sigma;
  } else {
    j["round_deviation_sigma"] = nullptr;
  }
  if (stats.bound) {
    j["bound"] = {{"kind", stats.bound->kind},
                  {"value", stats.bound->value.value()},
                  {"log2", stats.bound->value.log2()}};
  } else {
    j["bound"] = nullptr;
  }
  return j;
}

}  // namespace qdb
