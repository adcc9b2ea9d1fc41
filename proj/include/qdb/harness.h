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

#ifndef QDB_HARNESS_H_
#define QDB_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "qdb/adversaries.h"
#include "qdb/bounds.h"
#include "qdb/protocol.h"

namespace qdb {

enum class OutputFormat { kCsv, kJson };

struct ExperimentSpec {
  SessionConfig session;
  Strategy attack = Strategy::kHonest;
  std::int64_t trials = 1;
  OutputFormat format = OutputFormat::kCsv;
  std::string output_path;  // empty: standard output
  int threads = 1;

  // Throws ArgumentError when an invariant does not hold.
  void Validate() const;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct RateEstimate {
  std::int64_t successes = 0;
  std::int64_t total = 0;
  double rate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Wilson score interval; total must be positive.
RateEstimate WilsonInterval(std::int64_t successes, std::int64_t total,
                            double z = kWilsonZ95);

struct AnalyticalBound {
  // "false_accept" (upper tail at the oracle rate) or "honest_reject"
  // (lower tail at p(eta)).
  std::string kind;
  LogProbability value;
};

struct ExperimentStats {
  ExperimentSpec spec;
  RateEstimate session_accept;
  RateEstimate round_accept;
  double exact_round_success = 0.0;
  // |round rate - oracle| in units of sqrt(oracle (1 - oracle) / rounds).
  double round_deviation_sigma = 0.0;
  std::optional<AnalyticalBound> bound;
};

// Runs spec.trials independent sessions. Trial t uses the seed
// RandomStream(seed).Split(t).NextU64(); tf-replay trials run a TF session
// and then a fresh replay session seeded by the next draw of the same
// stream. Results do not depend on the thread count.
ExperimentStats MonteCarlo(const ExperimentSpec& spec);

// Header plus one row.
std::string StatsToCsv(const ExperimentStats& stats);
// Schema "qdb.experiment/1".
nlohmann::ordered_json StatsToJson(const ExperimentStats& stats);

}  // namespace qdb

#endif  // QDB_HARNESS_H_
