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

// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.h"
#include "qdb/adversaries.h"
#include "qdb/bounds.h"
#include "qdb/cli.h"
#include "qdb/harness.h"
#include "qdb/protocol.h"
#include "qdb/random.h"

namespace qdb {
namespace {

constexpr std::uint64_t kSeed = 1;
constexpr double kBound = 300.0;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void Check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back((ok ? "ok    " : "FAIL  ") + std::move(note));
  }
};

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Golden(const std::string& name) {
  return ReadFile(std::filesystem::path(QDB_GOLDEN_DIR) / name);
}

std::string CliOutput(std::vector<const char*> argv) {
  argv.insert(argv.begin(), "qdb");
  std::ostringstream out;
  std::ostringstream err;
  RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExperimentSpec Spec(Strategy attack, int n, int tau, std::int64_t trials, double eta = 0) {
  ExperimentSpec spec;
  spec.attack = attack;
  spec.session.n = n;
  spec.session.tau = tau;
  spec.session.eta = eta;
  spec.session.bound_b = kBound;
  spec.session.prover_distance = attack == Strategy::kHonest ? kBound / 2 : 1.5 * kBound;
  spec.session.seed = kSeed;
  spec.trials = trials;
  return spec;
}

Outcome Table1Golden() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const std::string golden = Golden("table1.csv");
  o.Check(!golden.empty() && Table1Csv() == golden, "Table1Csv() equals golden/table1.csv");
  o.Check(CliOutput({"table1"}) == golden, "`qdb table1` equals golden/table1.csv");
  const double t = Seconds(start);
  o.Check(t < 1.0, fmt::format("runtime {:.3f}s < 1s", t));
  return o;
}

Outcome PerRoundOracles() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  auto near = [&](double got, double want, const std::string& what) {
    o.Check(std::abs(got - want) <= 1e-12, fmt::format("{} = {:.15g} (want {:.15g})", what,
                                                       got, want));
  };
  near(ExactRoundSuccess(Strategy::kHonest, 0.0), 1.0, "honest eta=0");
  double worst = 0;
  for (int i = 0; i <= 100; ++i) {
    const double eta = i / 100.0;
    worst = std::max(worst, std::abs(ExactRoundSuccess(Strategy::kHonest, eta) -
                                     (1 - eta + eta * eta / 2)));
  }
  o.Check(worst <= 1e-12, fmt::format("honest on 101-point eta grid, max error {:.3g}", worst));
  near(ExactRoundSuccess(Strategy::kDistanceFraud, 0.0), 0.5, "df");
  near(ExactRoundSuccess(Strategy::kMafiaFraud, 0.0), 0.875, "mf");
  near(ExactRoundSuccess(Strategy::kTerroristFraud, 0.0), 1.0, "tf");
  near(ExactRoundSuccess(Strategy::kTerroristReplay, 0.0), 0.5, "tf-replay");
  near(PreaskMeasurement().success, 0.75, "mf parity extraction");
  const double t = Seconds(start);
  o.Check(t < 1.0, fmt::format("runtime {:.3f}s < 1s", t));
  return o;
}

Outcome MonteCarloConsistency() {
  Outcome o;
  struct Case {
    Strategy attack;
    double eta;
  };
  for (const Case& c : {Case{Strategy::kHonest, 0.0}, Case{Strategy::kHonest, 0.2},
                        Case{Strategy::kDistanceFraud, 0.0}, Case{Strategy::kMafiaFraud, 0.0},
                        Case{Strategy::kTerroristFraud, 0.0},
                        Case{Strategy::kTerroristReplay, 0.0}}) {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentStats s = MonteCarlo(Spec(c.attack, 1000, 0, 1000, c.eta));
    const double t = Seconds(start);
    const double p = s.exact_round_success;
    const double tol = 4 * std::sqrt(p * (1 - p) / static_cast<double>(s.round_accept.total));
    const double dev = std::abs(s.round_accept.rate - p);
    o.Check(s.round_accept.total == 1'000'000 && dev <= tol && t < 60.0,
            fmt::format("{:<9} eta={:<4} rounds={} rate={:.6f} oracle={:.6f} |d|={:.2e} "
                        "<= {:.2e}, {:.2f}s",
                        StrategyName(c.attack), c.eta, s.round_accept.total,
                        s.round_accept.rate, p, dev, tol, t));
  }
  return o;
}

Outcome ChernoffDominance() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  int checked = 0;
  int violations = 0;
  for (double p : {0.5, 0.75, 0.875, 0.905}) {
    for (int n = 1; n <= 64; ++n) {
      const std::vector<long double> row = oracle::BinomialRow(n, p);
      for (int tau = 0; tau <= n; ++tau) {
        long double upper = 0;
        long double lower = 0;
        for (int k = tau; k <= n; ++k) upper += row[k];
        for (int k = 0; k <= tau; ++k) lower += row[k];
        // Relative slack for the equality points tau = n and tau = 0.
        if (tau > n * p) {
          ++checked;
          violations += ChernoffUpper({n, tau, p}).value() * (1 + 1e-12) < upper;
        }
        if (tau < n * p) {
          ++checked;
          violations += ChernoffLower({n, tau, p}).value() * (1 + 1e-12) < lower;
        }
      }
    }
  }
  const double t = Seconds(start);
  o.Check(violations == 0, fmt::format("{} (n, tau, p) points, {} violations", checked,
                                       violations));
  o.Check(t < 10.0, fmt::format("runtime {:.3f}s < 10s", t));
  return o;
}

void CheckSessionRate(Outcome& o, const ExperimentStats& s, double expected,
                      const std::string& label) {
  const double sigma =
      std::sqrt(expected * (1 - expected) / static_cast<double>(s.session_accept.total));
  const double dev = std::abs(s.session_accept.rate - expected);
  o.Check(dev <= 4 * sigma,
          fmt::format("{}: {} / {} accepted, rate {:.6g}, expected {:.6g}, |d| = {:.2f} sigma",
                      label, s.session_accept.successes, s.session_accept.total,
                      s.session_accept.rate, expected, dev / sigma));
}

Outcome SmallSessionSoundness() {
  Outcome o;
  const ExperimentStats df = MonteCarlo(Spec(Strategy::kDistanceFraud, 10, 10, 1'000'000));
  CheckSessionRate(o, df, std::pow(0.5, 10), "df n=10 tau=10");
  const ExperimentStats mf = MonteCarlo(Spec(Strategy::kMafiaFraud, 16, 16, 1'000'000));
  CheckSessionRate(o, mf, std::pow(0.875, 16), "mf n=16 tau=16");
  return o;
}

Outcome CompletenessUnderNoise() {
  Outcome o;
  {
    const ExperimentStats s = MonteCarlo(Spec(Strategy::kHonest, 1000, 850, 100'000, 0.1));
    const double bound = ChernoffLower({1000, 850, HonestRoundProb(0.1)}).value();
    const double failure = 1 - s.session_accept.rate;
    o.Check(failure <= bound,
            fmt::format("eta=0.1 n=1000 tau=850: {} rejections in {}, rate {:.3g} <= bound "
                        "{:.4g}",
                        s.session_accept.total - s.session_accept.successes,
                        s.session_accept.total, failure, bound));
  }
  // eta = 0.05 is below MaxNoise(0.9) = 0.1056, so acceptance should climb
  // toward 1 as n grows at fixed u = 0.9.
  const double eta = 0.05;
  o.Check(eta < MaxNoise(0.9), fmt::format("eta {} < max_noise(0.9) = {:.6f}", eta,
                                           MaxNoise(0.9)));
  double previous = -1;
  for (int n : {50, 200, 800}) {
    const int tau = static_cast<int>(std::ceil(0.9 * n));
    const ExperimentStats s = MonteCarlo(Spec(Strategy::kHonest, n, tau, 10'000, eta));
    const double bound = ChernoffLower({n, tau, HonestRoundProb(eta)}).value();
    const double failure = 1 - s.session_accept.rate;
    const double slack = 4 * std::sqrt(bound * (1 - bound) / 10'000.0);
    o.Check(s.session_accept.rate >= previous && failure <= bound + slack,
            fmt::format("n={} tau={}: accept rate {:.5f} (previous {:.5f}), failure bound "
                        "{:.4g}",
                        n, tau, s.session_accept.rate, std::max(previous, 0.0), bound));
    previous = s.session_accept.rate;
  }
  return o;
}

Outcome CausalityProperties() {
  Outcome o;
  constexpr int kSessions = 100;
  constexpr int kRounds = 1000;
  long long table[2][2] = {{0, 0}, {0, 0}};
  long long timely = 0;
  long long ordered = 0;
  long long read = 0;
  const RandomStream seeds(kSeed);
  for (int session = 0; session < kSessions; ++session) {
    SessionConfig config;
    config.n = kRounds;
    config.tau = kRounds;
    config.bound_b = kBound;
    config.prover_distance = 1.5 * kBound;
    config.seed = seeds.Split(session).NextU64();
    DistanceFraudBehavior df;
    const SessionRun run = RunSessionWithLog(config, df);
    std::vector<SimTime> arrival(kRounds);
    std::vector<SimTime> emit(kRounds);
    for (const TimedMessage& m : run.log) {
      if (m.round == kNoRound) continue;
      if (m.sender == PartyId::kVerifier && m.receiver == PartyId::kProver) {
        arrival[m.round] = m.arrival_time;
        read += m.qubit_read;
      } else if (m.sender == PartyId::kProver && m.receiver == PartyId::kVerifier) {
        emit[m.round] = m.emit_time;
      }
    }
    for (const RoundRecord& r : run.transcript.rounds) {
      if (!r.timely) continue;
      ++timely;
      ordered += emit[r.index] < arrival[r.index];
      table[r.challenge_bit][*r.verifier_outcome] += 1;
    }
  }
  o.Check(timely == kSessions * kRounds && ordered == timely,
          fmt::format("{} rounds, {} timely, {} emitted before the challenge reached the "
                      "prover",
                      kSessions * kRounds, timely, ordered));
  o.Check(read == 0, fmt::format("challenge qubits read by the prover: {}", read));
  // 2x2 chi-square test of independence, one degree of freedom.
  const double total = static_cast<double>(timely);
  double chi2 = 0;
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 2; ++r) {
      const double expected = static_cast<double>(table[c][0] + table[c][1]) *
                              static_cast<double>(table[0][r] + table[1][r]) / total;
      chi2 += (table[c][r] - expected) * (table[c][r] - expected) / expected;
    }
  }
  const double p_value = std::erfc(std::sqrt(chi2 / 2));
  o.Check(p_value > 1e-3,
          fmt::format("chi2 = {:.4f} on [[{}, {}], [{}, {}]], p = {:.4f} > 1e-3", chi2,
                      table[0][0], table[0][1], table[1][0], table[1][1], p_value));
  return o;
}

Outcome TerroristPair() {
  Outcome o;
  const ExperimentStats tf = MonteCarlo(Spec(Strategy::kTerroristFraud, 80, 80, 10'000));
  o.Check(tf.session_accept.successes == tf.session_accept.total,
          fmt::format("tf n=80 tau=80: {} / {} accepted", tf.session_accept.successes,
                      tf.session_accept.total));
  const ExperimentStats replay =
      MonteCarlo(Spec(Strategy::kTerroristReplay, 20, 20, 100'000));
  o.Check(replay.session_accept.successes == 0,
          fmt::format("tf-replay n=20 tau=20: {} accepts in {} (expected {:.3f})",
                      replay.session_accept.successes, replay.session_accept.total,
                      100'000 * std::pow(0.5, 20)));
  return o;
}

Outcome TradeoffRegeneration() {
  Outcome o;
  const std::vector<TradeoffRow> rows = TradeoffCurves(DefaultTradeoffGrid());
  bool monotone = true;
  double eta_error = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TradeoffRow& r = rows[i];
    if (!r.n_df || !r.n_mf || !r.eta_max) {
      monotone = false;
      continue;
    }
    if (i > 0) {
      monotone = monotone && *r.n_df <= *rows[i - 1].n_df && *r.n_mf < *rows[i - 1].n_mf;
    }
    const double formula = r.u < 1 ? 1 - std::sqrt(2 * r.u - 1) : 0.0;
    eta_error = std::max(eta_error, std::abs(*r.eta_max - formula));
  }
  o.Check(monotone, fmt::format("{} rows, n_df nonincreasing, n_mf decreasing", rows.size()));
  const TradeoffRow& last = rows.back();
  o.Check(last.u == 1.0 && last.n_df == 80 && last.n_mf == 416 && last.eta_max == 0.0,
          fmt::format("u=1 row: n_df={} n_mf={} eta_max={}", last.n_df.value_or(-1),
                      last.n_mf.value_or(-1), last.eta_max.value_or(-1)));
  o.Check(eta_error <= 1e-12, fmt::format("max |eta_max - (1 - sqrt(2u - 1))| = {:.3g}",
                                          eta_error));
  o.Check(CliOutput({"tradeoff"}) == Golden("tradeoff.csv"),
          "`qdb tradeoff` equals golden/tradeoff.csv");
  return o;
}

}  // namespace
}  // namespace qdb

int main() {
  using qdb::Outcome;
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "table1 reproduction", qdb::Table1Golden},
      {2, "per-round oracles", qdb::PerRoundOracles},
      {3, "monte carlo vs oracle", qdb::MonteCarloConsistency},
      {4, "chernoff dominance", qdb::ChernoffDominance},
      {5, "small-n session soundness", qdb::SmallSessionSoundness},
      {6, "completeness under noise", qdb::CompletenessUnderNoise},
      {7, "causality and independence", qdb::CausalityProperties},
      {8, "terrorist fraud and replay", qdb::TerroristPair},
      {9, "tradeoff regeneration", qdb::TradeoffRegeneration},
  };
  int failures = 0;
  std::vector<std::string> summary;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.Check(false, std::string("exception: ") + e.what());
    }
    const double t = qdb::Seconds(start);
    fmt::print("criterion {} ({}):\n", c.number, c.name);
    for (const std::string& note : outcome.notes) fmt::print("    {}\n", note);
    summary.push_back(fmt::format("criterion {} {:<28} {}  ({:.2f}s)", c.number, c.name,
                                  outcome.pass ? "PASS" : "FAIL", t));
    fmt::print("{}\n", summary.back());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  fmt::print("\nsummary:\n");
  for (const std::string& line : summary) fmt::print("{}\n", line);
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
