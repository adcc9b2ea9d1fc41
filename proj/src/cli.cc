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

#include "qdb/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdb/adversaries.h"
#include "qdb/bounds.h"
#include "qdb/errors.h"
#include "qdb/harness.h"
#include "qdb/protocol.h"

namespace qdb {
namespace {

// Flags shared by `simulate` and `trace`.
struct SessionFlags {
  std::string attack = "honest";
  int n = 64;
  std::optional<int> tau;
  double eta = 0.0;
  double bound_b = 300.0;
  std::optional<double> distance;
  std::uint64_t seed = 1;
  int lambda = 256;
  std::string out;

  void Register(CLI::App& app) {
    app.add_option("--attack", attack, "honest, df, mf, tf or tf-replay")
        ->capture_default_str();
    app.add_option("--n", n, "fast rounds")->capture_default_str();
    app.add_option("--tau", tau, "acceptance threshold (default n)");
    app.add_option("--eta", eta, "depolarizing parameter per hop")->capture_default_str();
    app.add_option("--bound-b", bound_b, "distance bound B in metres")
        ->capture_default_str();
    app.add_option("--distance", distance,
                   "prover distance in metres (default B/2 honest, 1.5B otherwise)");
    app.add_option("--seed", seed, "root seed")->capture_default_str();
    app.add_option("--lambda", lambda, "key length in bits")->capture_default_str();
    app.add_option("--out", out, "output file (default stdout)");
  }

  Strategy Attack() const {
    std::optional<Strategy> parsed = ParseStrategy(attack);
    if (!parsed) throw ArgumentError("unknown attack '" + attack + "'");
    return *parsed;
  }

  SessionConfig Config() const {
    SessionConfig config;
    config.lambda = lambda;
    config.n = n;
    config.tau = tau.value_or(n);
    config.eta = eta;
    config.bound_b = bound_b;
    config.prover_distance = distance.value_or(
        Attack() == Strategy::kHonest ? bound_b / 2 : 1.5 * bound_b);
    config.seed = seed;
    config.Validate();
    return config;
  }
};

std::filesystem::path ResolveOutput(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv(kOutputDirEnv);
  if (p.is_relative() && dir != nullptr && *dir != '\0') return std::filesystem::path(dir) / p;
  return p;
}

void Emit(std::string content, const std::string& path, std::ostream& out) {
  if (content.empty() || content.back() != '\n') content.push_back('\n');
  if (path.empty()) {
    out << content;
    return;
  }
  const std::filesystem::path target = ResolveOutput(path);
  std::ofstream file(target, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + target.string());
  file << content;
  if (!file.flush()) throw std::runtime_error("cannot write " + target.string());
}

std::string RunSimulate(const SessionFlags& flags, std::int64_t trials,
                        const std::string& format, int threads) {
  ExperimentSpec spec;
  spec.attack = flags.Attack();
  spec.session = flags.Config();
  spec.trials = trials;
  spec.threads = threads;
  spec.output_path = flags.out;
  if (format == "csv") {
    spec.format = OutputFormat::kCsv;
  } else if (format == "json") {
    spec.format = OutputFormat::kJson;
  } else {
    throw ArgumentError("format must be csv or json");
  }
  const ExperimentStats stats = MonteCarlo(spec);
  return spec.format == OutputFormat::kCsv ? StatsToCsv(stats)
                                           : StatsToJson(stats).dump(2);
}

// tf-replay traces the fresh session; the assisted session that fills the
// helper memory runs first with the given seed.
std::string RunTrace(const SessionFlags& flags) {
  const Strategy strategy = flags.Attack();
  const SessionConfig config = flags.Config();
  SessionRun run;
  if (strategy == Strategy::kTerroristReplay) {
    TerroristFraudBehavior assisted;
    RunSession(config, assisted);
    std::optional<HelperMemory> memory = assisted.helper_memory();
    if (!memory) throw InvariantViolation("terrorist helper never received the leak");
    SessionConfig fresh = config;
    RandomStream stream(config.seed);
    fresh.seed = stream.NextU64();
    TerroristReplayBehavior replay(*memory);
    run = RunSessionWithKey(fresh, SessionKey(config), replay);
  } else {
    run = RunSessionWithLog(config, *MakeBehavior(strategy));
  }
  CheckTranscript(run.transcript);

  nlohmann::ordered_json j;
  j["schema"] = "qdb.trace/1";
  j["attack"] = StrategyName(strategy);
  j["transcript"] = TranscriptToJson(run.transcript);
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const TimedMessage& m : run.log) messages.push_back(MessageToJson(m));
  j["messages"] = std::move(messages);
  return j.dump(2);
}

std::string RunBounds(int n, int tau, double p, const std::string& side_name) {
  if (n < 1) throw ArgumentError("n must be at least 1");
  Tail side;
  if (side_name == "auto") {
    side = tau > n * p ? Tail::kUpper : Tail::kLower;
  } else if (side_name == "upper") {
    side = Tail::kUpper;
  } else if (side_name == "lower") {
    side = Tail::kLower;
  } else {
    throw ArgumentError("side must be upper, lower or auto");
  }
  const TailBoundQuery query{n, tau, p};
  const LogProbability bound =
      side == Tail::kUpper ? ChernoffUpper(query) : ChernoffLower(query);
  const double kl = KlBernoulli(static_cast<double>(tau) / n, p);

  std::string out = "n,tau,p,side,kl_nats,chernoff,chernoff_log2,exact,exact_log2\n";
  out += fmt::format("{},{},{},{},{},{},{},", n, tau, FormatProbability(p),
                     side == Tail::kUpper ? "upper" : "lower", FormatProbability(kl),
                     FormatProbability(bound.value()), FormatLog2(bound.log2()));
  if (n <= 10000) {
    const LogProbability exact = BinomialTailExact(n, tau, p, side);
    out += fmt::format("{},{}\n", FormatProbability(exact.value()),
                       FormatLog2(exact.log2()));
  } else {
    out += ",\n";
  }
  return out;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum distance-bounding lab", "qdb"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo over sessions");
  SessionFlags simulate_flags;
  simulate_flags.Register(*simulate);
  std::int64_t trials = 100;
  std::string format = "csv";
  int threads = 1;
  simulate->add_option("--trials", trials, "independent sessions")->capture_default_str();
  simulate->add_option("--format", format, "csv or json")->capture_default_str();
  simulate->add_option("--threads", threads, "worker threads")->capture_default_str();

  CLI::App* trace = app.add_subcommand("trace", "one session with its message log, as JSON");
  SessionFlags trace_flags;
  trace_flags.Register(*trace);

  CLI::App* bounds = app.add_subcommand("bounds", "KL and Chernoff tail bound");
  int bounds_n = 0;
  int bounds_tau = 0;
  double bounds_p = 0.0;
  std::string side = "auto";
  bounds->add_option("--n", bounds_n, "rounds")->required();
  bounds->add_option("--tau", bounds_tau, "threshold")->required();
  bounds->add_option("--p", bounds_p, "per-round probability")->required();
  bounds->add_option("--side", side, "upper, lower or auto")->capture_default_str();

  CLI::App* size = app.add_subcommand(
      "size", "rounds (--u --p), threshold (--n --p-df --p-mf --eps) or noise (--u)");
  std::optional<double> size_u;
  std::optional<double> size_p;
  double target_log2 = kDefaultTargetLog2;
  std::optional<int> size_n;
  double p_df = kQdbDistanceFraudRound;
  double p_mf = kQdbMafiaFraudRound;
  std::optional<double> eps;
  size->add_option("--u", size_u, "threshold ratio tau/n");
  size->add_option("--p", size_p, "per-round cheating bound");
  size->add_option("--target-log2", target_log2, "log2 of the target bound")
      ->capture_default_str();
  size->add_option("--n", size_n, "rounds, for the threshold");
  size->add_option("--p-df", p_df, "per-round DF bound")->capture_default_str();
  size->add_option("--p-mf", p_mf, "per-round MF bound")->capture_default_str();
  size->add_option("--eps", eps, "slack eps'");

  CLI::App* table1 = app.add_subcommand("table1", "comparison with Hancke-Kuhn, CSV");
  std::string table1_out;
  table1->add_option("--out", table1_out, "output file (default stdout)");

  CLI::App* tradeoff = app.add_subcommand("tradeoff", "rounds and noise tolerance vs u, CSV");
  std::vector<double> u_grid;
  std::string tradeoff_out;
  double tradeoff_target = kDefaultTargetLog2;
  tradeoff->add_option("--u-grid", u_grid, "comma-separated ratios")->delimiter(',');
  tradeoff->add_option("--target-log2", tradeoff_target, "log2 of the target bound")
      ->capture_default_str();
  tradeoff->add_option("--out", tradeoff_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) {
      Emit(RunSimulate(simulate_flags, trials, format, threads), simulate_flags.out, out);
    } else if (*trace) {
      Emit(RunTrace(trace_flags), trace_flags.out, out);
    } else if (*bounds) {
      Emit(RunBounds(bounds_n, bounds_tau, bounds_p, side), "", out);
    } else if (*size) {
      if (size_n) {
        if (!eps) throw ArgumentError("threshold sizing needs --eps");
        const int tau = ThresholdSize(*size_n, p_df, p_mf, *eps);
        Emit(fmt::format("n,p_df,p_mf,eps,tau\n{},{},{},{},{}\n", *size_n,
                         FormatProbability(p_df), FormatProbability(p_mf),
                         FormatProbability(*eps), tau),
             "", out);
      } else if (size_u && size_p) {
        const SizingResult r = MinRounds(*size_u, *size_p, target_log2);
        Emit(fmt::format("u,p,target_log2,n_required,tau,achieved_log2\n{},{},{},{},{},{}\n",
                         FormatProbability(*size_u), FormatProbability(*size_p),
                         FormatLog2(target_log2), r.n_required, r.tau,
                         FormatLog2(r.achieved_bound.log2())),
             "", out);
      } else if (size_u) {
        Emit(fmt::format("u,eta_max\n{},{}\n", FormatProbability(*size_u),
                         FormatProbability(MaxNoise(*size_u))),
             "", out);
      } else {
        throw ArgumentError("size needs --u, or --n with --eps");
      }
    } else if (*table1) {
      Emit(Table1Csv(), table1_out, out);
    } else if (*tradeoff) {
      const std::vector<double> grid = u_grid.empty() ? DefaultTradeoffGrid() : u_grid;
      Emit(TradeoffCsv(TradeoffCurves(grid, tradeoff_target)), tradeoff_out, out);
    }
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace qdb
