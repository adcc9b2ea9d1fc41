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

#include "qdb/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "qdb/errors.h"

namespace qdb {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// u ln(u / v) with 0 ln 0 = 0.
double RelativeEntropyTerm(double u, double v) {
  return u == 0.0 ? 0.0 : u * std::log(u / v);
}

void CheckQuery(const TailBoundQuery& q) {
  if (q.n < 1) throw ArgumentError("n must be at least 1");
  if (q.tau < 0 || q.tau > q.n) throw ArgumentError("tau must lie in [0, n]");
  if (!(q.p > 0.0 && q.p < 1.0)) throw ArgumentError("p must lie in (0, 1)");
}

LogProbability ChernoffExponent(const TailBoundQuery& q) {
  const double u = static_cast<double>(q.tau) / q.n;
  return {-q.n * KlBernoulli(u, q.p)};
}

// Snaps x to the nearest integer when it is within floating-point noise of
// it, so that ceil(1000 * 0.925) is 925 and not 926.
double CeilTolerant(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return nearest;
  return std::ceil(x);
}

}  // namespace

double LogProbability::value() const { return std::exp(ln); }
double LogProbability::log2() const { return ln / kLn2; }

double KlBernoulli(double u, double v) {
  if (!(v > 0.0 && v < 1.0)) throw ArgumentError("KL reference v must lie in (0, 1)");
  if (!(u >= 0.0 && u <= 1.0)) throw ArgumentError("KL argument u must lie in [0, 1]");
  const double d = RelativeEntropyTerm(u, v) + RelativeEntropyTerm(1.0 - u, 1.0 - v);
  return std::max(d, 0.0);
}

LogProbability ChernoffUpper(const TailBoundQuery& q) {
  CheckQuery(q);
  if (!(q.tau > q.n * q.p)) {
    throw RegimeError(fmt::format(
        "upper-tail bound needs tau > n p (tau={}, n p={:.12g})", q.tau, q.n * q.p));
  }
  return ChernoffExponent(q);
}

LogProbability ChernoffLower(const TailBoundQuery& q) {
  CheckQuery(q);
  if (!(q.tau < q.n * q.p)) {
    throw RegimeError(fmt::format(
        "lower-tail bound needs tau < n p (tau={}, n p={:.12g})", q.tau, q.n * q.p));
  }
  return ChernoffExponent(q);
}

LogProbability BinomialTailExact(int n, int tau, double p, Tail side) {
  if (n < 1 || n > 10000) throw ArgumentError("exact binomial tail needs 1 <= n <= 10^4");
  if (tau < 0 || tau > n) throw ArgumentError("tau must lie in [0, n]");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p must lie in [0, 1]");

  const int lo = side == Tail::kUpper ? tau : 0;
  const int hi = side == Tail::kUpper ? n : tau;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);

  std::vector<double> terms;
  terms.reserve(hi - lo + 1);
  double peak = kNegInf;
  for (int k = lo; k <= hi; ++k) {
    double t = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    // 0 * log(0) contributes nothing.
    if (k > 0) t += k * log_p;
    if (n - k > 0) t += (n - k) * log_q;
    if (std::isnan(t)) t = kNegInf;
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  if (peak == kNegInf) return {kNegInf};
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return {std::min(peak + std::log(sum), 0.0)};
}

double HonestRoundProb(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [0, 1]");
  return 1.0 - eta + 0.5 * eta * eta;
}

SizingResult MinRounds(double u, double p, double target_log2) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("p must lie in (0, 1)");
  if (!(u <= 1.0)) throw ArgumentError("threshold ratio u must be at most 1");
  if (!(target_log2 < 0.0)) throw ArgumentError("target_log2 must be negative");
  if (!(u > p)) {
    throw RegimeError(fmt::format("sizing needs u > p (u={:.12g}, p={:.12g})", u, p));
  }

  SizingResult result;
  if (u == 1.0) {
    // exp(-n D(1 || p)) = p^n, so n = ceil(target / log2 p), checked in log2.
    const double per_round = std::log2(p);
    auto meets = [&](int n) { return n * per_round <= target_log2; };
    int n = static_cast<int>(std::ceil(target_log2 / per_round));
    while (n > 1 && meets(n - 1)) --n;
    while (!meets(n)) ++n;
    result.n_required = n;
    result.tau = n;
    result.achieved_bound = {n * per_round * kLn2};
    return result;
  }

  const double divergence = KlBernoulli(u, p);
  const double target_ln = target_log2 * kLn2;
  auto meets = [&](int n) { return -n * divergence <= target_ln; };
  const double estimate = std::ceil(-target_ln / divergence);
  if (!(estimate < std::numeric_limits<int>::max())) {
    throw RegimeError("required round count overflows");
  }
  int n = std::max(1, static_cast<int>(estimate));
  while (n > 1 && meets(n - 1)) --n;
  while (!meets(n)) ++n;
  result.n_required = n;
  result.tau = std::min(n, static_cast<int>(CeilTolerant(u * n)));
  result.achieved_bound = ChernoffExponent({n, result.tau, p});
  return result;
}

int ThresholdSize(int n, double p_df, double p_mf, double eps_prime) {
  if (n < 1) throw ArgumentError("n must be at least 1");
  if (!(eps_prime > 0.0)) throw ArgumentError("eps' must be positive");
  if (!(p_df >= 0.0 && p_df <= 1.0 && p_mf >= 0.0 && p_mf <= 1.0)) {
    throw ArgumentError("per-round bounds must lie in [0, 1]");
  }
  const double ratio = std::max(p_df, p_mf) + eps_prime;
  if (!(ratio < 1.0)) throw ArgumentError("max(p_df, p_mf) + eps' must be below 1");
  return std::min(n, static_cast<int>(CeilTolerant(n * ratio)));
}

double MaxNoise(double u) {
  if (!(u > 0.5 && u < 1.0)) throw ArgumentError("threshold ratio u must lie in (1/2, 1)");
  return 1.0 - std::sqrt(2.0 * u - 1.0);
}

std::string FormatProbability(double p) { return fmt::format("{:.12g}", p); }

std::string FormatLog2(double log2_value) { return fmt::format("{:.4f}", log2_value); }

std::vector<Table1Row> Table1() {
  auto rounds = [](double p) {
    return std::to_string(MinRounds(1.0, p, kDefaultTargetLog2).n_required);
  };
  return {
      {"per_round_df", FormatProbability(kHanckeKuhnRound),
       FormatProbability(kQdbDistanceFraudRound)},
      {"per_round_mf", FormatProbability(kHanckeKuhnRound),
       FormatProbability(kQdbMafiaFraudRound)},
      {"rounds_df_pfa_2^-80", rounds(kHanckeKuhnRound), rounds(kQdbDistanceFraudRound)},
      {"rounds_mf_pfa_2^-80", rounds(kHanckeKuhnRound), rounds(kQdbMafiaFraudRound)},
  };
}

std::string Table1Csv() {
  std::string out = "metric,hk_value,qdb_value\n";
  for (const Table1Row& row : Table1()) {
    out += fmt::format("{},{},{}\n", row.metric, row.hancke_kuhn, row.qdb);
  }
  return out;
}

std::vector<double> DefaultTradeoffGrid() {
  std::vector<double> grid;
  for (int milli = 880; milli <= 995; milli += 5) grid.push_back(milli / 1000.0);
  grid.push_back(1.0);
  return grid;
}

std::vector<TradeoffRow> TradeoffCurves(std::span<const double> u_grid,
                                        double target_log2) {
  std::vector<TradeoffRow> rows;
  rows.reserve(u_grid.size());
  for (double u : u_grid) {
    if (!(u > 0.0 && u <= 1.0)) throw ArgumentError("grid values must lie in (0, 1]");
    TradeoffRow row;
    row.u = u;
    if (u > kQdbDistanceFraudRound) {
      row.n_df = MinRounds(u, kQdbDistanceFraudRound, target_log2).n_required;
      row.eta_max = u == 1.0 ? 0.0 : MaxNoise(u);
    }
    if (u > kQdbMafiaFraudRound) {
      row.n_mf = MinRounds(u, kQdbMafiaFraudRound, target_log2).n_required;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string TradeoffCsv(std::span<const TradeoffRow> rows) {
  std::string out = "u,n_df,n_mf,eta_max\n";
  for (const TradeoffRow& row : rows) {
    out += fmt::format("{},{},{},{}\n", FormatProbability(row.u),
                       row.n_df ? std::to_string(*row.n_df) : "",
                       row.n_mf ? std::to_string(*row.n_mf) : "",
                       row.eta_max ? FormatProbability(*row.eta_max) : "");
  }
  return out;
}

}  // namespace qdb
