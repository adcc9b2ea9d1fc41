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

#ifndef QDB_BOUNDS_H_
#define QDB_BOUNDS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qdb {

// A probability carried by its natural logarithm so that values far below
// the double range (2^-1000 and smaller) stay finite.
struct LogProbability {
  double ln = 0.0;

  double value() const;
  double log2() const;
};

// Binary relative entropy D(u || v) in nats, with 0 ln 0 = 0. Requires
// u in [0, 1] and v in (0, 1); throws ArgumentError otherwise.
double KlBernoulli(double u, double v);

struct TailBoundQuery {
  int n = 1;
  int tau = 1;
  double p = 0.5;
};

// Pr[S >= tau] <= exp(-n D(tau/n || p)) for adaptively chosen indicators with
// conditional success at most p. Throws RegimeError unless n p < tau <= n.
LogProbability ChernoffUpper(const TailBoundQuery& query);

// Pr[S <= tau] <= exp(-n D(tau/n || p)) when the conditional success is at
// least p. Throws RegimeError unless 0 <= tau < n p.
LogProbability ChernoffLower(const TailBoundQuery& query);

enum class Tail { kUpper, kLower };

// sum_{k >= tau} (upper) or sum_{k <= tau} (lower) of C(n,k) p^k (1-p)^(n-k),
// accumulated in log space. Requires 1 <= n <= 10^4, 0 <= tau <= n,
// p in [0, 1].
LogProbability BinomialTailExact(int n, int tau, double p, Tail side);

// Honest per-round acceptance under i.i.d. depolarizing noise on both hops:
// 1 - eta + eta^2 / 2.
double HonestRoundProb(double eta);

struct SizingResult {
  int n_required = 0;
  int tau = 0;                     // ceil(u * n_required)
  LogProbability achieved_bound;   // exp(-n D(tau/n || p))
};

// Smallest n with exp(-n D(u || p)) <= 2^target_log2. Requires p < u <= 1,
// p in (0, 1) and target_log2 < 0. Throws RegimeError for u <= p.
SizingResult MinRounds(double u, double p, double target_log2);

// ceil(n (max(p_df, p_mf) + eps_prime)). Requires eps_prime > 0 and
// max(p_df, p_mf) + eps_prime < 1.
int ThresholdSize(int n, double p_df, double p_mf, double eps_prime);

// Largest depolarizing parameter (exclusive) keeping p(eta) > u:
// 1 - sqrt(2u - 1). Requires u in (1/2, 1).
double MaxNoise(double u);

// Per-round cheating figures used for the comparison table and curves.
inline constexpr double kHanckeKuhnRound = 0.75;
inline constexpr double kQdbDistanceFraudRound = 0.5;
inline constexpr double kQdbMafiaFraudRound = 0.875;
inline constexpr double kDefaultTargetLog2 = -80.0;

struct Table1Row {
  std::string metric;
  std::string hancke_kuhn;
  std::string qdb;
};

// Per-round DF/MF success and rounds needed for 2^-80 at tau = n, for the
// Hancke-Kuhn constant 3/4 and for this protocol.
std::vector<Table1Row> Table1();
// CSV with header "metric,hk_value,qdb_value".
std::string Table1Csv();

struct TradeoffRow {
  double u = 1.0;
  std::optional<int> n_df;  // empty when u <= 1/2
  std::optional<int> n_mf;  // empty when u <= 7/8
  std::optional<double> eta_max;  // empty when u <= 1/2; 0 at u = 1
};

// u in {0.880, 0.885, ..., 0.995} and 1.
std::vector<double> DefaultTradeoffGrid();
std::vector<TradeoffRow> TradeoffCurves(std::span<const double> u_grid,
                                        double target_log2 = kDefaultTargetLog2);
// CSV with header "u,n_df,n_mf,eta_max"; out-of-domain cells are empty.
std::string TradeoffCsv(std::span<const TradeoffRow> rows);

// printf "%.12g": 12 significant digits, trailing zeros dropped.
std::string FormatProbability(double p);
// Fixed four decimals.
std::string FormatLog2(double log2_value);

}  // namespace qdb

#endif  // QDB_BOUNDS_H_
