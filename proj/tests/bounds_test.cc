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

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "qdb/errors.h"

namespace qdb {
namespace {

constexpr double kTol = 1e-12;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(KlTest, KnownValues) {
  EXPECT_NEAR(KlBernoulli(0.5, 0.5), 0.0, kTol);
  EXPECT_NEAR(KlBernoulli(1.0, 0.5), std::numbers::ln2, kTol);
  EXPECT_NEAR(KlBernoulli(0.0, 0.25), -std::log(0.75), kTol);
  // 0.75 ln 1.5 + 0.25 ln 0.5
  EXPECT_NEAR(KlBernoulli(0.75, 0.5), 0.130812035941137, kTol);
  EXPECT_NEAR(KlBernoulli(0.75, 0.5), static_cast<double>(oracle::Kl(0.75L, 0.5L)), kTol);
}

TEST(KlTest, RejectsDegenerateReference) {
  EXPECT_THROW(KlBernoulli(0.5, 0.0), ArgumentError);
  EXPECT_THROW(KlBernoulli(0.5, 1.0), ArgumentError);
  EXPECT_THROW(KlBernoulli(1.5, 0.5), ArgumentError);
}

TEST(KlTest, PinskerLowerBoundOnGrid) {
  for (int i = 0; i <= 200; ++i) {
    for (int j = 1; j < 200; ++j) {
      const double u = i / 200.0;
      const double v = j / 200.0;
      EXPECT_GE(KlBernoulli(u, v), 2 * (u - v) * (u - v) - 1e-15) << u << " " << v;
    }
  }
}

TEST(ChernoffTest, StrictThresholdAnchors) {
  EXPECT_NEAR(ChernoffUpper({80, 80, 0.5}).log2(), -80.0, kTol);
  const double mf416 = ChernoffUpper({416, 416, 0.875}).log2();
  EXPECT_LE(mf416, -80.0);
  EXPECT_NEAR(mf416, -80.1403524240367, 1e-9);
  EXPECT_GT(ChernoffUpper({415, 415, 0.875}).log2(), -80.0);
}

TEST(ChernoffTest, LowerTailValues) {
  for (int n : {1, 10, 500}) {
    const double p = HonestRoundProb(0.1);
    EXPECT_NEAR(ChernoffLower({n, 0, p}).ln, n * std::log1p(-p), 1e-9);
  }
  EXPECT_NEAR(ChernoffLower({1000, 800, 0.905}).log2(), -72.4658825320810, 1e-9);
}

TEST(ChernoffTest, RegimeViolationsAreErrors) {
  EXPECT_THROW(ChernoffUpper({100, 50, 0.5}), RegimeError);
  EXPECT_THROW(ChernoffUpper({100, 10, 0.5}), RegimeError);
  EXPECT_THROW(ChernoffLower({100, 50, 0.5}), RegimeError);
  EXPECT_THROW(ChernoffLower({100, 90, 0.5}), RegimeError);
  EXPECT_THROW(ChernoffUpper({10, 11, 0.5}), ArgumentError);
  EXPECT_THROW(ChernoffUpper({10, 10, 1.0}), ArgumentError);
}

TEST(ChernoffTest, DominatesExactTailsOnSmallGrid) {
  for (double p : {0.5, 0.75, 0.875, 0.905}) {
    for (int n = 1; n <= 64; ++n) {
      for (int tau = 0; tau <= n; ++tau) {
        const long double upper = oracle::UpperTail(n, tau, p);
        const long double lower = oracle::LowerTail(n, tau, p);
        if (tau > n * p) {
          EXPECT_GE(ChernoffUpper({n, tau, p}).value() * (1 + kTol),
                    static_cast<double>(upper));
        }
        if (tau < n * p) {
          EXPECT_GE(ChernoffLower({n, tau, p}).value() * (1 + kTol),
                    static_cast<double>(lower));
        }
      }
    }
  }
}

TEST(BinomialTailTest, MatchesPascalOracle) {
  EXPECT_NEAR(BinomialTailExact(2, 1, 0.5, Tail::kUpper).value(), 0.75, kTol);
  EXPECT_NEAR(BinomialTailExact(7, 7, 0.3, Tail::kUpper).value(), std::pow(0.3, 7), kTol);
  EXPECT_NEAR(BinomialTailExact(80, 80, 0.5, Tail::kUpper).log2(),
              ChernoffUpper({80, 80, 0.5}).log2(), 1e-9);
  for (double p : {0.1, 0.5, 0.875}) {
    for (int n : {1, 5, 33, 64}) {
      for (int tau = 0; tau <= n; ++tau) {
        const double up = BinomialTailExact(n, tau, p, Tail::kUpper).value();
        const double lo = BinomialTailExact(n, tau, p, Tail::kLower).value();
        const double ref_up = static_cast<double>(oracle::UpperTail(n, tau, p));
        const double ref_lo = static_cast<double>(oracle::LowerTail(n, tau, p));
        EXPECT_NEAR(up, ref_up, 1e-12 + 1e-10 * ref_up);
        EXPECT_NEAR(lo, ref_lo, 1e-12 + 1e-10 * ref_lo);
      }
    }
  }
}

TEST(BinomialTailTest, TinyProbabilitiesStayFiniteInLogSpace) {
  const LogProbability tiny = BinomialTailExact(10000, 10000, 0.5, Tail::kUpper);
  EXPECT_NEAR(tiny.log2(), -10000.0, 1e-6);
  EXPECT_EQ(tiny.value(), 0.0);
  EXPECT_NEAR(ChernoffUpper({5000, 5000, 0.5}).log2(), -5000.0, 1e-6);
  EXPECT_EQ(BinomialTailExact(10, 0, 0.3, Tail::kUpper).ln, 0.0);
  EXPECT_THROW(BinomialTailExact(10001, 1, 0.5, Tail::kUpper), ArgumentError);
}

TEST(HonestRoundProbTest, Formula) {
  EXPECT_DOUBLE_EQ(HonestRoundProb(0.0), 1.0);
  EXPECT_DOUBLE_EQ(HonestRoundProb(1.0), 0.5);
  EXPECT_NEAR(HonestRoundProb(0.2), 0.82, kTol);
  EXPECT_NEAR(HonestRoundProb(0.1), 0.905, kTol);
  EXPECT_THROW(HonestRoundProb(-0.1), ArgumentError);
}

TEST(MinRoundsTest, StrictThresholdRows) {
  EXPECT_EQ(MinRounds(1.0, 0.5, -80).n_required, 80);
  EXPECT_EQ(MinRounds(1.0, 0.875, -80).n_required, 416);
  EXPECT_EQ(MinRounds(1.0, 0.75, -80).n_required, 193);
  EXPECT_EQ(MinRounds(1.0, 0.875, -80).tau, 416);
}

TEST(MinRoundsTest, MatchesLinearScanOracle) {
  // The real solution is 80 ln 2 / D(0.9 || 0.875) = 18244.11, so the
  // smallest integer is 18245.
  EXPECT_EQ(oracle::MinRoundsScan(0.9L, 0.875L, -80), 18245);
  EXPECT_EQ(MinRounds(0.9, 0.875, -80).n_required, 18245);
  for (double u : {0.88, 0.9, 0.93, 0.96, 0.99}) {
    for (double p : {0.5, 0.75, 0.875}) {
      for (double target : {-10.0, -40.0, -80.0}) {
        const SizingResult r = MinRounds(u, p, target);
        EXPECT_EQ(r.n_required, oracle::MinRoundsScan(u, p, target)) << u << " " << p;
        EXPECT_EQ(r.tau, static_cast<int>(std::ceil(u * r.n_required - 1e-9)));
        EXPECT_LE(-r.n_required * KlBernoulli(u, p), target * std::numbers::ln2);
        EXPECT_GT(-(r.n_required - 1) * KlBernoulli(u, p), target * std::numbers::ln2);
      }
    }
  }
}

TEST(MinRoundsTest, NonincreasingInU) {
  int previous = MinRounds(0.876, 0.875, -80).n_required;
  for (int k = 877; k <= 1000; ++k) {
    const int n = MinRounds(k / 1000.0, 0.875, -80).n_required;
    EXPECT_LE(n, previous);
    previous = n;
  }
}

TEST(MinRoundsTest, Errors) {
  EXPECT_THROW(MinRounds(0.875, 0.875, -80), RegimeError);
  EXPECT_THROW(MinRounds(0.5, 0.875, -80), RegimeError);
  EXPECT_THROW(MinRounds(1.0, 0.875, 0), ArgumentError);
  EXPECT_THROW(MinRounds(1.1, 0.875, -80), ArgumentError);
}

TEST(ThresholdSizeTest, CeilingFormula) {
  EXPECT_EQ(ThresholdSize(1000, 0.5, 0.875, 0.05), 925);
  EXPECT_EQ(ThresholdSize(100, 0.5, 0.5, 0.25), 75);
  EXPECT_EQ(ThresholdSize(7, 0.5, 0.875, 0.01), 7);
  EXPECT_EQ(ThresholdSize(1000, 0.5, 0.875, 0.0501), 926);
  const int tau = ThresholdSize(1000, 0.5, 0.875, 0.05);
  EXPECT_NO_THROW(ChernoffUpper({1000, tau, 0.875}));
  EXPECT_THROW(ThresholdSize(100, 0.5, 0.875, 0.0), ArgumentError);
  EXPECT_THROW(ThresholdSize(100, 0.5, 0.875, 0.2), ArgumentError);
}

TEST(MaxNoiseTest, ValuesAndCompletenessSanity) {
  EXPECT_NEAR(MaxNoise(0.875), 0.133974596215561, kTol);
  EXPECT_NEAR(MaxNoise(0.9), 0.105572809000084, kTol);
  EXPECT_GT(HonestRoundProb(0.1055), 0.9);
  EXPECT_LT(HonestRoundProb(0.1056), 0.9);
  EXPECT_NEAR(MaxNoise(1 - 1e-12), 0.0, 1e-6);
  for (double u : {0.6, 0.75, 0.9, 0.99}) {
    const double eta_max = MaxNoise(u);
    for (int k = 0; k < 100; ++k) EXPECT_GT(HonestRoundProb(eta_max * k / 100.0), u);
  }
  EXPECT_THROW(MaxNoise(0.5), ArgumentError);
  EXPECT_THROW(MaxNoise(1.0), ArgumentError);
}

TEST(Table1Test, MatchesGoldenFile) {
  EXPECT_EQ(Table1Csv(), ReadFile(std::string(QDB_GOLDEN_DIR) + "/table1.csv"));
  const std::vector<Table1Row> rows = Table1();
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2].qdb, "80");
  EXPECT_EQ(rows[3].qdb, "416");
  EXPECT_EQ(rows[2].hancke_kuhn, "193");
  EXPECT_EQ(rows[3].hancke_kuhn, "193");
}

TEST(TradeoffTest, MatchesGoldenFileAndOracle) {
  const std::vector<double> grid = DefaultTradeoffGrid();
  ASSERT_EQ(grid.size(), 25u);
  const std::vector<TradeoffRow> rows = TradeoffCurves(grid);
  EXPECT_EQ(TradeoffCsv(rows), ReadFile(std::string(QDB_GOLDEN_DIR) + "/tradeoff.csv"));
  for (const TradeoffRow& r : rows) {
    EXPECT_EQ(*r.n_df, oracle::MinRoundsScan(r.u, 0.5L, -80));
    EXPECT_EQ(*r.n_mf, oracle::MinRoundsScan(r.u, 0.875L, -80));
  }
  EXPECT_EQ(rows.back().n_df, 80);
  EXPECT_EQ(rows.back().n_mf, 416);
  EXPECT_EQ(rows.back().eta_max, 0.0);
  EXPECT_EQ(rows[4].n_mf, 18245);
  EXPECT_NEAR(*rows[4].eta_max, 0.10557, 1e-5);
}

TEST(TradeoffTest, EmptyCellsOutsideDomain) {
  const std::vector<double> grid{0.4, 0.7};
  const std::vector<TradeoffRow> rows = TradeoffCurves(grid);
  EXPECT_FALSE(rows[0].n_df.has_value());
  EXPECT_FALSE(rows[0].eta_max.has_value());
  EXPECT_TRUE(rows[1].n_df.has_value());
  EXPECT_FALSE(rows[1].n_mf.has_value());
  EXPECT_EQ(TradeoffCsv(rows), "u,n_df,n_mf,eta_max\n0.4,,,\n0.7," +
                                   std::to_string(*rows[1].n_df) + ",," +
                                   FormatProbability(*rows[1].eta_max) + "\n");
}

TEST(FormatTest, Probabilities) {
  EXPECT_EQ(FormatProbability(0.875), "0.875");
  EXPECT_EQ(FormatProbability(1.0), "1");
  EXPECT_EQ(FormatProbability(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(FormatProbability(std::pow(2.0, -80)), "8.27180612553e-25");
  EXPECT_EQ(FormatLog2(-80.14035242), "-80.1404");
}

}  // namespace
}  // namespace qdb
