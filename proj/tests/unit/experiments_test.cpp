/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pcheck/common/error.hpp"
#include "pcheck/experiments/accuracy.hpp"
#include "pcheck/experiments/results.hpp"

namespace pcheck::exp {
namespace {

double sigma(double q, double trials) { return std::sqrt(q * (1 - q) / trials); }

TEST(Workload, UniformDegenerateRange) {
  EXPECT_EQ(gen_keys(uniform(0, 0, 3, 7), 1), (ops::Distributed<std::uint64_t>{{0, 0, 0}}));
  EXPECT_EQ(gen_keys(uniform(0, 0, 3, 7), 2), (ops::Distributed<std::uint64_t>{{0, 0}, {0}}));
  EXPECT_EQ(gen_keys(uniform(5, 5, 0, 7), 3), (ops::Distributed<std::uint64_t>(3)));
  EXPECT_EQ(gen_keys(power_law(0, 10, 7), 2), (ops::Distributed<std::uint64_t>(2)));
}

TEST(Workload, PowerLawRankOneFrequency) {
  constexpr std::uint64_t kN = 100'000;
  const auto keys = gen_keys(power_law(2, kN, 11), 1)[0];
  const auto ones = std::count(keys.begin(), keys.end(), 1u);
  EXPECT_NEAR(static_cast<double>(ones) / kN, 2.0 / 3.0, 4 * sigma(2.0 / 3.0, kN));
  EXPECT_EQ(std::count(keys.begin(), keys.end(), 2u), static_cast<std::ptrdiff_t>(kN) - ones);
}

TEST(Workload, PowerLawRankFrequencies) {
  constexpr std::uint64_t kN = 200'000;
  constexpr std::uint64_t kDistinct = 10;
  const auto keys = gen_keys(power_law(kDistinct, kN, 12), 1)[0];
  double h = 0;
  for (std::uint64_t k = 1; k <= kDistinct; ++k) h += 1.0 / static_cast<double>(k);
  for (std::uint64_t k = 1; k <= kDistinct; ++k) {
    const double f = 1.0 / (static_cast<double>(k) * h);
    EXPECT_NEAR(std::count(keys.begin(), keys.end(), k) / double(kN), f, 4 * sigma(f, kN)) << k;
  }
}

TEST(Workload, DeterministicAndBalanced) {
  const Workload w = power_law(1000, 1003, 5);
  EXPECT_EQ(gen_pairs(w, 4), gen_pairs(w, 4));
  EXPECT_NE(gen_pairs(w, 4), gen_pairs(power_law(1000, 1003, 6), 4));
  const auto d = gen_keys(w, 4);
  EXPECT_EQ(d[0].size(), 251u);
  EXPECT_EQ(d[3].size(), 250u);
  // The keys do not depend on the PE count: round-robin dealing.
  const auto flat = gen_keys(w, 1)[0];
  EXPECT_EQ(d[1][2], flat[9]);
  const auto pairs = gen_pairs(w, 4);
  for (const auto& kv : pairs[2]) {
    EXPECT_GE(kv.value, 0);
    EXPECT_LT(kv.value, std::int64_t{1} << 32);
  }
}

TEST(Workload, ParseKinds) {
  EXPECT_EQ(parse_workload_kind("powerlaw:1000", 5, 9), power_law(1000, 5, 9));
  EXPECT_EQ(parse_workload_kind("uniform:3:8", 5, 9), uniform(3, 8, 5, 9));
  EXPECT_EQ(describe(uniform(3, 8, 5, 9)), "uniform:3:8");
  for (const char* bad : {"", "powerlaw", "powerlaw:x", "uniform:3", "uniform:3:", "zipf:5"}) {
    EXPECT_THROW(parse_workload_kind(bad, 1, 1), ConfigError) << bad;
  }
  EXPECT_THROW(gen_keys(uniform(5, 4, 3, 1), 1), ConfigError);
}

TEST(Catalogue, NamesAndConfigs) {
  EXPECT_EQ(all_checkers().size(), 14u);
  for (CheckerId id : all_checkers()) {
    EXPECT_EQ(parse_checker(name(id)), id);
    EXPECT_NO_THROW(make_config(id, default_config(id), std::nullopt, 1)) << name(id);
  }
  EXPECT_THROW(parse_checker("max"), ConfigError);
  EXPECT_THROW(make_config(CheckerId::kPermPoly, "tab8", std::nullopt, 1), ConfigError);
  EXPECT_THROW(make_config(CheckerId::kSum, "tab8", std::nullopt, 1), ConfigError);
  const auto c = make_config(CheckerId::kSum, "4x4m3-crc", hashing::HashFamily::kTab64, 1);
  EXPECT_EQ(config_label(c), "4x4m3-tab64");
  EXPECT_EQ(config_label(make_config(CheckerId::kSort, "tab8", std::nullopt, 1)), "tab8");
  EXPECT_DOUBLE_EQ(failure_bound(make_config(CheckerId::kSort, "2xtab4", std::nullopt, 1)), 1.0 / 256);
  EXPECT_DOUBLE_EQ(failure_bound(make_config(CheckerId::kMin, "-", std::nullopt, 1)), 0.0);
}

TEST(Instances, RandomCorrectInstancesAccepted) {
  for (CheckerId id : all_checkers()) {
    for (int p : {1, 2, 4, 8}) {
      const sim::Cluster cluster({.pes = p});
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Instance inst = random_instance(id, seed * 131 + static_cast<std::uint64_t>(p), p, 300);
        solve(id, inst, cluster);
        const auto config = make_config(id, default_config(id), std::nullopt, seed);
        const CheckRun run = verify(id, inst, config, cluster);
        ASSERT_TRUE(run.verdict.accepted) << name(id) << " p=" << p << " seed=" << seed << " " << describe(run.verdict);
      }
    }
  }
}

AccuracySpec small_spec(CheckerId id, std::string config, std::string manipulator) {
  AccuracySpec s;
  s.checker = id;
  s.config = std::move(config);
  s.manipulator = std::move(manipulator);
  s.workload = power_law(1000, 2000, 0);
  s.pes = 4;
  s.trials = 40;
  s.refresh = 10;
  return s;
}

TEST(Accuracy, CorrectRunsNeverRejected) {
  for (CheckerId id : all_checkers()) {
    const ExperimentResult r = run_accuracy(small_spec(id, default_config(id), "none"));
    EXPECT_EQ(r.failures, 0u) << name(id);
    EXPECT_EQ(r.trials, 40u);
    EXPECT_EQ(r.manipulator, "none");
  }
}

TEST(Accuracy, IncompatiblePairsRejected) {
  EXPECT_THROW(run_accuracy(small_spec(CheckerId::kSum, "1x2-crc", "increment")), ConfigError);
  EXPECT_THROW(run_accuracy(small_spec(CheckerId::kPermHash, "tab8", "randkey")), ConfigError);
  EXPECT_THROW(run_accuracy(small_spec(CheckerId::kMin, "-", "bitflip")), ConfigError);
  EXPECT_THROW(run_accuracy(small_spec(CheckerId::kSum, "1x2-crc", "shuffle")), ConfigError);
}

TEST(Accuracy, SumRandKeyNearBound) {
  AccuracySpec s = small_spec(CheckerId::kSum, "1x2-tab", "randkey");
  s.trials = 4000;
  s.refresh = 500;
  const ExperimentResult r = run_accuracy(s);
  EXPECT_NEAR(r.observed_rate, r.expected_delta, 4 * sigma(r.expected_delta, 4000));
  ASSERT_TRUE(r.ratio.has_value());
  EXPECT_DOUBLE_EQ(*r.ratio, r.observed_rate / r.expected_delta);
  EXPECT_EQ(r.config, "1x2m31-tab");
}

TEST(Accuracy, PermIncrementNearBound) {
  AccuracySpec s = small_spec(CheckerId::kPermHash, "tab4", "increment");
  s.workload = uniform(0, 99'999'999, 2000, 0);
  s.trials = 4000;
  const ExperimentResult r = run_accuracy(s);
  EXPECT_DOUBLE_EQ(r.expected_delta, 1.0 / 16);
  EXPECT_NEAR(r.observed_rate, 1.0 / 16, 4 * sigma(1.0 / 16, 4000));
}

TEST(Accuracy, OutputTargetAndSortChecker) {
  AccuracySpec s = small_spec(CheckerId::kSort, "tab8", "setequal");
  s.workload = uniform(0, 1000, 500, 0);
  s.trials = 200;
  EXPECT_LE(run_accuracy(s).failures, 10u);
  s.target = faults::Target::kOutput;
  s.manipulator = "reset";
  EXPECT_LE(run_accuracy(s).failures, 10u);
  AccuracySpec sum = small_spec(CheckerId::kSum, "4x4m5-tab", "incdec1");
  sum.target = faults::Target::kOutput;
  sum.trials = 200;
  EXPECT_LE(run_accuracy(sum).failures, 5u);
}

TEST(Accuracy, Reproducible) {
  const AccuracySpec s = small_spec(CheckerId::kSum, "1x4-crc", "switchvalues");
  EXPECT_EQ(run_accuracy(s), run_accuracy(s));
  AccuracySpec other = s;
  other.seed = 2;
  EXPECT_EQ(run_accuracy(other).seed, 2u);
}

TEST(CostReport, SumAndPermIndependentOfN) {
  for (CheckerId id : {CheckerId::kSum, CheckerId::kPermHash}) {
    const auto rows = run_cost_report(id, default_config(id), {1000, 10000, 100000}, 8, power_law(100000, 0, 3));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(communication_independent_of_n(rows)) << name(id);
    EXPECT_GT(rows[0].bottleneck_bits, 0u);
  }
  const auto perm = run_cost_report(CheckerId::kPermHash, "3xtab12", {1000}, 8, uniform(0, 1000, 0, 3));
  // one all-reduce of 36 bits: PE 0 exchanges with 3 partners
  EXPECT_EQ(perm[0].bottleneck_bits, 3u * 36u);
  EXPECT_EQ(perm[0].rounds, 3u);
}

TEST(CostReport, MinGrowsLinearlyWithResultSize) {
  const auto rows = run_cost_report(CheckerId::kMin, "-", {100, 1000, 10000}, 8, uniform(0, 1u << 30, 0, 3));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].result_entries, 100u);
  const double slope1 = double(rows[1].bottleneck_bits - rows[0].bottleneck_bits) / double(rows[1].result_entries - rows[0].result_entries);
  const double slope2 = double(rows[2].bottleneck_bits - rows[1].bottleneck_bits) / double(rows[2].result_entries - rows[1].result_entries);
  EXPECT_DOUBLE_EQ(slope1, slope2);
  EXPECT_GT(slope1, 0);
  EXPECT_FALSE(communication_independent_of_n(rows));
}

template <class Row>
void expect_round_trip(const Table<Row>& table) {
  std::stringstream csv;
  write_csv(csv, table);
  EXPECT_EQ(read_csv<Row>(csv), table);
  EXPECT_EQ(from_json<Row>(nlohmann::json::parse(to_json(table).dump())), table);
}

TEST(Results, RoundTrip) {
  const RunHeader header{"pcheck accuracy --seed 7", 7, "mt19937_64"};
  ExperimentResult a;
  a.checker = "sum";
  a.config = "1x2m31-crc";
  a.manipulator = "incdec1";
  a.workload = "powerlaw:1000000";
  a.pes = 4;
  a.elements = 50000;
  a.trials = 3;
  a.failures = 1;
  a.observed_rate = 1.0 / 3.0;
  a.expected_delta = 0.50000000046566129;
  a.ratio = a.observed_rate / a.expected_delta;
  a.bottleneck_bits = 128;
  a.rounds = 4;
  a.messages = 6;
  a.seed = 7;
  ExperimentResult b = a;
  b.ratio.reset();
  b.expected_delta = 0;
  expect_round_trip(Table<ExperimentResult>{header, {a, b}});
  expect_round_trip(Table<CostRow>{header, {{"min", "-", 8, 1000, 17, 3456, 9999, 12, 40}}});
  expect_round_trip(Table<tune::TuneResult>{header, {*tune::optimize(1024, 1e-6), *tune::optimize(65536, 1e-40)}});
  expect_round_trip(Table<CostRow>{header, {}});

  std::stringstream bad("checker,config\nsum,x\n");
  EXPECT_THROW(read_csv<ExperimentResult>(bad), ConfigError);
  EXPECT_THROW(from_json<CostRow>(nlohmann::json{{"rows", 1}}), ConfigError);
}

}  // namespace
}  // namespace pcheck::exp
