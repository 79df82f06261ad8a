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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcheck/checkers/checkers.hpp"
#include "pcheck/experiments/workload.hpp"
#include "pcheck/hashing/hash_function.hpp"
#include "pcheck/simnet/cluster.hpp"

namespace pcheck::exp {

enum class CheckerId : std::uint8_t {
  kSum,
  kCount,
  kAverage,
  kMin,
  kMedian,
  kPermHash,
  kPermPoly,
  kSort,
  kZip,
  kUnion,
  kMerge,
  kGroupBy,
  kJoinHash,
  kJoinSortMerge,
};

const std::vector<CheckerId>& all_checkers();
std::string name(CheckerId id);
CheckerId parse_checker(const std::string& text);

using CheckerConfig = std::variant<std::monostate, check::SumCheckConfig, check::PermCheckConfig, check::PolyCheckConfig>;

// Grammar of the config text by checker: sum, count, average and median take
// the sum grammar ("4x4m3-tab"); perm-poly takes a failure probability
// ("1e-9"); min ignores it; the rest take the permutation grammar ("tab16").
// `family` overrides the hash family named in the text.
CheckerConfig make_config(CheckerId id, const std::string& text, std::optional<hashing::HashFamily> family,
                          std::uint64_t seed);
std::string default_config(CheckerId id);
std::string config_label(const CheckerConfig& config);
// Bound on the false-accept probability; 0 for deterministic checkers.
double failure_bound(const CheckerConfig& config);

// Inputs and correct outputs of one operation, sliced by PE.
struct Instance {
  ops::Distributed<ops::KeyValue> a, b;  // aggregation input, or R and S
  ops::Distributed<std::uint64_t> s1, s2;
  hashing::HashSpec grouping;            // GroupBy, Join and median placement

  ops::Distributed<ops::KeyValue> sums;
  ops::Distributed<ops::KeyCount> counts;
  ops::Distributed<ops::AverageEntry> averages;
  std::vector<ops::MinResult> minima;           // one replica per PE
  std::vector<ops::MedianAssertion> medians;    // one replica per PE
  ops::Distributed<std::uint64_t> out;
  ops::Distributed<check::U64Pair> zipped;
  ops::Distributed<ops::KeyValue> a_out, b_out;
};

// Inputs of `id` drawn from w: key-value pairs for aggregations and
// redistributions (S from a derived seed), words for sequence operations.
// Merge inputs are sorted first; zip's second sequence is dealt in reverse
// PE order.
Instance workload_instance(CheckerId id, const Workload& w, int p);

// Small adversarial instance: random size up to max_n, random key range
// with many ties, uneven distribution with empty PEs.
Instance random_instance(CheckerId id, std::uint64_t seed, int p, std::size_t max_n);

// Fills the outputs of `id` by running the reference operation.
void solve(CheckerId id, Instance& inst, const sim::Cluster& cluster);

struct CheckRun {
  check::Verdict verdict;
  sim::CostLedger ledger;
};

// Runs the checker in its own cluster run, so the ledger holds checker
// traffic only. For min the run starts with PE 0 broadcasting result and
// certificate, and every PE checks the copy it received.
CheckRun verify(CheckerId id, const Instance& inst, const CheckerConfig& config, const sim::Cluster& cluster);

}  // namespace pcheck::exp
