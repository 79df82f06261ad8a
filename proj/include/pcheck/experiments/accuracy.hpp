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
#include <vector>

#include "pcheck/experiments/instances.hpp"
#include "pcheck/faults/manipulation.hpp"

namespace pcheck::exp {

struct AccuracySpec {
  CheckerId checker = CheckerId::kSum;
  std::string config = "1x2-crc";
  std::optional<hashing::HashFamily> hash;
  std::string manipulator = "none";
  faults::Target target = faults::Target::kInput;
  Workload workload;
  int pes = 4;
  std::uint64_t trials = 20'000;
  std::uint64_t seed = 1;
  // A fresh workload (and correct output) every `refresh` trials.
  std::uint64_t refresh = 100;
};

struct ExperimentResult {
  std::string checker;
  std::string config;
  std::string manipulator;
  std::string workload;
  int pes = 0;
  std::uint64_t elements = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;  // accepted trials; with a manipulator these are false accepts
  double observed_rate = 0.0;
  double expected_delta = 0.0;
  std::optional<double> ratio;
  // Checker traffic of the first trial.
  std::uint64_t bottleneck_bits = 0;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

// Per trial: fresh checker seeds and manipulation seed derived from
// (seed, trial). With manipulator "none", correct outputs are checked and
// `failures` counts rejections instead. Manipulators of the sum family need
// checker sum; the permutation family needs perm, perm-poly or sort. Input
// manipulations corrupt the checker-visible input after the operation ran;
// for the permutation family the operation output is the per-PE sorted
// manipulated input (globally sorted for sort). Throws ConfigError for an
// incompatible pairing.
ExperimentResult run_accuracy(const AccuracySpec& spec);

struct CostRow {
  std::string checker;
  std::string config;
  int pes = 0;
  std::uint64_t elements = 0;
  std::uint64_t result_entries = 0;  // output size broadcast with the result (min: keys)
  std::uint64_t bottleneck_bits = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;

  friend bool operator==(const CostRow&, const CostRow&) = default;
};

// Checker-only ledger on a correct instance of each size.
std::vector<CostRow> run_cost_report(CheckerId checker, const std::string& config, const std::vector<std::uint64_t>& sizes,
                                     int pes, const Workload& base);

// True when all rows have identical traffic figures.
bool communication_independent_of_n(const std::vector<CostRow>& rows);

}  // namespace pcheck::exp
