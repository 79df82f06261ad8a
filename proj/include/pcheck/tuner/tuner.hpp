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
#include <vector>

namespace pcheck::tune {

inline constexpr unsigned kMaxLog2Rhat = 30;

struct TuneResult {
  std::uint32_t d = 0;
  std::uint64_t rhat = 0;
  unsigned iterations = 0;
  double achieved_delta = 1.0;
  std::uint64_t payload_bits = 0;

  unsigned log2_rhat() const;
  friend bool operator==(const TuneResult&, const TuneResult&) = default;
};

// (1/rhat + 1/d)^iterations. Throws ConfigError unless d >= 2, rhat >= d and
// iterations >= 1.
double achieved_delta(std::uint32_t d, std::uint64_t rhat, unsigned iterations);

// Smallest t with (1/rhat + 1/d)^t <= delta, found by stepping powers.
// Throws ConfigError unless 1/rhat + 1/d < 1 and delta > 0.
unsigned iterations_needed(std::uint32_t d, std::uint64_t rhat, double delta);

// d * ceil(log2(2 rhat)) * iterations.
std::uint64_t payload_bits(std::uint32_t d, std::uint64_t rhat, unsigned iterations);

// Best configuration within budget_bits reaching delta: fewest iterations,
// then smallest achieved delta, then smallest payload. rhat ranges over
// 2^1..2^30 and 2 <= d <= min(budget_bits, rhat). Returns nullopt when no
// configuration fits. Throws ConfigError unless budget_bits >= 8 and
// 0 < delta < 1.
std::optional<TuneResult> optimize(std::uint64_t budget_bits, double delta);

struct TableRow {
  std::uint64_t budget_bits;
  double delta;
  TuneResult printed;
};

// The sixteen published (b, delta) rows with their printed optima.
const std::vector<TableRow>& published_table();

}  // namespace pcheck::tune
