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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcheck/dataops/types.hpp"

namespace pcheck::faults {

enum class Kind : std::uint8_t {
  // sum aggregation
  kBitflip,
  kRandKey,
  kSwitchValues,
  kIncKey,
  kIncDec,     // values +1 on n elements, -1 on n others
  kIncDecKey,  // keys instead of values
  // permutation and sorting
  kIncrement,
  kRandomize,
  kReset,
  kSetEqual,
};

enum class Target : std::uint8_t { kInput, kOutput };

struct Manipulation {
  Kind kind = Kind::kBitflip;
  unsigned n = 1;  // IncDec and IncDecKey
  std::uint64_t seed = 0;
  Target target = Target::kInput;

  friend bool operator==(const Manipulation&, const Manipulation&) = default;
};

bool applies_to_sum(Kind kind);
bool applies_to_permutation(Kind kind);

// CLI names: bitflip, randkey, switchvalues, inckey, incdec<n>,
// incdeckey<n>, increment, randomize, reset, setequal.
std::string name(const Manipulation& m);
Manipulation parse_manipulation(std::string_view name, std::uint64_t seed = 0, Target target = Target::kInput);
const std::vector<std::string>& sum_manipulator_names();
const std::vector<std::string>& permutation_manipulator_names();

// Both return a copy of data that differs from it as a multiset. Targets are
// drawn from Rng(m.seed); draws that would leave the multiset unchanged are
// redrawn up to 100 times, after which ContractViolation is thrown. Bitflip
// acts on the 128-bit pair (key bits 0..63, value bits 64..127) or on the
// 64-bit word. Throws ConfigError for a kind of the other family.
std::vector<ops::KeyValue> apply_sum_manipulation(std::span<const ops::KeyValue> data, const Manipulation& m);
std::vector<std::uint64_t> apply_perm_manipulation(std::span<const std::uint64_t> data, const Manipulation& m);

// Same, treating the PE slices as one sequence in PE order. Slice sizes are
// preserved.
void apply_sum_manipulation(ops::Distributed<ops::KeyValue>& data, const Manipulation& m);
void apply_perm_manipulation(ops::Distributed<std::uint64_t>& data, const Manipulation& m);

}  // namespace pcheck::faults
