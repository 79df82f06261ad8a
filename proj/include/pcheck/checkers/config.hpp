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
#include <string_view>
#include <variant>
#include <vector>

#include "pcheck/hashing/hash_function.hpp"

namespace pcheck::check {

// Parameters of the sum-aggregation checker and everything built on it.
// Textual form `<its>x<d>m<log2 rhat>-<hash>`, e.g. `4x8m5-tab`; a missing
// `m` part means rhat = 2^31.
struct SumCheckConfig {
  unsigned iterations = 1;
  std::uint32_t d = 2;
  std::uint64_t rhat = std::uint64_t{1} << 31;
  hashing::HashSpec hash;
  std::uint64_t modulus_seed = 0;

  // Throws ConfigError unless iterations >= 1, 2 <= d <= rhat <= 2^62 and
  // d fits in one hash slice.
  void validate() const;
  // ceil(log2(2 rhat)): bits of one residue on the wire.
  unsigned residue_width() const;
  // iterations * d * residue_width().
  std::uint64_t payload_bits() const;
  // (1/rhat + 1/d)^iterations.
  double failure_bound() const;

  friend bool operator==(const SumCheckConfig&, const SumCheckConfig&) = default;
};

std::string to_string(const SumCheckConfig& config);
// Throws ConfigError on malformed text. Seeds are not part of the grammar.
SumCheckConfig parse_sum_config(std::string_view text, std::uint64_t hash_seed = 0,
                                std::uint64_t modulus_seed = 0);

// One modulus per iteration, uniform in (rhat, 2 rhat], drawn from
// mt19937_64(modulus_seed).
std::vector<std::uint64_t> draw_moduli(const SumCheckConfig& config);

// Hash-sum permutation checker with H = 2^bits. Textual form
// `[<its>x]<hash><bits>`, e.g. `crc12` or `2xtab8`.
struct PermCheckConfig {
  unsigned bits = 32;
  unsigned iterations = 1;
  hashing::HashSpec hash;

  void validate() const;
  // 2^(-bits * iterations).
  double failure_bound() const;

  friend bool operator==(const PermCheckConfig&, const PermCheckConfig&) = default;
};

std::string to_string(const PermCheckConfig& config);
PermCheckConfig parse_perm_config(std::string_view text, std::uint64_t hash_seed = 0);

// Polynomial permutation checker over F_r.
struct PolyCheckConfig {
  double delta = 1e-9;
  std::uint64_t seed = 0;  // drives PE 0's draw of z
  // Test hooks: fix the prime or the evaluation point.
  std::optional<std::uint64_t> prime_override;
  std::optional<std::uint64_t> z_override;

  void validate() const;
};

using PermutationCheck = std::variant<PermCheckConfig, PolyCheckConfig>;

}  // namespace pcheck::check
