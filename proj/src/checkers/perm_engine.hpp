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
#include <span>
#include <vector>

#include "pcheck/checkers/config.hpp"
#include "pcheck/checkers/verdict.hpp"
#include "pcheck/dataops/types.hpp"
#include "pcheck/hashing/slicing.hpp"
#include "wire.hpp"

namespace pcheck::check::detail {

// Hash-sum fingerprints lambda = sum h(e) - sum h(o) mod 2^bits for one or
// more (E, O) groups, one slot per (group, iteration). Iteration i uses
// bit slice i mod q of hash evaluation i / q, where q = width / bits.
class PermEngine {
 public:
  PermEngine(const PermCheckConfig& config, unsigned groups);

  void add_words(std::span<const std::uint64_t> items, unsigned group, bool output_side);
  void add_pairs(std::span<const ops::KeyValue> items, unsigned group, bool output_side);

  // Appends the lambda slots to a layout and their values to `values`.
  void append(SlotLayout& layout, std::vector<std::uint64_t>& values) const;
  // Inspects reduced lambda slots (in append order).
  std::optional<VerdictDetail> mismatch(std::span<const std::uint64_t> reduced) const;

 private:
  void accumulate(std::uint64_t h, unsigned evaluation, unsigned group, bool output_side) {
    std::uint64_t* lambda = &lambda_[group * config_.iterations];
    const unsigned first = evaluation * per_eval_;
    const unsigned last = std::min(config_.iterations, first + per_eval_);
    for (unsigned it = first; it < last; ++it) {
      const std::uint64_t slice = hashing::raw_slice(h, it - first, config_.bits);
      lambda[it] += output_side ? std::uint64_t{0} - slice : slice;
    }
  }

  PermCheckConfig config_;
  unsigned groups_;
  unsigned per_eval_;
  unsigned evaluations_;
  std::vector<std::uint64_t> lambda_;
};

}  // namespace pcheck::check::detail
