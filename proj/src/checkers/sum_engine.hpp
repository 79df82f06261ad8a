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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcheck/checkers/config.hpp"
#include "pcheck/checkers/minireduction.hpp"
#include "pcheck/checkers/verdict.hpp"
#include "pcheck/hashing/slicing.hpp"
#include "pcheck/simnet/communicator.hpp"

namespace pcheck::check::detail {

// All iterations of a sum-checker run, batched. Elements carry up to
// kMaxComponents values that share a bucket. Input-side values add,
// output-side values subtract; an accepted run has every table zero.
//
// Accumulators are raw 64-bit sums of magnitudes, split by sign, reduced
// mod r only when an addition would overflow.
class SumEngine {
 public:
  static constexpr unsigned kMaxComponents = 2;

  SumEngine(const SumCheckConfig& config, unsigned components, bool failure_slot);

  // extract(item, key, values) fills the key and `components` values.
  template <class Range, class Extract>
  void add_all(const Range& items, Extract&& extract, bool output_side) {
    std::uint64_t key = 0;
    std::array<std::int64_t, kMaxComponents> values{};
    if (hasher_.evaluations().size() == 1) {
      hasher_.evaluations().front().visit([&](auto eval) {
        for (const auto& item : items) {
          extract(item, key, values.data());
          const std::uint64_t h = eval(key);
          for (unsigned it = 0; it < iterations_; ++it) {
            accumulate(it, hashing::slice_bucket0(h, it, slice_bits_, d_), values.data(), output_side);
          }
        }
      });
      return;
    }
    for (const auto& item : items) {
      extract(item, key, values.data());
      for (unsigned it = 0; it < iterations_; ++it) accumulate(it, hasher_.bucket(key, it), values.data(), output_side);
    }
  }

  // One reduce to PE 0 (tables plus the optional failure word), then the
  // verdict is broadcast.
  Verdict finish(sim::Communicator& comm, const std::optional<VerdictDetail>& local);

 private:
  void accumulate(unsigned it, std::uint32_t bucket, const std::int64_t* values, bool output_side) {
    const std::size_t base = (static_cast<std::size_t>(it) * d_ + bucket) * components_;
    const std::uint64_t r = moduli_[it];
    for (unsigned c = 0; c < components_; ++c) {
      const std::int64_t v = values[c];
      const std::uint64_t mag = v < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
      std::uint64_t& slot = ((v < 0) != output_side) ? neg_[base + c] : pos_[base + c];
      std::uint64_t sum;
      if (__builtin_add_overflow(slot, mag, &sum)) sum = slot % r + mag % r;
      slot = sum;
    }
  }

  unsigned iterations_;
  std::uint32_t d_;
  unsigned components_;
  bool failure_slot_;
  unsigned width_;
  unsigned slice_bits_;
  std::vector<std::uint64_t> moduli_;
  BucketHasher hasher_;
  std::vector<std::uint64_t> pos_;
  std::vector<std::uint64_t> neg_;
};

}  // namespace pcheck::check::detail
