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

#include "pcheck/checkers/verdict.hpp"
#include "pcheck/simnet/communicator.hpp"

namespace pcheck::check::detail {

// Smallest and largest local sort key; empty PEs have none.
struct KeyRange {
  bool empty = true;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  void include(std::uint64_t x) {
    if (empty) {
      lo = hi = x;
      empty = false;
    } else {
      lo = x < lo ? x : lo;
      hi = x > hi ? x : hi;
    }
  }
};

// Sends this PE's range start to its predecessor and compares the
// successor's start with this PE's end (hi <= lo', or hi < lo' when
// strict). Conclusive only if no PE is empty.
std::optional<VerdictDetail> neighbor_boundary(sim::Communicator& comm, const KeyRange& range, bool strict);

// Same comparison against the first non-empty later PE via a backward scan.
std::optional<VerdictDetail> suffix_boundary(sim::Communicator& comm, const KeyRange& range, bool strict);

}  // namespace pcheck::check::detail
