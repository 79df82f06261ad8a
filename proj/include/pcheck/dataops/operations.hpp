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
#include <utility>
#include <vector>

#include "pcheck/dataops/types.hpp"
#include "pcheck/hashing/hash_function.hpp"
#include "pcheck/simnet/communicator.hpp"

// Reference distributed operations. Each function is the per-PE body of a
// simnet program: every PE of the cluster calls it with its local slice.
namespace pcheck::ops {

// Exact per-key sums, sorted by key, at PE 0 (empty elsewhere). Throws
// OverflowError when a sum leaves the signed 64-bit range.
std::vector<KeyValue> sum_aggregate(sim::Communicator& comm, std::span<const KeyValue> local);

// Per-key counts at PE 0.
std::vector<KeyCount> count_aggregate(sim::Communicator& comm, std::span<const KeyValue> local);

// Per-key (sum, count) at PE 0; average = sum / count.
std::vector<AverageEntry> average_aggregate(sim::Communicator& comm, std::span<const KeyValue> local);

// Per-key minima and their owners, replicated at every PE. Ties go to the
// smaller PE id, then the smaller local index.
MinResult min_aggregate(sim::Communicator& comm, std::span<const KeyValue> local);

// Per-key medians via hash GroupBy, replicated at every PE.
MedianAssertion median_aggregate(sim::Communicator& comm, std::span<const KeyValue> local,
                                 const hashing::HashSpec& grouping);

// Sample sort followed by an exact rebalance: PE i receives global ranks
// [i*n/p, (i+1)*n/p) (the first n mod p PEs take one extra element).
std::vector<std::uint64_t> sort(sim::Communicator& comm, std::span<const std::uint64_t> local);

// Both inputs globally sorted; output globally sorted and balanced.
std::vector<std::uint64_t> merge(sim::Communicator& comm, std::span<const std::uint64_t> s1,
                                 std::span<const std::uint64_t> s2);

// Concatenation of S1 and S2 in global order, rebalanced.
std::vector<std::uint64_t> union_of(sim::Communicator& comm, std::span<const std::uint64_t> s1,
                                    std::span<const std::uint64_t> s2);

// Index-wise pairs in S1's distribution. Throws ContractViolation when the
// global lengths differ.
std::vector<std::pair<std::uint64_t, std::uint64_t>> zip(sim::Communicator& comm,
                                                         std::span<const std::uint64_t> s1,
                                                         std::span<const std::uint64_t> s2);

// Moves (k, v) to PE eval_hash(spec, k) mod p; local order (hash, key,
// arrival), where arrival is source PE then source position.
std::vector<KeyValue> groupby_redistribute(sim::Communicator& comm, std::span<const KeyValue> local,
                                           const hashing::HashSpec& spec);

enum class JoinMode { kHash, kSortMerge };

// Co-partitions R and S: by key hash (kHash, as groupby_redistribute) or by
// disjoint ascending key ranges shared by both relations (kSortMerge, local
// order (key, value)).
std::pair<std::vector<KeyValue>, std::vector<KeyValue>> join_redistribute(sim::Communicator& comm,
                                                                          std::span<const KeyValue> r,
                                                                          std::span<const KeyValue> s,
                                                                          JoinMode mode,
                                                                          const hashing::HashSpec& spec);

// Owner of key k under hash partitioning.
inline int hash_owner(std::uint64_t hash_value, int p) {
  return static_cast<int>(hash_value % static_cast<std::uint64_t>(p));
}

}  // namespace pcheck::ops
