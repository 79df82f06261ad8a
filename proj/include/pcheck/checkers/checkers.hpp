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

#include "pcheck/checkers/config.hpp"
#include "pcheck/checkers/verdict.hpp"
#include "pcheck/dataops/operations.hpp"
#include "pcheck/dataops/types.hpp"
#include "pcheck/simnet/bit_string.hpp"
#include "pcheck/simnet/communicator.hpp"

// Checkers are per-PE simnet program bodies: every PE passes its local part
// of the operation's input and asserted output. All PEs return the same
// verdict. Correct outputs are always accepted.
namespace pcheck::check {

using sim::Communicator;
using U64Pair = std::pair<std::uint64_t, std::uint64_t>;

// Sum aggregation. The asserted sums may be distributed arbitrarily.
Verdict check_sum_agg(Communicator& comm, std::span<const ops::KeyValue> input,
                      std::span<const ops::KeyValue> asserted, const SumCheckConfig& config);

Verdict check_count_agg(Communicator& comm, std::span<const ops::KeyValue> input,
                        std::span<const ops::KeyCount> asserted, const SumCheckConfig& config);

// Checks (average * count, count) against (sum of values, number of values)
// per key; a non-integral product is rejected outright.
Verdict check_average(Communicator& comm, std::span<const ops::KeyValue> input,
                      std::span<const ops::AverageEntry> asserted, const SumCheckConfig& config);

// Deterministic. `asserted` must be replicated; replica digests use
// `replica_hash`.
Verdict check_min(Communicator& comm, std::span<const ops::KeyValue> input, const ops::MinResult& asserted,
                  const hashing::HashSpec& replica_hash = {});

// Balance check: per key, elements below the median count -1 and above +1;
// median-equal elements count -1 for the first below_equal of them in
// (value, global index) order, 0 for the next one when the median is a
// single element (denominator 1), and +1 otherwise. Every key must balance
// to 0. Even-sized groups are asserted unreduced, as (a + b) / 2.
Verdict check_median(Communicator& comm, std::span<const ops::KeyValue> input,
                     const ops::MedianAssertion& asserted, const SumCheckConfig& config);

Verdict check_permutation_hash(Communicator& comm, std::span<const std::uint64_t> e,
                               std::span<const std::uint64_t> o, const PermCheckConfig& config);

Verdict check_permutation_poly(Communicator& comm, std::span<const std::uint64_t> e,
                               std::span<const std::uint64_t> o, const PolyCheckConfig& config);

// Prod (z - x) over xs, mod r. Requires every x < r.
std::uint64_t poly_fingerprint(std::span<const std::uint64_t> xs, std::uint64_t z, std::uint64_t r);

// Prime used by check_permutation_poly: 2^61 - 1 when bound < 2^61 - 1,
// otherwise the least prime above bound.
std::uint64_t choose_prime(std::uint64_t bound);
bool is_prime(std::uint64_t n);

// O is E in non-decreasing order, sliced by pe_id.
Verdict check_sorted(Communicator& comm, std::span<const std::uint64_t> e, std::span<const std::uint64_t> o,
                     const PermutationCheck& perm = PermCheckConfig{});

Verdict check_zip(Communicator& comm, std::span<const std::uint64_t> s1, std::span<const std::uint64_t> s2,
                  std::span<const U64Pair> s, const PermCheckConfig& config);

Verdict check_union(Communicator& comm, std::span<const std::uint64_t> s1, std::span<const std::uint64_t> s2,
                    std::span<const std::uint64_t> s, const PermutationCheck& perm = PermCheckConfig{});

Verdict check_merge(Communicator& comm, std::span<const std::uint64_t> s1, std::span<const std::uint64_t> s2,
                    std::span<const std::uint64_t> s, const PermutationCheck& perm = PermCheckConfig{});

// Multiset equality plus ownership: every element of `redistributed` on PE
// i has eval_hash(ownership, key) mod p == i.
Verdict check_groupby_redistribution(Communicator& comm, std::span<const ops::KeyValue> input,
                                     std::span<const ops::KeyValue> redistributed, const PermCheckConfig& perm,
                                     const hashing::HashSpec& ownership);

// R -> R' and S -> S' multiset equality plus co-partitioning: ownership in
// hash mode; in sort-merge mode each relation is locally key-sorted and the
// key ranges of consecutive non-empty PEs are strictly ascending.
Verdict check_join_redistribution(Communicator& comm, std::span<const ops::KeyValue> r,
                                  std::span<const ops::KeyValue> s, std::span<const ops::KeyValue> r_out,
                                  std::span<const ops::KeyValue> s_out, ops::JoinMode mode,
                                  const PermCheckConfig& perm, const hashing::HashSpec& ownership);

// Compares every PE's replica with PE 0's via a 122-bit digest: two
// polynomial hashes mod 2^61 - 1 with bases drawn from hash.seed.
Verdict replica_consistency(Communicator& comm, const sim::BitString& local_copy,
                            const hashing::HashSpec& hash = {});

}  // namespace pcheck::check
