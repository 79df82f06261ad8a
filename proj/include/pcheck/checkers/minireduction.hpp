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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pcheck/checkers/config.hpp"
#include "pcheck/dataops/types.hpp"
#include "pcheck/simnet/communicator.hpp"

namespace pcheck::check {

struct BucketTable {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> residues;  // d entries, each < modulus

  friend bool operator==(const BucketTable&, const BucketTable&) = default;
};

// Canonical residue of v modulo r.
std::uint64_t residue(std::int64_t v, std::uint64_t r);

// Local condensed reduction with an explicit zero-based bucket function.
BucketTable condensed_table(std::span<const ops::KeyValue> elements, std::uint32_t d, std::uint64_t r,
                            const std::function<std::uint32_t(std::uint64_t key)>& bucket);

// Zero-based bucket of `key` in iteration `iteration`: slice number
// iteration mod q of hash evaluation iteration / q, reduced mod d, where
// q = hash width / bits_for_buckets(d).
class BucketHasher {
 public:
  BucketHasher(const hashing::HashSpec& hash, std::uint32_t d, unsigned iterations);

  unsigned iterations() const { return iterations_; }
  unsigned slices_per_evaluation() const { return per_eval_; }
  unsigned bits_per_slice() const { return slice_bits_; }
  const std::vector<hashing::HashFunction>& evaluations() const { return evals_; }

  std::uint32_t bucket(std::uint64_t key, unsigned iteration) const;

 private:
  std::uint32_t d_;
  unsigned iterations_;
  unsigned slice_bits_;
  unsigned per_eval_;
  std::vector<hashing::HashFunction> evals_;
};

// Distributed condensed reduction of one iteration: local tables with
// buckets from iteration 0 of `hash`, summed mod r to PE 0.
std::optional<BucketTable> condensed_reduce(sim::Communicator& comm, std::span<const ops::KeyValue> local,
                                            std::uint32_t d, std::uint64_t r, const hashing::HashSpec& hash);

}  // namespace pcheck::check
