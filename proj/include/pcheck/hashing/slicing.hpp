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
#include <vector>

#include "pcheck/hashing/hash_function.hpp"

namespace pcheck::hashing {

// A partition of the low bits of one hash value into equal-width slices, each
// used as an independent smaller hash value.
class SlicePlan {
 public:
  // Throws ConfigError unless 1 <= bits_per_slice and
  // num_slices * bits_per_slice <= source_width <= 64.
  SlicePlan(unsigned num_slices, unsigned bits_per_slice, unsigned source_width);

  unsigned num_slices() const { return num_slices_; }
  unsigned bits_per_slice() const { return bits_per_slice_; }
  unsigned source_width() const { return source_width_; }

 private:
  unsigned num_slices_;
  unsigned bits_per_slice_;
  unsigned source_width_;
};

inline std::uint64_t low_bits_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

// Bits [index*bits, (index+1)*bits) of hash.
inline std::uint64_t raw_slice(std::uint64_t hash, unsigned index, unsigned bits) {
  const unsigned shift = index * bits;
  return shift >= 64 ? 0 : (hash >> shift) & low_bits_mask(bits);
}

// Zero-based bucket of slice `index`: raw slice mod d.
inline std::uint32_t slice_bucket0(std::uint64_t hash, unsigned index, unsigned bits, std::uint32_t d) {
  return static_cast<std::uint32_t>(raw_slice(hash, index, bits) % d);
}

// One-based buckets (1..d) of every slice in plan. Throws ConfigError when
// 2^bits_per_slice < d.
std::vector<std::uint32_t> slice_buckets(std::uint64_t hash, const SlicePlan& plan, std::uint32_t d);

// Smallest bit count b with 2^b >= d.
unsigned bits_for_buckets(std::uint64_t d);

// Position hash r_i = eval_hash(spec, i).
std::uint64_t index_hash(const HashSpec& spec, std::uint64_t global_index);

}  // namespace pcheck::hashing
