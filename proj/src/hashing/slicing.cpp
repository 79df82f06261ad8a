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
#include "pcheck/hashing/slicing.hpp"

#include <string>

#include "pcheck/common/error.hpp"

namespace pcheck::hashing {

SlicePlan::SlicePlan(unsigned num_slices, unsigned bits_per_slice, unsigned source_width)
    : num_slices_(num_slices), bits_per_slice_(bits_per_slice), source_width_(source_width) {
  if (bits_per_slice == 0) throw ConfigError("slice plan: bits_per_slice must be at least 1");
  if (source_width == 0 || source_width > 64) throw ConfigError("slice plan: source width must be in 1..64");
  if (bits_per_slice > source_width) {
    throw ConfigError("slice plan: bits_per_slice " + std::to_string(bits_per_slice) +
                      " exceeds source width " + std::to_string(source_width));
  }
  if (static_cast<std::uint64_t>(num_slices) * bits_per_slice > source_width) {
    throw ConfigError("slice plan: " + std::to_string(num_slices) + " x " + std::to_string(bits_per_slice) +
                      " bits exceeds source width " + std::to_string(source_width));
  }
}

std::vector<std::uint32_t> slice_buckets(std::uint64_t hash, const SlicePlan& plan, std::uint32_t d) {
  if (d == 0) throw ConfigError("slice_buckets: d must be positive");
  if (plan.bits_per_slice() < 64 && (std::uint64_t{1} << plan.bits_per_slice()) < d) {
    throw ConfigError("slice_buckets: 2^bits_per_slice is smaller than d");
  }
  std::vector<std::uint32_t> buckets(plan.num_slices());
  for (unsigned i = 0; i < plan.num_slices(); ++i) {
    buckets[i] = slice_bucket0(hash, i, plan.bits_per_slice(), d) + 1;
  }
  return buckets;
}

unsigned bits_for_buckets(std::uint64_t d) {
  unsigned bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < d) ++bits;
  return bits;
}

std::uint64_t index_hash(const HashSpec& spec, std::uint64_t global_index) { return eval_hash(spec, global_index); }

}  // namespace pcheck::hashing
