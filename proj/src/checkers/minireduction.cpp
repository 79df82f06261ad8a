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
#include "pcheck/checkers/minireduction.hpp"

#include "pcheck/common/error.hpp"
#include "pcheck/hashing/slicing.hpp"
#include "wire.hpp"

namespace pcheck::check {

std::uint64_t residue(std::int64_t v, std::uint64_t r) {
  if (v >= 0) return static_cast<std::uint64_t>(v) % r;
  const std::uint64_t m = (std::uint64_t{0} - static_cast<std::uint64_t>(v)) % r;
  return m == 0 ? 0 : r - m;
}

BucketTable condensed_table(std::span<const ops::KeyValue> elements, std::uint32_t d, std::uint64_t r,
                            const std::function<std::uint32_t(std::uint64_t)>& bucket) {
  BucketTable table{r, std::vector<std::uint64_t>(d, 0)};
  for (const auto& e : elements) {
    const std::uint32_t b = bucket(e.key);
    if (b >= d) throw ContractViolation("bucket function out of range");
    table.residues[b] = (table.residues[b] + residue(e.value, r)) % r;
  }
  return table;
}

BucketHasher::BucketHasher(const hashing::HashSpec& hash, std::uint32_t d, unsigned iterations)
    : d_(d), iterations_(iterations), slice_bits_(hashing::bits_for_buckets(d)) {
  const unsigned width = hashing::output_width(hash.family);
  if (d < 2 || slice_bits_ > width) throw ConfigError("bucket count does not fit the hash width");
  per_eval_ = width / slice_bits_;
  const unsigned evaluations = (iterations + per_eval_ - 1) / per_eval_;
  evals_.reserve(evaluations);
  for (unsigned e = 0; e < evaluations; ++e) evals_.emplace_back(hash, e);
}

std::uint32_t BucketHasher::bucket(std::uint64_t key, unsigned iteration) const {
  const std::uint64_t h = evals_[iteration / per_eval_](key);
  return hashing::slice_bucket0(h, iteration % per_eval_, slice_bits_, d_);
}

std::optional<BucketTable> condensed_reduce(sim::Communicator& comm, std::span<const ops::KeyValue> local,
                                            std::uint32_t d, std::uint64_t r, const hashing::HashSpec& hash) {
  if (r < 2) throw ConfigError("condensed_reduce: modulus must be >= 2");
  const BucketHasher hasher(hash, d, 1);
  const BucketTable table = condensed_table(local, d, r, [&](std::uint64_t key) { return hasher.bucket(key, 0); });
  detail::SlotLayout layout;
  layout.add({hashing::bits_for_buckets(r), detail::SlotOp::kAddMod, r}, d);
  auto reduced = comm.reduce(layout.pack(table.residues), layout.combiner());
  if (!reduced) return std::nullopt;
  return BucketTable{r, layout.unpack(*reduced)};
}

}  // namespace pcheck::check
