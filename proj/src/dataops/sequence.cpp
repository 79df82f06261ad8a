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
#include <algorithm>

#include "detail.hpp"
#include "pcheck/dataops/operations.hpp"

namespace pcheck::ops {
namespace {

// Regular sampling: up to 4p evenly spaced local samples from every PE, then
// p-1 evenly spaced splitters from the gathered sample.
template <class T, class KeyOf>
std::vector<std::uint64_t> choose_splitters(sim::Communicator& comm, const std::vector<T>& sorted_local, KeyOf key_of) {
  const int p = comm.size();
  const std::size_t s = std::min<std::size_t>(sorted_local.size(), 4 * static_cast<std::size_t>(p));
  std::vector<std::uint64_t> samples;
  samples.reserve(s);
  for (std::size_t i = 0; i < s; ++i) samples.push_back(key_of(sorted_local[(2 * i + 1) * sorted_local.size() / (2 * s)]));
  std::vector<std::uint64_t> all;
  for (const auto& piece : comm.all_gather(encode_records(samples))) {
    auto part = decode_records<std::uint64_t>(piece);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::uint64_t> splitters;
  if (all.empty()) return splitters;
  for (int j = 1; j < p; ++j) splitters.push_back(all[static_cast<std::size_t>(j) * all.size() / static_cast<std::size_t>(p)]);
  return splitters;
}

}  // namespace

std::vector<std::uint64_t> sort(sim::Communicator& comm, std::span<const std::uint64_t> local) {
  std::vector<std::uint64_t> data(local.begin(), local.end());
  std::sort(data.begin(), data.end());
  const int p = comm.size();
  if (p == 1) return data;

  const auto splitters = choose_splitters(comm, data, [](std::uint64_t x) { return x; });
  std::vector<sim::BitString> out(static_cast<std::size_t>(p));
  std::size_t begin = 0;
  for (int d = 0; d < p; ++d) {
    std::size_t end = data.size();
    if (d + 1 < p && !splitters.empty()) {
      end = static_cast<std::size_t>(std::upper_bound(data.begin(), data.end(), splitters[static_cast<std::size_t>(d)]) - data.begin());
      end = std::max(end, begin);
    }
    out[static_cast<std::size_t>(d)] = encode_records(std::span<const std::uint64_t>(data.data() + begin, end - begin));
    begin = end;
  }
  std::vector<std::uint64_t> bucket;
  for (const auto& piece : comm.all_to_all(std::move(out))) {
    auto part = decode_records<std::uint64_t>(piece);
    bucket.insert(bucket.end(), part.begin(), part.end());
  }
  std::sort(bucket.begin(), bucket.end());
  return detail::rebalance(comm, bucket);
}

std::vector<std::uint64_t> merge(sim::Communicator& comm, std::span<const std::uint64_t> s1,
                                 std::span<const std::uint64_t> s2) {
  std::vector<std::uint64_t> both(s1.begin(), s1.end());
  both.insert(both.end(), s2.begin(), s2.end());
  return sort(comm, both);
}

std::vector<std::uint64_t> union_of(sim::Communicator& comm, std::span<const std::uint64_t> s1,
                                    std::span<const std::uint64_t> s2) {
  const int p = comm.size();
  sim::BitString sizes;
  sizes.append(s1.size(), 64);
  sizes.append(s2.size(), 64);
  const sim::BitString totals = comm.all_reduce(sizes, sim::combiners::add_mod_pow2(64));
  const std::uint64_t n1 = totals.read(0, 64), n = n1 + totals.read(64, 64);
  const std::uint64_t off1 = comm.exclusive_prefix_sum(s1.size());
  const std::uint64_t off2 = n1 + comm.exclusive_prefix_sum(s2.size());

  // Per destination: [count of S1 items] S1 items, S2 items.
  std::vector<std::vector<std::uint64_t>> parts1(static_cast<std::size_t>(p)), parts2(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < s1.size(); ++i) parts1[static_cast<std::size_t>(detail::block_owner(n, p, off1 + i))].push_back(s1[i]);
  for (std::size_t i = 0; i < s2.size(); ++i) parts2[static_cast<std::size_t>(detail::block_owner(n, p, off2 + i))].push_back(s2[i]);
  std::vector<sim::BitString> out(static_cast<std::size_t>(p));
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d].append(parts1[d].size(), 64);
    out[d].append_words(parts1[d]);
    out[d].append_words(parts2[d]);
  }
  const auto in = comm.all_to_all(std::move(out));
  std::vector<std::uint64_t> first, second;
  for (const auto& piece : in) {
    const auto& w = piece.words();
    const std::size_t c1 = static_cast<std::size_t>(w[0]);
    first.insert(first.end(), w.begin() + 1, w.begin() + 1 + static_cast<std::ptrdiff_t>(c1));
    second.insert(second.end(), w.begin() + 1 + static_cast<std::ptrdiff_t>(c1), w.end());
  }
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> zip(sim::Communicator& comm, std::span<const std::uint64_t> s1,
                                                         std::span<const std::uint64_t> s2) {
  const int p = comm.size();
  sim::BitString sizes;
  sizes.append(s1.size(), 64);
  sizes.append(s2.size(), 64);
  const sim::BitString totals = comm.all_reduce(sizes, sim::combiners::add_mod_pow2(64));
  if (totals.read(0, 64) != totals.read(64, 64)) {
    throw ContractViolation("zip: sequences have different global lengths");
  }
  // Distribution of S1, known to every PE.
  std::vector<std::uint64_t> starts(static_cast<std::size_t>(p) + 1, 0);
  const auto counts = comm.all_gather(sim::BitString::from_value(s1.size()));
  for (int i = 0; i < p; ++i) starts[static_cast<std::size_t>(i) + 1] = starts[static_cast<std::size_t>(i)] + counts[static_cast<std::size_t>(i)].read(0, 64);
  const std::uint64_t off2 = comm.exclusive_prefix_sum(s2.size());

  std::vector<std::vector<std::uint64_t>> parts(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < s2.size(); ++i) {
    const auto owner = std::upper_bound(starts.begin(), starts.end(), off2 + i) - starts.begin() - 1;
    parts[static_cast<std::size_t>(owner)].push_back(s2[i]);
  }
  std::vector<sim::BitString> out(static_cast<std::size_t>(p));
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = sim::BitString::from_words(parts[d]);
  std::vector<std::uint64_t> seconds;
  for (const auto& piece : comm.all_to_all(std::move(out))) {
    seconds.insert(seconds.end(), piece.words().begin(), piece.words().end());
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> result(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) result[i] = {s1[i], seconds[i]};
  return result;
}

}  // namespace pcheck::ops
