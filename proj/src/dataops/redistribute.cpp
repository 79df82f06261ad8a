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

std::vector<KeyValue> exchange(sim::Communicator& comm, std::vector<std::vector<KeyValue>>&& parts) {
  std::vector<sim::BitString> out(parts.size());
  for (std::size_t d = 0; d < parts.size(); ++d) out[d] = encode_records(parts[d]);
  std::vector<KeyValue> received;
  for (const auto& piece : comm.all_to_all(std::move(out))) {
    auto part = decode_records<KeyValue>(piece);
    received.insert(received.end(), part.begin(), part.end());
  }
  return received;
}

std::vector<std::uint64_t> key_splitters(sim::Communicator& comm, std::span<const KeyValue> r, std::span<const KeyValue> s) {
  const int p = comm.size();
  std::vector<std::uint64_t> keys;
  keys.reserve(r.size() + s.size());
  for (const auto& kv : r) keys.push_back(kv.key);
  for (const auto& kv : s) keys.push_back(kv.key);
  std::sort(keys.begin(), keys.end());
  const std::size_t count = std::min<std::size_t>(keys.size(), 4 * static_cast<std::size_t>(p));
  std::vector<std::uint64_t> samples;
  for (std::size_t i = 0; i < count; ++i) samples.push_back(keys[(2 * i + 1) * keys.size() / (2 * count)]);
  std::vector<std::uint64_t> all;
  for (const auto& piece : comm.all_gather(encode_records(samples))) {
    auto part = decode_records<std::uint64_t>(piece);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::uint64_t> splitters;
  if (!all.empty()) {
    for (int j = 1; j < p; ++j) splitters.push_back(all[static_cast<std::size_t>(j) * all.size() / static_cast<std::size_t>(p)]);
  }
  return splitters;
}

}  // namespace

std::vector<KeyValue> groupby_redistribute(sim::Communicator& comm, std::span<const KeyValue> local,
                                           const hashing::HashSpec& spec) {
  const int p = comm.size();
  const hashing::HashFunction hash(spec);
  std::vector<std::vector<KeyValue>> parts(static_cast<std::size_t>(p));
  for (const auto& kv : local) parts[static_cast<std::size_t>(hash_owner(hash(kv.key), p))].push_back(kv);
  std::vector<KeyValue> received = exchange(comm, std::move(parts));
  std::vector<std::pair<std::uint64_t, KeyValue>> keyed;
  keyed.reserve(received.size());
  for (const auto& kv : received) keyed.emplace_back(hash(kv.key), kv);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second.key < b.second.key;
  });
  std::vector<KeyValue> result;
  result.reserve(keyed.size());
  for (const auto& [h, kv] : keyed) result.push_back(kv);
  return result;
}

std::pair<std::vector<KeyValue>, std::vector<KeyValue>> join_redistribute(sim::Communicator& comm,
                                                                          std::span<const KeyValue> r,
                                                                          std::span<const KeyValue> s, JoinMode mode,
                                                                          const hashing::HashSpec& spec) {
  if (mode == JoinMode::kHash) {
    auto r2 = groupby_redistribute(comm, r, spec);
    auto s2 = groupby_redistribute(comm, s, spec);
    return {std::move(r2), std::move(s2)};
  }
  const int p = comm.size();
  const auto splitters = key_splitters(comm, r, s);
  auto route = [&](std::span<const KeyValue> rel) {
    std::vector<std::vector<KeyValue>> parts(static_cast<std::size_t>(p));
    for (const auto& kv : rel) {
      const auto d = std::lower_bound(splitters.begin(), splitters.end(), kv.key) - splitters.begin();
      parts[static_cast<std::size_t>(d)].push_back(kv);
    }
    std::vector<KeyValue> got = exchange(comm, std::move(parts));
    std::sort(got.begin(), got.end());
    return got;
  };
  auto r2 = route(r);
  auto s2 = route(s);
  return {std::move(r2), std::move(s2)};
}

}  // namespace pcheck::ops
