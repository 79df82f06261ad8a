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
#include <unordered_map>

#include "detail.hpp"
#include "pcheck/dataops/operations.hpp"
#include "pcheck/hashing/hash_function.hpp"

namespace pcheck::ops {
namespace {

struct TripleLess {
  bool operator()(const KeyValueCount& a, const KeyValueCount& b) const { return a.key < b.key; }
};

// Local hash-table reduction to (key, sum, count), sorted by key.
std::vector<KeyValueCount> local_triples(std::span<const KeyValue> local, std::string_view op) {
  std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::uint64_t>> table;
  table.reserve(local.size());
  for (const KeyValue& kv : local) {
    auto& [sum, count] = table[kv.key];
    sum = detail::checked_add(sum, kv.value, op);
    ++count;
  }
  std::vector<KeyValueCount> out;
  out.reserve(table.size());
  for (const auto& [key, sc] : table) out.push_back({key, sc.first, sc.second});
  std::sort(out.begin(), out.end(), TripleLess{});
  return out;
}

// Merges two key-sorted triple tables along the reduction tree.
std::vector<KeyValueCount> tree_sum(sim::Communicator& comm, std::vector<KeyValueCount> local, std::string_view op) {
  const sim::Combiner merge = [op](const sim::BitString& a, const sim::BitString& b) {
    const auto x = decode_records<KeyValueCount>(a);
    const auto y = decode_records<KeyValueCount>(b);
    std::vector<KeyValueCount> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].key < y[j].key)) {
        out.push_back(x[i++]);
      } else if (i == x.size() || y[j].key < x[i].key) {
        out.push_back(y[j++]);
      } else {
        out.push_back({x[i].key, detail::checked_add(x[i].value_sum, y[j].value_sum, op), x[i].count + y[j].count});
        ++i;
        ++j;
      }
    }
    return encode_records(out);
  };
  auto folded = comm.reduce(encode_records(local), merge, 0, sim::WidthPolicy::kVariable);
  return folded ? decode_records<KeyValueCount>(*folded) : std::vector<KeyValueCount>{};
}

}  // namespace

std::vector<KeyValue> sum_aggregate(sim::Communicator& comm, std::span<const KeyValue> local) {
  std::vector<KeyValue> out;
  for (const auto& t : tree_sum(comm, local_triples(local, "sum_aggregate"), "sum_aggregate")) {
    out.push_back({t.key, t.value_sum});
  }
  return out;
}

std::vector<KeyCount> count_aggregate(sim::Communicator& comm, std::span<const KeyValue> local) {
  std::vector<KeyValue> ones(local.begin(), local.end());
  for (auto& kv : ones) kv.value = 0;
  std::vector<KeyCount> out;
  for (const auto& t : tree_sum(comm, local_triples(ones, "count_aggregate"), "count_aggregate")) {
    out.push_back({t.key, t.count});
  }
  return out;
}

std::vector<AverageEntry> average_aggregate(sim::Communicator& comm, std::span<const KeyValue> local) {
  std::vector<AverageEntry> out;
  for (const auto& t : tree_sum(comm, local_triples(local, "average_aggregate"), "average_aggregate")) {
    out.push_back({t.key, {t.value_sum, static_cast<std::int64_t>(t.count)}, t.count});
  }
  return out;
}

MinResult min_aggregate(sim::Communicator& comm, std::span<const KeyValue> local) {
  std::unordered_map<std::uint64_t, std::int64_t> best;
  for (const KeyValue& kv : local) {
    auto [it, fresh] = best.try_emplace(kv.key, kv.value);
    if (!fresh && kv.value < it->second) it->second = kv.value;
  }
  std::vector<MinCertificateEntry> mine;
  mine.reserve(best.size());
  for (const auto& [key, value] : best) mine.push_back({key, static_cast<std::uint32_t>(comm.rank()), value});
  std::sort(mine.begin(), mine.end());

  const sim::Combiner merge = [](const sim::BitString& a, const sim::BitString& b) {
    const auto x = decode_records<MinCertificateEntry>(a);
    const auto y = decode_records<MinCertificateEntry>(b);
    std::vector<MinCertificateEntry> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].key < y[j].key)) {
        out.push_back(x[i++]);
      } else if (i == x.size() || y[j].key < x[i].key) {
        out.push_back(y[j++]);
      } else {
        const bool left = std::make_pair(x[i].min_value, x[i].owner_pe) <= std::make_pair(y[j].min_value, y[j].owner_pe);
        out.push_back(left ? x[i] : y[j]);
        ++i;
        ++j;
      }
    }
    return encode_records(out);
  };
  auto folded = comm.reduce(encode_records(mine), merge, 0, sim::WidthPolicy::kVariable);
  const auto certificate = decode_records<MinCertificateEntry>(comm.broadcast(folded ? *folded : sim::BitString{}, 0));

  MinResult result;
  result.certificate = certificate;
  result.minima.reserve(certificate.size());
  for (const auto& c : certificate) result.minima.push_back({c.key, c.min_value});
  return result;
}

MedianAssertion median_aggregate(sim::Communicator& comm, std::span<const KeyValue> local,
                                 const hashing::HashSpec& grouping) {
  const int p = comm.size();
  const std::uint64_t offset = comm.exclusive_prefix_sum(local.size());
  const hashing::HashFunction hash(grouping);

  // (key, value, global index) routed to the key's hash owner.
  std::vector<std::vector<std::uint64_t>> outgoing(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < local.size(); ++i) {
    auto& buf = outgoing[static_cast<std::size_t>(hash_owner(hash(local[i].key), p))];
    buf.push_back(local[i].key);
    buf.push_back(static_cast<std::uint64_t>(local[i].value));
    buf.push_back(offset + i);
  }
  std::vector<sim::BitString> out(static_cast<std::size_t>(p));
  for (int d = 0; d < p; ++d) out[static_cast<std::size_t>(d)] = sim::BitString::from_words(outgoing[static_cast<std::size_t>(d)]);
  struct Item {
    std::uint64_t key;
    std::int64_t value;
    std::uint64_t index;
    auto operator<=>(const Item&) const = default;
  };
  std::vector<Item> items;
  for (const auto& piece : comm.all_to_all(std::move(out))) {
    const auto& w = piece.words();
    for (std::size_t i = 0; i + 2 < w.size(); i += 3) items.push_back({w[i], static_cast<std::int64_t>(w[i + 1]), w[i + 2]});
  }
  std::sort(items.begin(), items.end());

  std::vector<MedianEntry> mine;
  for (std::size_t lo = 0; lo < items.size();) {
    std::size_t hi = lo;
    while (hi < items.size() && items[hi].key == items[lo].key) ++hi;
    const std::size_t n = hi - lo, m = n / 2;
    MedianEntry e{items[lo].key, {}, 0};
    if (n % 2 == 1) {
      e.median = {items[lo + m].value, 1};
    } else {
      e.median = {detail::checked_add(items[lo + m - 1].value, items[lo + m].value, "median_aggregate"), 2};
    }
    for (std::size_t i = lo; i < lo + m; ++i) e.below_equal += compare(items[i].value, e.median) == 0;
    mine.push_back(e);
    lo = hi;
  }

  auto gathered = comm.reduce(encode_records(mine), sim::combiners::concat(), 0, sim::WidthPolicy::kVariable);
  sim::BitString all;
  if (gathered) {
    auto entries = decode_records<MedianEntry>(*gathered);
    std::sort(entries.begin(), entries.end(), [](const MedianEntry& a, const MedianEntry& b) { return a.key < b.key; });
    all = encode_records(entries);
  }
  return decode_records<MedianEntry>(comm.broadcast(all, 0));
}

}  // namespace pcheck::ops
