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
#include <map>
#include <unordered_map>

#include "pcheck/checkers/checkers.hpp"
#include "pcheck/dataops/codec.hpp"
#include "sum_engine.hpp"
#include "wire.hpp"

namespace pcheck::check {

using detail::SumEngine;
using ops::KeyValue;

Verdict check_sum_agg(Communicator& comm, std::span<const KeyValue> input, std::span<const KeyValue> asserted,
                      const SumCheckConfig& config) {
  SumEngine engine(config, 1, false);
  auto extract = [](const KeyValue& e, std::uint64_t& key, std::int64_t* v) {
    key = e.key;
    v[0] = e.value;
  };
  engine.add_all(input, extract, false);
  engine.add_all(asserted, extract, true);
  return engine.finish(comm, std::nullopt);
}

Verdict check_count_agg(Communicator& comm, std::span<const KeyValue> input, std::span<const ops::KeyCount> asserted,
                        const SumCheckConfig& config) {
  SumEngine engine(config, 1, false);
  engine.add_all(input, [](const KeyValue& e, std::uint64_t& key, std::int64_t* v) {
    key = e.key;
    v[0] = 1;
  }, false);
  // Counts above 2^63 wrap; they cannot match a real input anyway.
  engine.add_all(asserted, [](const ops::KeyCount& e, std::uint64_t& key, std::int64_t* v) {
    key = e.key;
    v[0] = static_cast<std::int64_t>(e.count);
  }, true);
  return engine.finish(comm, std::nullopt);
}

Verdict check_average(Communicator& comm, std::span<const KeyValue> input, std::span<const ops::AverageEntry> asserted,
                      const SumCheckConfig& config) {
  SumEngine engine(config, 2, true);
  engine.add_all(input, [](const KeyValue& e, std::uint64_t& key, std::int64_t* v) {
    key = e.key;
    v[0] = e.value;
    v[1] = 1;
  }, false);

  std::optional<VerdictDetail> failure;
  std::vector<ops::KeyValueCount> sums;
  sums.reserve(asserted.size());
  for (const auto& a : asserted) {
    if (a.average.den <= 0 || a.count > static_cast<std::uint64_t>(INT64_MAX)) {
      failure = detail::local_failure(Reason::kMalformedAssertion, comm);
      break;
    }
    const __int128 scaled = static_cast<__int128>(a.average.num) * static_cast<__int128>(a.count);
    if (scaled % a.average.den != 0) {
      failure = detail::local_failure(Reason::kNonIntegralSum, comm);
      break;
    }
    const __int128 sum = scaled / a.average.den;
    if (sum < INT64_MIN || sum > INT64_MAX) {
      failure = detail::local_failure(Reason::kMalformedAssertion, comm);
      break;
    }
    sums.push_back({a.key, static_cast<std::int64_t>(sum), a.count});
  }
  if (!failure) {
    engine.add_all(sums, [](const ops::KeyValueCount& e, std::uint64_t& key, std::int64_t* v) {
      key = e.key;
      v[0] = e.value_sum;
      v[1] = static_cast<std::int64_t>(e.count);
    }, true);
  }
  return engine.finish(comm, failure);
}

namespace {

using KeyCounts = std::vector<ops::KeyCount>;

sim::BitString pack_counts(const KeyCounts& counts) {
  sim::BitString out;
  for (const auto& c : counts) {
    out.append(c.key, 64);
    out.append(c.count, 64);
  }
  return out;
}

KeyCounts unpack_counts(const sim::BitString& bits) {
  KeyCounts out(bits.size() / 128);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {bits.read(128 * i, 64), bits.read(128 * i + 64, 64)};
  return out;
}

// Merge of two key-sorted count lists, adding counts of equal keys.
sim::BitString merge_counts(const sim::BitString& a, const sim::BitString& b) {
  const KeyCounts x = unpack_counts(a), y = unpack_counts(b);
  KeyCounts out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].key < y[j].key)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].key < x[i].key) {
      out.push_back(y[j++]);
    } else {
      out.push_back({x[i].key, x[i].count + y[j].count});
      ++i, ++j;
    }
  }
  return pack_counts(out);
}

}  // namespace

Verdict check_median(Communicator& comm, std::span<const KeyValue> input, const ops::MedianAssertion& asserted,
                     const SumCheckConfig& config) {
  SumEngine engine(config, 1, true);
  std::optional<VerdictDetail> failure =
      detail::replica_mismatch(comm, ops::encode_records(std::span<const ops::MedianEntry>(asserted)), config.hash.seed);

  std::unordered_map<std::uint64_t, const ops::MedianEntry*> by_key;
  by_key.reserve(asserted.size());
  for (const auto& m : asserted) {
    if ((m.median.den != 1 && m.median.den != 2) || !by_key.emplace(m.key, &m).second) {
      if (!failure) failure = detail::local_failure(Reason::kMalformedAssertion, comm);
    }
  }

  // Tie-break ranks of median-equal elements need the number of such
  // elements of the same key on lower-ranked PEs.
  std::map<std::uint64_t, std::uint64_t> local_equal;
  for (const auto& e : input) {
    const auto it = by_key.find(e.key);
    if (it == by_key.end()) {
      if (!failure) failure = detail::local_failure(Reason::kMissingKey, comm);
      continue;
    }
    if (ops::compare(e.value, it->second->median) == 0) ++local_equal[e.key];
  }
  KeyCounts mine;
  mine.reserve(local_equal.size());
  for (const auto& [k, c] : local_equal) mine.push_back({k, c});
  const auto before = comm.exclusive_scan(pack_counts(mine), merge_counts);
  std::unordered_map<std::uint64_t, std::uint64_t> rank;
  if (before) {
    for (const auto& c : unpack_counts(*before)) rank[c.key] = c.count;
  }

  std::vector<KeyValue> contributions;
  contributions.reserve(input.size());
  for (const auto& e : input) {
    const auto it = by_key.find(e.key);
    if (it == by_key.end()) continue;
    const ops::MedianEntry& m = *it->second;
    const int side = ops::compare(e.value, m.median);
    std::int64_t c = side;
    if (side == 0) {
      const std::uint64_t r = rank[e.key]++;
      if (r < m.below_equal) {
        c = -1;
      } else {
        c = (r == m.below_equal && m.median.den == 1) ? 0 : 1;
      }
    }
    if (c != 0) contributions.push_back({e.key, c});
  }
  auto extract = [](const KeyValue& e, std::uint64_t& key, std::int64_t* v) {
    key = e.key;
    v[0] = e.value;
  };
  engine.add_all(contributions, extract, false);
  return engine.finish(comm, failure);
}

}  // namespace pcheck::check
