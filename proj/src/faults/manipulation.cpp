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
#include "pcheck/faults/manipulation.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>
#include <utility>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"

namespace pcheck::faults {
namespace {

constexpr int kMaxAttempts = 100;

struct NamedKind {
  std::string_view name;
  Kind kind;
};

constexpr NamedKind kNames[] = {
    {"bitflip", Kind::kBitflip},   {"randkey", Kind::kRandKey},     {"switchvalues", Kind::kSwitchValues},
    {"inckey", Kind::kIncKey},     {"incdeckey", Kind::kIncDecKey}, {"incdec", Kind::kIncDec},
    {"increment", Kind::kIncrement},
    {"randomize", Kind::kRandomize}, {"reset", Kind::kReset},       {"setequal", Kind::kSetEqual},
};

bool counted(Kind kind) { return kind == Kind::kIncDec || kind == Kind::kIncDecKey; }

template <class T>
using Edits = std::vector<std::pair<std::size_t, T>>;

// True when writing edits into data changes it as a multiset. Edited indices
// are distinct, so comparing the touched records suffices.
template <class T>
bool changes_multiset(std::span<const T> data, const Edits<T>& edits) {
  std::vector<T> before, after;
  for (const auto& [i, v] : edits) {
    before.push_back(data[i]);
    after.push_back(v);
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  return before != after;
}

template <class T, class Draw>
std::vector<T> apply_edits(std::span<const T> data, const Manipulation& m, Draw draw) {
  if (data.empty()) throw ContractViolation("manipulation of an empty sequence");
  Rng rng(m.seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Edits<T> edits = draw(rng);
    if (!changes_multiset(data, edits)) continue;
    std::vector<T> out(data.begin(), data.end());
    for (const auto& [i, v] : edits) out[i] = v;
    return out;
  }
  throw ContractViolation(name(m) + ": no effective target found in " + std::to_string(kMaxAttempts) + " attempts");
}

std::pair<std::size_t, std::size_t> two_indices(Rng& rng, std::size_t n) {
  if (n < 2) throw ContractViolation("manipulation needs at least two elements");
  const std::size_t i = uniform_below(rng, n);
  std::size_t j = uniform_below(rng, n - 1);
  if (j >= i) ++j;
  return {i, j};
}

// 2n indices with pairwise distinct keys, by rejection over uniform indices.
std::vector<std::size_t> distinct_key_indices(Rng& rng, std::span<const ops::KeyValue> data, unsigned count) {
  std::unordered_set<std::uint64_t> keys;
  std::vector<std::size_t> picked;
  std::uint64_t draws = 0;
  while (picked.size() < count) {
    if (++draws == 1000ull * count) {
      std::unordered_set<std::uint64_t> all;
      for (const auto& kv : data) all.insert(kv.key);
      if (all.size() < count) throw ContractViolation("incdec needs " + std::to_string(count) + " distinct keys");
    }
    const std::size_t i = uniform_below(rng, data.size());
    if (keys.insert(data[i].key).second) picked.push_back(i);
  }
  return picked;
}

Edits<ops::KeyValue> draw_sum(Rng& rng, std::span<const ops::KeyValue> data, const Manipulation& m) {
  const std::size_t n = data.size();
  switch (m.kind) {
    case Kind::kBitflip: {
      const std::size_t i = uniform_below(rng, n);
      const unsigned bit = static_cast<unsigned>(uniform_below(rng, 128));
      ops::KeyValue kv = data[i];
      if (bit < 64) {
        kv.key ^= std::uint64_t{1} << bit;
      } else {
        kv.value = static_cast<std::int64_t>(static_cast<std::uint64_t>(kv.value) ^ (std::uint64_t{1} << (bit - 64)));
      }
      return {{i, kv}};
    }
    case Kind::kRandKey: {
      const std::size_t i = uniform_below(rng, n);
      return {{i, {rng(), data[i].value}}};
    }
    case Kind::kSwitchValues: {
      const auto [i, j] = two_indices(rng, n);
      return {{i, {data[i].key, data[j].value}}, {j, {data[j].key, data[i].value}}};
    }
    case Kind::kIncKey: {
      const std::size_t i = uniform_below(rng, n);
      return {{i, {data[i].key + 1, data[i].value}}};
    }
    case Kind::kIncDec:
    case Kind::kIncDecKey: {
      const auto picked = distinct_key_indices(rng, data, 2 * m.n);
      Edits<ops::KeyValue> edits;
      for (unsigned e = 0; e < picked.size(); ++e) {
        ops::KeyValue kv = data[picked[e]];
        const int step = e < m.n ? 1 : -1;
        if (m.kind == Kind::kIncDec) {
          kv.value = static_cast<std::int64_t>(static_cast<std::uint64_t>(kv.value) + static_cast<std::uint64_t>(step));
        } else {
          kv.key += static_cast<std::uint64_t>(step);
        }
        edits.push_back({picked[e], kv});
      }
      return edits;
    }
    default:
      throw ConfigError(name(m) + " is not a sum aggregation manipulator");
  }
}

Edits<std::uint64_t> draw_perm(Rng& rng, std::span<const std::uint64_t> data, const Manipulation& m) {
  const std::size_t n = data.size();
  switch (m.kind) {
    case Kind::kBitflip: {
      const std::size_t i = uniform_below(rng, n);
      return {{i, data[i] ^ (std::uint64_t{1} << uniform_below(rng, 64))}};
    }
    case Kind::kIncrement: {
      const std::size_t i = uniform_below(rng, n);
      return {{i, data[i] + 1}};
    }
    case Kind::kRandomize: {
      const std::size_t i = uniform_below(rng, n);
      return {{i, rng()}};
    }
    case Kind::kReset:
      return {{uniform_below(rng, n), 0}};
    case Kind::kSetEqual: {
      const auto [i, j] = two_indices(rng, n);
      return {{i, data[j]}};
    }
    default:
      throw ConfigError(name(m) + " is not a permutation manipulator");
  }
}

template <class T, class Apply>
void apply_flat(ops::Distributed<T>& data, const Manipulation& m, Apply apply) {
  std::vector<T> flat;
  for (const auto& part : data) flat.insert(flat.end(), part.begin(), part.end());
  const std::vector<T> changed = apply(std::span<const T>(flat), m);
  auto it = changed.begin();
  for (auto& part : data) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(part.size()), part.begin());
    it += static_cast<std::ptrdiff_t>(part.size());
  }
}

}  // namespace

bool applies_to_sum(Kind kind) {
  return kind == Kind::kBitflip || kind == Kind::kRandKey || kind == Kind::kSwitchValues || kind == Kind::kIncKey ||
         kind == Kind::kIncDec || kind == Kind::kIncDecKey;
}

bool applies_to_permutation(Kind kind) {
  return kind == Kind::kBitflip || kind == Kind::kIncrement || kind == Kind::kRandomize || kind == Kind::kReset ||
         kind == Kind::kSetEqual;
}

std::string name(const Manipulation& m) {
  for (const auto& [text, kind] : kNames) {
    if (kind == m.kind) return counted(kind) ? std::string(text) + std::to_string(m.n) : std::string(text);
  }
  return "unknown";
}

Manipulation parse_manipulation(std::string_view text, std::uint64_t seed, Target target) {
  Manipulation m;
  m.seed = seed;
  m.target = target;
  for (const auto& [prefix, kind] : kNames) {
    if (counted(kind) && text.starts_with(prefix)) {
      const std::string_view digits = text.substr(prefix.size());
      const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m.n);
      if (ec != std::errc() || end != digits.data() + digits.size() || m.n == 0) continue;
      m.kind = kind;
      return m;
    }
    if (text == prefix && !counted(kind)) {
      m.kind = kind;
      return m;
    }
  }
  throw ConfigError("unknown manipulator '" + std::string(text) + "'");
}

const std::vector<std::string>& sum_manipulator_names() {
  static const std::vector<std::string> names{"bitflip", "randkey", "switchvalues", "inckey", "incdec1", "incdec2"};
  return names;
}

const std::vector<std::string>& permutation_manipulator_names() {
  static const std::vector<std::string> names{"bitflip", "increment", "randomize", "reset", "setequal"};
  return names;
}

std::vector<ops::KeyValue> apply_sum_manipulation(std::span<const ops::KeyValue> data, const Manipulation& m) {
  if (!applies_to_sum(m.kind)) throw ConfigError(name(m) + " is not a sum aggregation manipulator");
  return apply_edits<ops::KeyValue>(data, m, [&](Rng& rng) { return draw_sum(rng, data, m); });
}

std::vector<std::uint64_t> apply_perm_manipulation(std::span<const std::uint64_t> data, const Manipulation& m) {
  if (!applies_to_permutation(m.kind)) throw ConfigError(name(m) + " is not a permutation manipulator");
  return apply_edits<std::uint64_t>(data, m, [&](Rng& rng) { return draw_perm(rng, data, m); });
}

void apply_sum_manipulation(ops::Distributed<ops::KeyValue>& data, const Manipulation& m) {
  apply_flat(data, m, [](std::span<const ops::KeyValue> flat, const Manipulation& mm) { return apply_sum_manipulation(flat, mm); });
}

void apply_perm_manipulation(ops::Distributed<std::uint64_t>& data, const Manipulation& m) {
  apply_flat(data, m, [](std::span<const std::uint64_t> flat, const Manipulation& mm) { return apply_perm_manipulation(flat, mm); });
}

}  // namespace pcheck::faults
