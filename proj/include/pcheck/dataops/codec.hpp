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

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pcheck/common/error.hpp"
#include "pcheck/dataops/types.hpp"
#include "pcheck/simnet/bit_string.hpp"

namespace pcheck::ops {

// Fixed-size record <-> 64-bit word encodings used to move records through
// simnet messages.
template <class T>
struct RecordCodec;

template <>
struct RecordCodec<std::uint64_t> {
  static constexpr std::size_t kWords = 1;
  static void put(const std::uint64_t& x, std::uint64_t* w) { w[0] = x; }
  static std::uint64_t get(const std::uint64_t* w) { return w[0]; }
};

template <>
struct RecordCodec<KeyValue> {
  static constexpr std::size_t kWords = 2;
  static void put(const KeyValue& x, std::uint64_t* w) {
    w[0] = x.key;
    w[1] = static_cast<std::uint64_t>(x.value);
  }
  static KeyValue get(const std::uint64_t* w) { return {w[0], static_cast<std::int64_t>(w[1])}; }
};

template <>
struct RecordCodec<KeyValueCount> {
  static constexpr std::size_t kWords = 3;
  static void put(const KeyValueCount& x, std::uint64_t* w) {
    w[0] = x.key;
    w[1] = static_cast<std::uint64_t>(x.value_sum);
    w[2] = x.count;
  }
  static KeyValueCount get(const std::uint64_t* w) { return {w[0], static_cast<std::int64_t>(w[1]), w[2]}; }
};

template <>
struct RecordCodec<MinCertificateEntry> {
  static constexpr std::size_t kWords = 3;
  static void put(const MinCertificateEntry& x, std::uint64_t* w) {
    w[0] = x.key;
    w[1] = x.owner_pe;
    w[2] = static_cast<std::uint64_t>(x.min_value);
  }
  static MinCertificateEntry get(const std::uint64_t* w) {
    return {w[0], static_cast<std::uint32_t>(w[1]), static_cast<std::int64_t>(w[2])};
  }
};

template <>
struct RecordCodec<MedianEntry> {
  static constexpr std::size_t kWords = 4;
  static void put(const MedianEntry& x, std::uint64_t* w) {
    w[0] = x.key;
    w[1] = static_cast<std::uint64_t>(x.median.num);
    w[2] = static_cast<std::uint64_t>(x.median.den);
    w[3] = x.below_equal;
  }
  static MedianEntry get(const std::uint64_t* w) {
    return {w[0], {static_cast<std::int64_t>(w[1]), static_cast<std::int64_t>(w[2])}, w[3]};
  }
};

template <>
struct RecordCodec<std::pair<std::uint64_t, std::uint64_t>> {
  static constexpr std::size_t kWords = 2;
  static void put(const std::pair<std::uint64_t, std::uint64_t>& x, std::uint64_t* w) {
    w[0] = x.first;
    w[1] = x.second;
  }
  static std::pair<std::uint64_t, std::uint64_t> get(const std::uint64_t* w) { return {w[0], w[1]}; }
};

template <class T>
sim::BitString encode_records(std::span<const T> records) {
  using C = RecordCodec<T>;
  std::vector<std::uint64_t> words(records.size() * C::kWords);
  for (std::size_t i = 0; i < records.size(); ++i) C::put(records[i], &words[i * C::kWords]);
  return sim::BitString::from_words(std::move(words));
}

template <class T>
sim::BitString encode_records(const std::vector<T>& records) {
  return encode_records(std::span<const T>(records));
}

template <class T>
std::vector<T> decode_records(const sim::BitString& bits) {
  using C = RecordCodec<T>;
  if (bits.size() % (64 * C::kWords) != 0) throw ContractViolation("decode_records: payload is not a whole number of records");
  const auto& words = bits.words();
  std::vector<T> out(words.size() / C::kWords);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = C::get(&words[i * C::kWords]);
  return out;
}

}  // namespace pcheck::ops
