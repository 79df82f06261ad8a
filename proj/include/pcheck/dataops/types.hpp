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

#include <compare>
#include <cstdint>
#include <vector>

namespace pcheck::ops {

// Per-PE slices of a distributed sequence, indexed by pe_id.
template <class T>
using Distributed = std::vector<std::vector<T>>;

struct KeyValue {
  std::uint64_t key = 0;
  std::int64_t value = 0;

  friend auto operator<=>(const KeyValue&, const KeyValue&) = default;
};

struct KeyCount {
  std::uint64_t key = 0;
  std::uint64_t count = 0;

  friend auto operator<=>(const KeyCount&, const KeyCount&) = default;
};

struct KeyValueCount {
  std::uint64_t key = 0;
  std::int64_t value_sum = 0;
  std::uint64_t count = 0;

  friend auto operator<=>(const KeyValueCount&, const KeyValueCount&) = default;
};

// Exact rational num/den with den > 0. Not normalized: average_aggregate
// reports (sum, count) and median_aggregate reports (x, 1) or (a + b, 2).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Compares values rather than representations, e.g. (4, 2) equals (2, 1).
bool same_value(const Rational& a, const Rational& b);
// Sign of x - r for an integer x.
int compare(std::int64_t x, const Rational& r);

struct AverageEntry {
  std::uint64_t key = 0;
  Rational average;
  std::uint64_t count = 0;  // doubles as the certificate

  friend bool operator==(const AverageEntry&, const AverageEntry&) = default;
};

struct MinCertificateEntry {
  std::uint64_t key = 0;
  std::uint32_t owner_pe = 0;
  std::int64_t min_value = 0;

  friend auto operator<=>(const MinCertificateEntry&, const MinCertificateEntry&) = default;
};

// Every PE holds the full result and certificate, both sorted by key.
struct MinResult {
  std::vector<KeyValue> minima;
  std::vector<MinCertificateEntry> certificate;

  friend bool operator==(const MinResult&, const MinResult&) = default;
};

struct MedianEntry {
  std::uint64_t key = 0;
  Rational median;
  // Elements equal to the median ranked strictly below position floor(n/2)
  // (0-based) under the (value, global index) order.
  std::uint64_t below_equal = 0;

  friend bool operator==(const MedianEntry&, const MedianEntry&) = default;
};

// Replicated at every PE, sorted by key.
using MedianAssertion = std::vector<MedianEntry>;

}  // namespace pcheck::ops
