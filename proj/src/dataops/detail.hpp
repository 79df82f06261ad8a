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
#include <string_view>
#include <vector>

#include "pcheck/common/error.hpp"
#include "pcheck/dataops/codec.hpp"
#include "pcheck/simnet/communicator.hpp"

namespace pcheck::ops::detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, std::string_view op) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError(std::string(op) + ": per-key sum overflows int64");
  return r;
}

inline std::uint64_t global_count(sim::Communicator& comm, std::uint64_t local) {
  return comm.all_reduce(sim::BitString::from_value(local), sim::combiners::add_mod_pow2(64)).read(0, 64);
}

// Block distribution of n items over p PEs: the first n mod p PEs hold one
// extra item.
inline std::uint64_t block_start(std::uint64_t n, int p, int pe) {
  const std::uint64_t base = n / static_cast<std::uint64_t>(p), extra = n % static_cast<std::uint64_t>(p);
  const auto i = static_cast<std::uint64_t>(pe);
  return i * base + (i < extra ? i : extra);
}

inline int block_owner(std::uint64_t n, int p, std::uint64_t index) {
  const std::uint64_t base = n / static_cast<std::uint64_t>(p), extra = n % static_cast<std::uint64_t>(p);
  const std::uint64_t big = extra * (base + 1);
  if (index < big) return static_cast<int>(index / (base + 1));
  return static_cast<int>(extra + (index - big) / base);
}

// Sends the local slice, which occupies global positions [offset, offset +
// size), to its block owners; returns this PE's block in global order.
template <class T>
std::vector<T> place_in_blocks(sim::Communicator& comm, const std::vector<T>& local, std::uint64_t offset,
                               std::uint64_t total) {
  const int p = comm.size();
  std::vector<sim::BitString> out(static_cast<std::size_t>(p));
  std::size_t i = 0;
  while (i < local.size()) {
    const int dest = block_owner(total, p, offset + i);
    const std::uint64_t end = block_start(total, p, dest + 1);
    const std::size_t stop = static_cast<std::size_t>(std::min<std::uint64_t>(end - offset, local.size()));
    out[static_cast<std::size_t>(dest)] =
        encode_records(std::span<const T>(local.data() + i, stop - i));
    i = stop;
  }
  std::vector<sim::BitString> in = comm.all_to_all(std::move(out));
  std::vector<T> result;
  for (const auto& piece : in) {
    std::vector<T> part = decode_records<T>(piece);
    result.insert(result.end(), part.begin(), part.end());
  }
  return result;
}

template <class T>
std::vector<T> rebalance(sim::Communicator& comm, const std::vector<T>& local) {
  const std::uint64_t total = global_count(comm, local.size());
  const std::uint64_t offset = comm.exclusive_prefix_sum(local.size());
  return place_in_blocks(comm, local, offset, total);
}

}  // namespace pcheck::ops::detail
