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
#include "pcheck/hashing/crc32c.hpp"

#include <cstring>

namespace pcheck::hashing {
namespace {

constexpr std::uint32_t kPoly = 0x82f63b78u;

using TableSet = std::array<std::array<std::uint32_t, 256>, 8>;

constexpr TableSet make_tables() {
  TableSet t{};
  for (std::uint32_t b = 0; b < 256; ++b) {
    std::uint32_t c = b;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? (c >> 1) ^ kPoly : c >> 1;
    t[0][b] = c;
  }
  for (std::size_t k = 1; k < 8; ++k) {
    for (std::size_t b = 0; b < 256; ++b) t[k][b] = (t[k - 1][b] >> 8) ^ t[0][t[k - 1][b] & 0xff];
  }
  return t;
}

}  // namespace

namespace detail {
constinit const TableSet kCrcTables = make_tables();
}  // namespace detail

std::uint32_t crc32c_extend(std::uint32_t crc, std::span<const std::uint8_t> data) {
  std::uint32_t reg = ~crc;
  std::size_t i = 0;
  for (; i + 8 <= data.size(); i += 8) {
    std::uint64_t word = 0;
    for (int b = 7; b >= 0; --b) word = (word << 8) | data[i + b];
    reg = detail::crc_step64(reg, word);
  }
  for (; i < data.size(); ++i) reg = (reg >> 8) ^ detail::kCrcTables[0][(reg ^ data[i]) & 0xff];
  return ~reg;
}

}  // namespace pcheck::hashing
