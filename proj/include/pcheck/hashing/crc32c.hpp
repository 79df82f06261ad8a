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

namespace pcheck::hashing {

// CRC-32C (Castagnoli, reflected polynomial 0x82F63B78), with the usual
// 0xFFFFFFFF initial register and final inversion.

// Continues a finished CRC value `crc` over `data`; crc32c_extend(0, x) is
// the CRC of x.
std::uint32_t crc32c_extend(std::uint32_t crc, std::span<const std::uint8_t> data);

inline std::uint32_t crc32c(std::span<const std::uint8_t> data) {
  return crc32c_extend(0, data);
}

namespace detail {
// Slicing-by-8 tables: kCrcTables[k][b] is the register contribution of byte
// b followed by k zero bytes.
extern const std::array<std::array<std::uint32_t, 256>, 8> kCrcTables;

inline std::uint32_t crc_step64(std::uint32_t reg, std::uint64_t word) {
  const std::uint64_t x = word ^ reg;
  return kCrcTables[7][x & 0xff] ^ kCrcTables[6][(x >> 8) & 0xff] ^
         kCrcTables[5][(x >> 16) & 0xff] ^ kCrcTables[4][(x >> 24) & 0xff] ^
         kCrcTables[3][(x >> 32) & 0xff] ^ kCrcTables[2][(x >> 40) & 0xff] ^
         kCrcTables[1][(x >> 48) & 0xff] ^ kCrcTables[0][x >> 56];
}
}  // namespace detail

// CRC-32C of the 8-byte little-endian encoding of `word`. A non-default
// `init_register` yields a different but equally linear member of the family.
inline std::uint32_t crc32c_word(std::uint64_t word, std::uint32_t init_register = 0xffffffffu) {
  return ~detail::crc_step64(init_register, word);
}

// CRC-32C of the 16-byte encoding (first, second), both little-endian.
inline std::uint32_t crc32c_words(std::uint64_t first, std::uint64_t second,
                                  std::uint32_t init_register = 0xffffffffu) {
  return ~detail::crc_step64(detail::crc_step64(init_register, first), second);
}

}  // namespace pcheck::hashing
