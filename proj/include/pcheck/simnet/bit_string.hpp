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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pcheck::sim {

// A message payload: an exact number of bits stored little-endian in 64-bit
// words. Bits past size() in the last word are always zero.
class BitString {
 public:
  BitString() = default;

  static BitString from_words(std::span<const std::uint64_t> words);
  static BitString from_words(std::vector<std::uint64_t>&& words);
  static BitString from_value(std::uint64_t value, unsigned width = 64);
  // Keeps the first `bits` bits of words; requires bits <= 64 * words.size().
  static BitString from_raw(std::vector<std::uint64_t> words, std::size_t bits);

  std::size_t size() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  // Appends the low `width` bits of value (width in 0..64).
  void append(std::uint64_t value, unsigned width);
  void append(const BitString& other);
  void append_words(std::span<const std::uint64_t> words);

  // Reads `width` bits starting at bit `offset`.
  std::uint64_t read(std::size_t offset, unsigned width) const;

  void reserve_bits(std::size_t bits) { words_.reserve((bits + 63) / 64); }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(&bits) {}

  std::uint64_t get(unsigned width);
  bool get_bool() { return get(1) != 0; }
  BitString get_bits(std::size_t count);
  std::size_t remaining() const { return bits_->size() - offset_; }
  std::size_t offset() const { return offset_; }

 private:
  const BitString* bits_;
  std::size_t offset_ = 0;
};

}  // namespace pcheck::sim
