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
#include "pcheck/simnet/bit_string.hpp"

#include "pcheck/common/error.hpp"

namespace pcheck::sim {
namespace {

std::uint64_t mask(unsigned width) { return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1; }

}  // namespace

BitString BitString::from_words(std::span<const std::uint64_t> words) {
  BitString b;
  b.words_.assign(words.begin(), words.end());
  b.bits_ = words.size() * 64;
  return b;
}

BitString BitString::from_words(std::vector<std::uint64_t>&& words) {
  BitString b;
  b.bits_ = words.size() * 64;
  b.words_ = std::move(words);
  return b;
}

BitString BitString::from_raw(std::vector<std::uint64_t> words, std::size_t bits) {
  if (bits > words.size() * 64) throw ContractViolation("BitString::from_raw: too few words");
  words.resize((bits + 63) / 64);
  if (bits % 64 != 0) words.back() &= mask(static_cast<unsigned>(bits % 64));
  BitString b;
  b.words_ = std::move(words);
  b.bits_ = bits;
  return b;
}

BitString BitString::from_value(std::uint64_t value, unsigned width) {
  BitString b;
  b.append(value, width);
  return b;
}

void BitString::append(std::uint64_t value, unsigned width) {
  if (width > 64) throw ContractViolation("BitString::append: width above 64");
  if (width == 0) return;
  value &= mask(width);
  const unsigned offset = static_cast<unsigned>(bits_ % 64);
  if (offset == 0) {
    words_.push_back(value);
  } else {
    words_.back() |= value << offset;
    if (offset + width > 64) words_.push_back(value >> (64 - offset));
  }
  bits_ += width;
}

void BitString::append(const BitString& other) {
  if (bits_ % 64 == 0) {
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    bits_ += other.bits_;
    return;
  }
  std::size_t left = other.bits_;
  for (std::uint64_t w : other.words_) {
    const unsigned take = left >= 64 ? 64 : static_cast<unsigned>(left);
    append(w, take);
    left -= take;
  }
}

void BitString::append_words(std::span<const std::uint64_t> words) {
  if (bits_ % 64 == 0) {
    words_.insert(words_.end(), words.begin(), words.end());
    bits_ += words.size() * 64;
    return;
  }
  for (std::uint64_t w : words) append(w, 64);
}

std::uint64_t BitString::read(std::size_t offset, unsigned width) const {
  if (width > 64 || offset + width > bits_) throw ContractViolation("BitString::read: out of range");
  if (width == 0) return 0;
  const std::size_t word = offset / 64;
  const unsigned shift = static_cast<unsigned>(offset % 64);
  std::uint64_t v = words_[word] >> shift;
  if (shift != 0 && shift + width > 64) v |= words_[word + 1] << (64 - shift);
  return v & mask(width);
}

std::uint64_t BitReader::get(unsigned width) {
  const std::uint64_t v = bits_->read(offset_, width);
  offset_ += width;
  return v;
}

BitString BitReader::get_bits(std::size_t count) {
  if (count > remaining()) throw ContractViolation("BitReader::get_bits: out of range");
  BitString out;
  out.reserve_bits(count);
  while (count > 0) {
    const unsigned take = count >= 64 ? 64 : static_cast<unsigned>(count);
    out.append(get(take), take);
    count -= take;
  }
  return out;
}

}  // namespace pcheck::sim
