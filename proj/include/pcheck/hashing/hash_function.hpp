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
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "pcheck/hashing/crc32c.hpp"

namespace pcheck::hashing {

enum class HashFamily : std::uint8_t { kCrc32c, kTab32, kTab64 };

std::string_view to_string(HashFamily family);
std::optional<HashFamily> parse_hash_family(std::string_view name);

// Output width in bits: 32 for CRC-32C and Tab32, 64 for Tab64.
unsigned output_width(HashFamily family);

struct HashSpec {
  HashFamily family = HashFamily::kTab32;
  std::uint64_t seed = 0;

  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

// Concrete evaluators, exposed so hot loops can be instantiated per family
// through HashFunction::visit.
struct Crc32cEval {
  std::uint32_t init_register;
  std::uint64_t operator()(std::uint64_t key) const { return crc32c_word(key, init_register); }
};

struct Tab32Eval {
  const std::uint32_t* tables;  // 4 x 256
  std::uint64_t operator()(std::uint64_t key) const {
    const std::uint32_t x = static_cast<std::uint32_t>(key) ^ static_cast<std::uint32_t>(key >> 32);
    return tables[x & 0xff] ^ tables[256 + ((x >> 8) & 0xff)] ^
           tables[512 + ((x >> 16) & 0xff)] ^ tables[768 + (x >> 24)];
  }
};

struct Tab64Eval {
  const std::uint64_t* tables;  // 8 x 256
  std::uint64_t operator()(std::uint64_t key) const {
    std::uint64_t h = 0;
    for (unsigned i = 0; i < 8; ++i) h ^= tables[256 * i + ((key >> (8 * i)) & 0xff)];
    return h;
  }
};

// An immutable member of a hash family. Copies share their tables.
//
// Tab32 folds the key to 32 bits (low word XOR high word) and looks up its
// four bytes; Tab64 looks up all eight key bytes. Tables are filled from an
// mt19937_64 seeded with the spec seed. CRC-32C ignores the seed.
//
// `evaluation` selects an independent sibling function for callers that need
// more hash bits than one evaluation yields: evaluation 0 is the function
// named by the spec, evaluation e > 0 uses tables drawn from a derived seed
// (for CRC-32C, a derived initial register).
class HashFunction {
 public:
  explicit HashFunction(const HashSpec& spec, unsigned evaluation = 0);

  // Test hook: a tabulation function whose tables are all zero.
  static HashFunction zeroed(HashFamily family);

  std::uint64_t operator()(std::uint64_t key) const {
    switch (spec_.family) {
      case HashFamily::kCrc32c:
        return Crc32cEval{crc_init_}(key);
      case HashFamily::kTab32:
        return Tab32Eval{tab32_->data()}(key);
      case HashFamily::kTab64:
        return Tab64Eval{tab64_->data()}(key);
    }
    return 0;
  }

  // Calls f with the concrete evaluator for this function's family.
  template <class F>
  decltype(auto) visit(F&& f) const {
    switch (spec_.family) {
      case HashFamily::kTab32:
        return f(Tab32Eval{tab32_->data()});
      case HashFamily::kTab64:
        return f(Tab64Eval{tab64_->data()});
      case HashFamily::kCrc32c:
      default:
        return f(Crc32cEval{crc_init_});
    }
  }

  unsigned width() const { return output_width(spec_.family); }
  const HashSpec& spec() const { return spec_; }

 private:
  HashFunction() = default;

  HashSpec spec_;
  std::uint32_t crc_init_ = 0xffffffffu;
  std::shared_ptr<const std::vector<std::uint32_t>> tab32_;
  std::shared_ptr<const std::vector<std::uint64_t>> tab64_;
};

// Hash of a (key, value) pair, used where whole elements are fingerprinted.
// CRC-32C hashes the 16-byte encoding; tabulation XORs a hash of the key with
// an independently seeded hash of the value.
class PairHash {
 public:
  explicit PairHash(const HashSpec& spec, unsigned evaluation = 0);

  std::uint64_t operator()(std::uint64_t key, std::uint64_t value) const {
    if (key_hash_.spec().family == HashFamily::kCrc32c) {
      return crc32c_words(key, value, crc_init_);
    }
    return key_hash_(key) ^ value_hash_(value);
  }

  unsigned width() const { return key_hash_.width(); }

 private:
  HashFunction key_hash_;
  HashFunction value_hash_;
  std::uint32_t crc_init_;
};

// Constructs the function for `spec` and evaluates it once. Prefer a
// HashFunction object when hashing many keys.
std::uint64_t eval_hash(const HashSpec& spec, std::uint64_t key);

}  // namespace pcheck::hashing
