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
#include "pcheck/hashing/hash_function.hpp"

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"

namespace pcheck::hashing {
namespace {

// Stream tags for derived seeds.
constexpr std::uint64_t kEvaluationStream = 0x6576616c;
constexpr std::uint64_t kValueStream = 0x76616c75;

std::uint64_t evaluation_seed(std::uint64_t seed, unsigned evaluation) {
  return evaluation == 0 ? seed : derive_seed(seed, kEvaluationStream + evaluation);
}

}  // namespace

std::string_view to_string(HashFamily family) {
  switch (family) {
    case HashFamily::kCrc32c:
      return "crc";
    case HashFamily::kTab32:
      return "tab";
    case HashFamily::kTab64:
      return "tab64";
  }
  return "?";
}

std::optional<HashFamily> parse_hash_family(std::string_view name) {
  if (name == "crc") return HashFamily::kCrc32c;
  if (name == "tab") return HashFamily::kTab32;
  if (name == "tab64") return HashFamily::kTab64;
  return std::nullopt;
}

unsigned output_width(HashFamily family) { return family == HashFamily::kTab64 ? 64 : 32; }

HashFunction::HashFunction(const HashSpec& spec, unsigned evaluation) : spec_(spec) {
  const std::uint64_t seed = evaluation_seed(spec.seed, evaluation);
  switch (spec.family) {
    case HashFamily::kCrc32c:
      crc_init_ = evaluation == 0 ? 0xffffffffu : static_cast<std::uint32_t>(seed);
      break;
    case HashFamily::kTab32: {
      Rng rng(seed);
      auto tables = std::make_shared<std::vector<std::uint32_t>>(4 * 256);
      for (auto& entry : *tables) entry = static_cast<std::uint32_t>(rng() >> 32);
      tab32_ = std::move(tables);
      break;
    }
    case HashFamily::kTab64: {
      Rng rng(seed);
      auto tables = std::make_shared<std::vector<std::uint64_t>>(8 * 256);
      for (auto& entry : *tables) entry = rng();
      tab64_ = std::move(tables);
      break;
    }
  }
}

HashFunction HashFunction::zeroed(HashFamily family) {
  HashFunction h;
  h.spec_ = HashSpec{family, 0};
  switch (family) {
    case HashFamily::kTab32:
      h.tab32_ = std::make_shared<std::vector<std::uint32_t>>(4 * 256, 0);
      break;
    case HashFamily::kTab64:
      h.tab64_ = std::make_shared<std::vector<std::uint64_t>>(8 * 256, 0);
      break;
    case HashFamily::kCrc32c:
      throw ConfigError("zeroed tables exist only for tabulation families");
  }
  return h;
}

PairHash::PairHash(const HashSpec& spec, unsigned evaluation)
    : key_hash_(spec, evaluation),
      value_hash_(HashSpec{spec.family, derive_seed(spec.seed, kValueStream)}, evaluation),
      crc_init_(evaluation == 0 ? 0xffffffffu
                                : static_cast<std::uint32_t>(evaluation_seed(spec.seed, evaluation))) {}

std::uint64_t eval_hash(const HashSpec& spec, std::uint64_t key) { return HashFunction(spec)(key); }

}  // namespace pcheck::hashing
