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
#include "pcheck/checkers/config.hpp"

#include <bit>
#include <charconv>
#include <cmath>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"
#include "pcheck/hashing/slicing.hpp"

namespace pcheck::check {
namespace {

constexpr std::uint64_t kMaxRhat = std::uint64_t{1} << 62;

// Parses a decimal prefix of text and advances it.
std::optional<std::uint64_t> take_number(std::string_view& text) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end == text.data()) return std::nullopt;
  text.remove_prefix(static_cast<std::size_t>(end - text.data()));
  return value;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
  throw ConfigError(std::string(what) + ": '" + std::string(text) + "'");
}

}  // namespace

void SumCheckConfig::validate() const {
  if (iterations < 1) throw ConfigError("sum checker: iterations must be >= 1");
  if (d < 2) throw ConfigError("sum checker: d must be >= 2");
  if (rhat < d) throw ConfigError("sum checker: rhat must be >= d");
  if (rhat > kMaxRhat) throw ConfigError("sum checker: rhat must be <= 2^62");
  if (hashing::bits_for_buckets(d) > hashing::output_width(hash.family)) {
    throw ConfigError("sum checker: d exceeds the hash width");
  }
}

unsigned SumCheckConfig::residue_width() const { return hashing::bits_for_buckets(2 * rhat); }

std::uint64_t SumCheckConfig::payload_bits() const {
  return std::uint64_t{iterations} * d * residue_width();
}

double SumCheckConfig::failure_bound() const {
  return std::pow(1.0 / static_cast<double>(rhat) + 1.0 / d, iterations);
}

std::string to_string(const SumCheckConfig& config) {
  std::string out = std::to_string(config.iterations) + "x" + std::to_string(config.d);
  if (std::has_single_bit(config.rhat)) {
    out += "m" + std::to_string(std::countr_zero(config.rhat));
  } else {
    out += "r" + std::to_string(config.rhat);
  }
  return out + "-" + std::string(hashing::to_string(config.hash.family));
}

SumCheckConfig parse_sum_config(std::string_view text, std::uint64_t hash_seed, std::uint64_t modulus_seed) {
  std::string_view rest = text;
  SumCheckConfig config;
  config.hash.seed = hash_seed;
  config.modulus_seed = modulus_seed;
  const auto its = take_number(rest);
  if (!its || rest.empty() || rest.front() != 'x') bad("expected <its>x<d>", text);
  rest.remove_prefix(1);
  const auto d = take_number(rest);
  if (!d || *d > UINT32_MAX) bad("expected bucket count", text);
  if (!rest.empty() && (rest.front() == 'm' || rest.front() == 'r')) {
    const bool log_form = rest.front() == 'm';
    rest.remove_prefix(1);
    const auto value = take_number(rest);
    if (!value) bad("expected modulus parameter", text);
    if (log_form) {
      if (*value > 62) bad("log2 rhat above 62", text);
      config.rhat = std::uint64_t{1} << *value;
    } else {
      config.rhat = *value;
    }
  }
  if (rest.empty() || rest.front() != '-') bad("expected -<hash>", text);
  rest.remove_prefix(1);
  const auto family = hashing::parse_hash_family(rest);
  if (!family) bad("unknown hash family", text);
  if (*its > 4096) bad("too many iterations", text);
  config.iterations = static_cast<unsigned>(*its);
  config.d = static_cast<std::uint32_t>(*d);
  config.hash.family = *family;
  config.validate();
  return config;
}

std::vector<std::uint64_t> draw_moduli(const SumCheckConfig& config) {
  Rng rng(config.modulus_seed);
  std::vector<std::uint64_t> moduli(config.iterations);
  for (auto& r : moduli) r = uniform_between(rng, config.rhat + 1, 2 * config.rhat);
  return moduli;
}

void PermCheckConfig::validate() const {
  if (bits < 1 || bits > 64) throw ConfigError("permutation checker: bits must be in 1..64");
  if (iterations < 1) throw ConfigError("permutation checker: iterations must be >= 1");
  if (bits > hashing::output_width(hash.family)) {
    throw ConfigError("permutation checker: bits exceed the hash width");
  }
}

double PermCheckConfig::failure_bound() const { return std::exp2(-static_cast<double>(bits) * iterations); }

std::string to_string(const PermCheckConfig& config) {
  std::string out = config.iterations > 1 ? std::to_string(config.iterations) + "x" : "";
  return out + std::string(hashing::to_string(config.hash.family)) + std::to_string(config.bits);
}

PermCheckConfig parse_perm_config(std::string_view text, std::uint64_t hash_seed) {
  std::string_view rest = text;
  PermCheckConfig config;
  config.hash.seed = hash_seed;
  if (const auto x = rest.find('x'); x != std::string_view::npos) {
    std::string_view head = rest.substr(0, x);
    const auto its = take_number(head);
    if (!its || !head.empty() || *its < 1 || *its > 4096) bad("expected <its>x", text);
    config.iterations = static_cast<unsigned>(*its);
    rest.remove_prefix(x + 1);
  }
  std::optional<hashing::HashFamily> family;
  for (std::string_view name : {"tab64", "tab", "crc"}) {
    if (rest.size() > name.size() && rest.starts_with(name) &&
        rest[name.size()] >= '0' && rest[name.size()] <= '9') {
      family = hashing::parse_hash_family(name);
      rest.remove_prefix(name.size());
      break;
    }
  }
  if (!family) bad("expected <hash><bits>", text);
  const auto bits = take_number(rest);
  if (!bits || !rest.empty() || *bits > 64) bad("expected bit count", text);
  config.hash.family = *family;
  config.bits = static_cast<unsigned>(*bits);
  config.validate();
  return config;
}

void PolyCheckConfig::validate() const {
  if (!(delta > 0 && delta < 1)) throw ConfigError("polynomial checker: delta must be in (0, 1)");
}

}  // namespace pcheck::check
