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
#include <algorithm>
#include <array>
#include <cmath>

#include "pcheck/checkers/checkers.hpp"
#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"
#include "perm_engine.hpp"
#include "wire.hpp"

namespace pcheck::check {
namespace detail {

PermEngine::PermEngine(const PermCheckConfig& config, unsigned groups)
    : config_(config), groups_(groups) {
  config_.validate();
  per_eval_ = hashing::output_width(config_.hash.family) / config_.bits;
  evaluations_ = (config_.iterations + per_eval_ - 1) / per_eval_;
  lambda_.assign(static_cast<std::size_t>(groups_) * config_.iterations, 0);
}

void PermEngine::add_words(std::span<const std::uint64_t> items, unsigned group, bool output_side) {
  for (unsigned e = 0; e < evaluations_; ++e) {
    hashing::HashFunction(config_.hash, e).visit([&](auto eval) {
      for (std::uint64_t x : items) accumulate(eval(x), e, group, output_side);
    });
  }
}

void PermEngine::add_pairs(std::span<const ops::KeyValue> items, unsigned group, bool output_side) {
  for (unsigned e = 0; e < evaluations_; ++e) {
    const hashing::PairHash h(config_.hash, e);
    for (const auto& kv : items) accumulate(h(kv.key, static_cast<std::uint64_t>(kv.value)), e, group, output_side);
  }
}

void PermEngine::append(SlotLayout& layout, std::vector<std::uint64_t>& values) const {
  layout.add({config_.bits, SlotOp::kAddPow2}, lambda_.size());
  for (std::uint64_t l : lambda_) values.push_back(l & hashing::low_bits_mask(config_.bits));
}

std::optional<VerdictDetail> PermEngine::mismatch(std::span<const std::uint64_t> reduced) const {
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    if (reduced[i] != 0) {
      VerdictDetail d;
      d.reason = Reason::kFingerprintMismatch;
      d.iteration = static_cast<unsigned>(i % config_.iterations);
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace detail

Verdict check_permutation_hash(Communicator& comm, std::span<const std::uint64_t> e, std::span<const std::uint64_t> o,
                               const PermCheckConfig& config) {
  detail::PermEngine engine(config, 1);
  engine.add_words(e, 0, false);
  engine.add_words(o, 0, true);
  detail::SlotLayout layout;
  std::vector<std::uint64_t> values;
  engine.append(layout, values);
  const auto reduced = layout.unpack(comm.all_reduce(layout.pack(values), layout.combiner()));
  const auto failure = engine.mismatch(reduced);
  return failure ? Verdict::reject(*failure) : Verdict::accept();
}

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = detail::mul_mod(result, base, m);
    base = detail::mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s && composite; ++i) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t choose_prime(std::uint64_t bound) {
  if (bound < kMersenne61) return kMersenne61;
  for (std::uint64_t candidate = bound + 1; candidate > bound; ++candidate) {
    if (is_prime(candidate)) return candidate;
  }
  throw ConfigError("no 64-bit prime above the polynomial checker bound");
}

std::uint64_t poly_fingerprint(std::span<const std::uint64_t> xs, std::uint64_t z, std::uint64_t r) {
  std::uint64_t product = 1 % r;
  for (std::uint64_t x : xs) {
    if (x >= r) throw ContractViolation("polynomial checker: element not below the prime");
    product = detail::mul_mod(product, z >= x ? z - x : z + (r - x), r);
  }
  return product;
}

Verdict check_permutation_poly(Communicator& comm, std::span<const std::uint64_t> e, std::span<const std::uint64_t> o,
                               const PolyCheckConfig& config) {
  config.validate();
  // Round 1: global sizes and the largest element.
  detail::SlotLayout sizes;
  sizes.add({64, detail::SlotOp::kAddPow2}, 2);
  sizes.add({64, detail::SlotOp::kMin});  // stores ~max
  std::uint64_t largest = 0;
  for (std::uint64_t x : e) largest = std::max(largest, x);
  for (std::uint64_t x : o) largest = std::max(largest, x);
  const std::array<std::uint64_t, 3> mine{e.size(), o.size(), ~largest};
  const auto global = sizes.unpack(comm.all_reduce(sizes.pack(mine), sizes.combiner()));
  const std::uint64_t n = global[0];
  largest = ~global[2];
  if (n != global[1]) {
    VerdictDetail d;
    d.reason = Reason::kLengthMismatch;
    return Verdict::reject(d);
  }

  std::uint64_t r = 0;
  if (config.prime_override) {
    r = *config.prime_override;
    if (largest >= r) throw ContractViolation("polynomial checker: element not below the prime");
  } else {
    const double scaled = std::ceil(static_cast<double>(n) / config.delta);
    if (scaled >= 1.8e19) throw ConfigError("polynomial checker: n / delta exceeds 64 bits");
    r = choose_prime(std::max(static_cast<std::uint64_t>(scaled), largest));
  }

  // Round 2: PE 0 draws z.
  std::uint64_t z = 0;
  if (comm.rank() == 0) {
    Rng rng(config.seed);
    z = config.z_override ? *config.z_override % r : uniform_below(rng, r);
  }
  z = comm.broadcast(sim::BitString::from_value(z)).read(0, 64);

  // Round 3: both products.
  detail::SlotLayout products;
  products.add({64, detail::SlotOp::kMulMod, r}, 2);
  const std::array<std::uint64_t, 2> local{poly_fingerprint(e, z, r), poly_fingerprint(o, z, r)};
  const auto prod = products.unpack(comm.all_reduce(products.pack(local), products.combiner()));
  if (prod[0] == prod[1]) return Verdict::accept();
  VerdictDetail d;
  d.reason = Reason::kPolyMismatch;
  return Verdict::reject(d);
}

}  // namespace pcheck::check
