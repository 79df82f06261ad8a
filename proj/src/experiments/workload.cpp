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
#include "pcheck/experiments/workload.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"

namespace pcheck::exp {
namespace {

const PowerLawSampler& cached_sampler(std::uint64_t distinct) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::unique_ptr<PowerLawSampler>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[distinct];
  if (!slot) slot = std::make_unique<PowerLawSampler>(distinct);
  return *slot;
}

template <class Emit>
void deal(const Workload& w, Emit emit) {
  Rng rng(w.seed);
  if (w.kind == Workload::Kind::kUniform) {
    if (w.lo > w.hi) throw ConfigError("uniform workload: lo > hi");
    for (std::uint64_t i = 0; i < w.n; ++i) emit(i, uniform_between(rng, w.lo, w.hi), rng);
    return;
  }
  if (w.distinct == 0) return;
  const PowerLawSampler& sample = cached_sampler(w.distinct);
  for (std::uint64_t i = 0; i < w.n; ++i) emit(i, sample(rng), rng);
}

std::uint64_t parse_u64(const std::string& text) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument(text);
  return v;
}

}  // namespace

Workload power_law(std::uint64_t distinct, std::uint64_t n, std::uint64_t seed) {
  Workload w;
  w.kind = Workload::Kind::kPowerLaw;
  w.distinct = distinct;
  w.n = n;
  w.seed = seed;
  return w;
}

Workload uniform(std::uint64_t lo, std::uint64_t hi, std::uint64_t n, std::uint64_t seed) {
  Workload w;
  w.kind = Workload::Kind::kUniform;
  w.lo = lo;
  w.hi = hi;
  w.n = n;
  w.seed = seed;
  return w;
}

Workload parse_workload_kind(const std::string& text, std::uint64_t n, std::uint64_t seed) {
  try {
    if (text.rfind("powerlaw:", 0) == 0) return power_law(parse_u64(text.substr(9)), n, seed);
    if (text.rfind("uniform:", 0) == 0) {
      const std::string rest = text.substr(8);
      const auto colon = rest.find(':');
      if (colon != std::string::npos) return uniform(parse_u64(rest.substr(0, colon)), parse_u64(rest.substr(colon + 1)), n, seed);
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("workload must be powerlaw:<N> or uniform:<lo>:<hi>, got '" + text + "'");
}

std::string describe(const Workload& w) {
  if (w.kind == Workload::Kind::kPowerLaw) return "powerlaw:" + std::to_string(w.distinct);
  return "uniform:" + std::to_string(w.lo) + ":" + std::to_string(w.hi);
}

PowerLawSampler::PowerLawSampler(std::uint64_t distinct) : cumulative_(distinct) {
  double total = 0.0;
  for (std::uint64_t k = 1; k <= distinct; ++k) {
    total += 1.0 / static_cast<double>(k);
    cumulative_[k - 1] = total;
  }
}

std::uint64_t PowerLawSampler::draw(double unit) const {
  const double target = unit * harmonic();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto rank = static_cast<std::uint64_t>(it - cumulative_.begin()) + 1;
  return std::min<std::uint64_t>(rank, cumulative_.size());
}

ops::Distributed<std::uint64_t> gen_keys(const Workload& w, int p) {
  if (p < 1) throw ConfigError("gen_keys: need at least one PE");
  ops::Distributed<std::uint64_t> out(static_cast<std::size_t>(p));
  for (auto& part : out) part.reserve(w.n / static_cast<std::uint64_t>(p) + 1);
  deal(w, [&](std::uint64_t i, std::uint64_t key, Rng&) { out[i % static_cast<std::uint64_t>(p)].push_back(key); });
  return out;
}

ops::Distributed<ops::KeyValue> gen_pairs(const Workload& w, int p) {
  if (p < 1) throw ConfigError("gen_pairs: need at least one PE");
  ops::Distributed<ops::KeyValue> out(static_cast<std::size_t>(p));
  for (auto& part : out) part.reserve(w.n / static_cast<std::uint64_t>(p) + 1);
  deal(w, [&](std::uint64_t i, std::uint64_t key, Rng& rng) {
    out[i % static_cast<std::uint64_t>(p)].push_back({key, static_cast<std::int64_t>(rng() >> 32)});
  });
  return out;
}

}  // namespace pcheck::exp
