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
#include "pcheck/tuner/tuner.hpp"

#include <bit>
#include <tuple>

#include "pcheck/common/error.hpp"
#include "pcheck/hashing/slicing.hpp"

namespace pcheck::tune {
namespace {

long double per_iteration(std::uint32_t d, std::uint64_t rhat) {
  return 1.0L / static_cast<long double>(rhat) + 1.0L / static_cast<long double>(d);
}

unsigned residue_bits(std::uint64_t rhat) { return hashing::bits_for_buckets(2 * rhat); }

}  // namespace

unsigned TuneResult::log2_rhat() const { return static_cast<unsigned>(std::countr_zero(rhat)); }

double achieved_delta(std::uint32_t d, std::uint64_t rhat, unsigned iterations) {
  if (d < 2 || rhat < d || iterations < 1) throw ConfigError("achieved_delta: need d >= 2, rhat >= d, iterations >= 1");
  const long double q = per_iteration(d, rhat);
  long double p = 1.0L;
  for (unsigned i = 0; i < iterations; ++i) p *= q;
  return static_cast<double>(p);
}

unsigned iterations_needed(std::uint32_t d, std::uint64_t rhat, double delta) {
  if (d == 0 || rhat == 0) throw ConfigError("iterations_needed: d and rhat must be positive");
  const long double q = per_iteration(d, rhat);
  if (q >= 1.0L) throw ConfigError("iterations_needed: 1/rhat + 1/d must be below 1");
  if (!(delta > 0)) throw ConfigError("iterations_needed: delta must be positive");
  unsigned t = 1;
  for (long double p = q; p > static_cast<long double>(delta); p *= q) ++t;
  return t;
}

std::uint64_t payload_bits(std::uint32_t d, std::uint64_t rhat, unsigned iterations) {
  return std::uint64_t{d} * residue_bits(rhat) * iterations;
}

std::optional<TuneResult> optimize(std::uint64_t budget_bits, double delta) {
  if (budget_bits < 8) throw ConfigError("optimize: budget must be at least 8 bits");
  if (!(delta > 0 && delta < 1)) throw ConfigError("optimize: delta must lie in (0, 1)");
  std::optional<TuneResult> best;
  auto key = [](const TuneResult& r) { return std::tuple(r.iterations, r.achieved_delta, r.payload_bits); };
  for (unsigned l = 1; l <= kMaxLog2Rhat; ++l) {
    const std::uint64_t rhat = std::uint64_t{1} << l;
    const unsigned w = residue_bits(rhat);
    for (std::uint64_t d = 2; d <= rhat && d <= budget_bits; ++d) {
      if (d * w > budget_bits) break;
      if (per_iteration(static_cast<std::uint32_t>(d), rhat) >= 1.0L) continue;
      const auto dd = static_cast<std::uint32_t>(d);
      const unsigned t = iterations_needed(dd, rhat, delta);
      const std::uint64_t bits = payload_bits(dd, rhat, t);
      if (bits > budget_bits) continue;
      const TuneResult candidate{dd, rhat, t, achieved_delta(dd, rhat, t), bits};
      if (!best || key(candidate) < key(*best)) best = candidate;
    }
  }
  return best;
}

const std::vector<TableRow>& published_table() {
  static const std::vector<TableRow> rows = [] {
    struct Raw {
      std::uint64_t b;
      double delta;
      std::uint32_t d;
      unsigned log2_rhat, its;
      double achieved;
    };
    const Raw raw[] = {
        {1024, 1e-4, 37, 8, 3, 3.0e-5},      {1024, 1e-6, 25, 7, 5, 2.5e-7},      {1024, 1e-8, 18, 7, 7, 4.1e-9},
        {1024, 1e-10, 14, 6, 10, 2.5e-11},   {1024, 1e-20, 6, 4, 32, 3.3e-21},    {4096, 1e-6, 124, 10, 3, 7.4e-7},
        {4096, 1e-10, 68, 9, 6, 2.1e-11},    {4096, 1e-20, 32, 8, 14, 4.4e-21},   {16384, 1e-7, 420, 12, 3, 1.8e-8},
        {16384, 1e-10, 273, 11, 5, 1.2e-12}, {16384, 1e-20, 148, 10, 10, 7.6e-22}, {16384, 1e-30, 93, 10, 16, 1.3e-31},
        {65536, 1e-10, 1170, 13, 4, 9.1e-13}, {65536, 1e-20, 630, 12, 8, 1.3e-22}, {65536, 1e-30, 420, 12, 12, 1.1e-31},
        {65536, 1e-40, 321, 11, 17, 2.9e-42}};
    std::vector<TableRow> out;
    for (const Raw& r : raw) {
      const std::uint64_t rhat = std::uint64_t{1} << r.log2_rhat;
      out.push_back({r.b, r.delta, {r.d, rhat, r.its, r.achieved, payload_bits(r.d, rhat, r.its)}});
    }
    return out;
  }();
  return rows;
}

}  // namespace pcheck::tune
