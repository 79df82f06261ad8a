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

#include <cstdint>
#include <string>
#include <vector>

#include "pcheck/common/random.hpp"
#include "pcheck/dataops/types.hpp"

namespace pcheck::exp {

struct Workload {
  enum class Kind : std::uint8_t { kPowerLaw, kUniform };

  Kind kind = Kind::kPowerLaw;
  std::uint64_t distinct = 1'000'000;  // PowerLaw: N, keys are ranks 1..N
  std::uint64_t lo = 0;                // Uniform: inclusive bounds
  std::uint64_t hi = 99'999'999;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const Workload&, const Workload&) = default;
};

Workload power_law(std::uint64_t distinct, std::uint64_t n, std::uint64_t seed);
Workload uniform(std::uint64_t lo, std::uint64_t hi, std::uint64_t n, std::uint64_t seed);

// "powerlaw:<N>" or "uniform:<lo>:<hi>".
Workload parse_workload_kind(const std::string& text, std::uint64_t n, std::uint64_t seed);
std::string describe(const Workload& w);

// Inverse-CDF sampling of rank k with probability 1/(k H_N).
class PowerLawSampler {
 public:
  explicit PowerLawSampler(std::uint64_t distinct);
  std::uint64_t operator()(Rng& rng) const { return draw(uniform_unit(rng)); }
  std::uint64_t distinct() const { return cumulative_.size(); }
  double harmonic() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::uint64_t draw(double unit) const;

  std::vector<double> cumulative_;
};

// n keys dealt round-robin: element i goes to PE i mod p.
ops::Distributed<std::uint64_t> gen_keys(const Workload& w, int p);

// Keys as gen_keys, each paired with a value uniform in [0, 2^32).
ops::Distributed<ops::KeyValue> gen_pairs(const Workload& w, int p);

}  // namespace pcheck::exp
