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
#include <unordered_map>

#include "pcheck/checkers/checkers.hpp"
#include "pcheck/dataops/codec.hpp"
#include "wire.hpp"

namespace pcheck::check {

namespace {

std::optional<Reason> local_min_checks(const Communicator& comm, std::span<const ops::KeyValue> input,
                                       const ops::MinResult& asserted) {
  std::unordered_map<std::uint64_t, std::int64_t> minimum;
  minimum.reserve(asserted.minima.size());
  for (const auto& m : asserted.minima) {
    if (!minimum.emplace(m.key, m.value).second) return Reason::kMalformedAssertion;
  }

  // Certificate keys must be exactly the output keys, each with the
  // asserted minimum, naming an existing PE.
  std::unordered_map<std::uint64_t, std::int64_t> mine;  // entries this PE must witness
  std::size_t covered = 0;
  {
    std::unordered_map<std::uint64_t, bool> seen;
    seen.reserve(asserted.certificate.size());
    for (const auto& c : asserted.certificate) {
      const auto it = minimum.find(c.key);
      if (it == minimum.end() || it->second != c.min_value || !seen.emplace(c.key, true).second ||
          c.owner_pe >= static_cast<std::uint32_t>(comm.size())) {
        return Reason::kPhantomCertificate;
      }
      ++covered;
      if (c.owner_pe == static_cast<std::uint32_t>(comm.rank())) mine.emplace(c.key, c.min_value);
    }
  }
  if (covered != minimum.size()) return Reason::kUncoveredKey;

  for (const auto& e : input) {
    const auto it = minimum.find(e.key);
    if (it == minimum.end()) return Reason::kMissingKey;
    if (e.value < it->second) return Reason::kBelowMinimum;
    if (const auto w = mine.find(e.key); w != mine.end() && w->second == e.value) {
      mine.erase(w);
    }
  }
  if (!mine.empty()) return Reason::kPhantomCertificate;
  return std::nullopt;
}

}  // namespace

Verdict check_min(Communicator& comm, std::span<const ops::KeyValue> input, const ops::MinResult& asserted,
                  const hashing::HashSpec& replica_hash) {
  sim::BitString replica = ops::encode_records(asserted.minima);
  replica.append(ops::encode_records(asserted.certificate));
  std::optional<VerdictDetail> failure = detail::replica_mismatch(comm, replica, replica_hash.seed);
  if (!failure) {
    if (const auto reason = local_min_checks(comm, input, asserted)) failure = detail::local_failure(*reason, comm);
  }
  return detail::agree(comm, failure);
}

}  // namespace pcheck::check
