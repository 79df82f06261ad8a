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
#include <optional>
#include <string>
#include <string_view>

namespace pcheck::check {

enum class Reason : std::uint8_t {
  kTableMismatch,
  kFingerprintMismatch,
  kPolyMismatch,
  kLengthMismatch,
  kNotLocallySorted,
  kBoundaryOrder,
  kOwnership,
  kMissingKey,
  kBelowMinimum,
  kUncoveredKey,
  kPhantomCertificate,
  kReplicaMismatch,
  kNonIntegralSum,
  kMalformedAssertion,
};

std::string_view to_string(Reason reason);

struct VerdictDetail {
  Reason reason = Reason::kTableMismatch;
  std::optional<unsigned> iteration;
  std::optional<std::uint32_t> bucket;
  std::optional<int> pe;

  friend bool operator==(const VerdictDetail&, const VerdictDetail&) = default;
};

// Every PE of a checker run returns the same verdict.
struct Verdict {
  bool accepted = true;
  std::optional<VerdictDetail> detail;  // set iff rejected

  static Verdict accept() { return {}; }
  static Verdict reject(VerdictDetail detail) { return {false, detail}; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// "accept" or e.g. "reject(table-mismatch, iteration 2, bucket 5)".
std::string describe(const Verdict& verdict);

}  // namespace pcheck::check
