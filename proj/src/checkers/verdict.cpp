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
#include "pcheck/checkers/verdict.hpp"

namespace pcheck::check {

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::kTableMismatch: return "table-mismatch";
    case Reason::kFingerprintMismatch: return "fingerprint-mismatch";
    case Reason::kPolyMismatch: return "poly-mismatch";
    case Reason::kLengthMismatch: return "length-mismatch";
    case Reason::kNotLocallySorted: return "not-locally-sorted";
    case Reason::kBoundaryOrder: return "boundary-order";
    case Reason::kOwnership: return "ownership";
    case Reason::kMissingKey: return "missing-key";
    case Reason::kBelowMinimum: return "below-minimum";
    case Reason::kUncoveredKey: return "uncovered-key";
    case Reason::kPhantomCertificate: return "phantom-certificate";
    case Reason::kReplicaMismatch: return "replica-mismatch";
    case Reason::kNonIntegralSum: return "non-integral-sum";
    case Reason::kMalformedAssertion: return "malformed-assertion";
  }
  return "unknown";
}

std::string describe(const Verdict& verdict) {
  if (verdict.accepted) return "accept";
  std::string out = "reject(";
  if (!verdict.detail) return out + "?)";
  const VerdictDetail& d = *verdict.detail;
  out += to_string(d.reason);
  if (d.iteration) out += ", iteration " + std::to_string(*d.iteration);
  if (d.bucket) out += ", bucket " + std::to_string(*d.bucket);
  if (d.pe) out += ", pe " + std::to_string(*d.pe);
  return out + ")";
}

}  // namespace pcheck::check
