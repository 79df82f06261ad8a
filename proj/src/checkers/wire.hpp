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

// Internal helpers shared by the checkers: fixed-width slot vectors with
// per-slot combine rules, and the 64-bit failure word.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcheck/checkers/verdict.hpp"
#include "pcheck/simnet/communicator.hpp"

namespace pcheck::check::detail {

enum class SlotOp : std::uint8_t {
  kAddPow2,  // addition mod 2^width
  kAddMod,   // addition mod modulus (operands already reduced)
  kMulMod,   // multiplication mod modulus
  kMin,
  kOr,
};

struct Slot {
  unsigned width;
  SlotOp op;
  std::uint64_t modulus = 0;
};

class SlotLayout {
 public:
  std::size_t add(Slot slot, std::size_t count = 1);  // index of the first added slot
  std::size_t size() const { return slots_.size(); }
  std::size_t bits() const { return bits_; }

  sim::BitString pack(std::span<const std::uint64_t> values) const;
  std::vector<std::uint64_t> unpack(const sim::BitString& bits) const;
  sim::Combiner combiner() const;

 private:
  std::vector<Slot> slots_;
  std::size_t bits_ = 0;
};

// Failure words order failures by (reason, pe, iteration, bucket); the
// all-ones word means "no failure", so unsigned minimum picks a canonical
// failure.
inline constexpr std::uint64_t kNoFailure = ~std::uint64_t{0};
std::uint64_t encode_failure(const std::optional<VerdictDetail>& detail);
std::optional<VerdictDetail> decode_failure(std::uint64_t word);

VerdictDetail local_failure(Reason reason, const sim::Communicator& comm);

// All PEs learn the canonical failure among the local ones.
Verdict agree(sim::Communicator& comm, const std::optional<VerdictDetail>& local);

// The verdict held at PE 0, broadcast to every PE.
Verdict broadcast_verdict(sim::Communicator& comm, const Verdict& at_root);

inline Verdict from_failure(std::uint64_t word) {
  const auto detail = decode_failure(word);
  return detail ? Verdict::reject(*detail) : Verdict::accept();
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

// 122-bit digest of a bit string: two polynomial hashes mod 2^61 - 1.
struct Digest {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  friend bool operator==(const Digest&, const Digest&) = default;
};
Digest replica_digest(const sim::BitString& bits, std::uint64_t seed);

// Replica check folded into a later collective: PE 0's digest is broadcast
// and the returned failure (if any) is this PE's mismatch.
std::optional<VerdictDetail> replica_mismatch(sim::Communicator& comm, const sim::BitString& local_copy,
                                              std::uint64_t seed);

}  // namespace pcheck::check::detail
