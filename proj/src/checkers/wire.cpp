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
#include "wire.hpp"

#include <algorithm>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"
#include "pcheck/hashing/slicing.hpp"

namespace pcheck::check::detail {

using hashing::low_bits_mask;
using sim::BitString;

std::size_t SlotLayout::add(Slot slot, std::size_t count) {
  if (slot.width < 1 || slot.width > 64) throw ContractViolation("slot width must be in 1..64");
  const std::size_t first = slots_.size();
  slots_.insert(slots_.end(), count, slot);
  bits_ += count * slot.width;
  return first;
}

BitString SlotLayout::pack(std::span<const std::uint64_t> values) const {
  if (values.size() != slots_.size()) throw ContractViolation("slot count mismatch");
  BitString out;
  out.reserve_bits(bits_);
  for (std::size_t i = 0; i < slots_.size(); ++i) out.append(values[i], slots_[i].width);
  return out;
}

std::vector<std::uint64_t> SlotLayout::unpack(const BitString& bits) const {
  if (bits.size() != bits_) throw ContractViolation("slot payload has the wrong length");
  std::vector<std::uint64_t> values(slots_.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    values[i] = bits.read(offset, slots_[i].width);
    offset += slots_[i].width;
  }
  return values;
}

sim::Combiner SlotLayout::combiner() const {
  return [layout = *this](const BitString& lower, const BitString& upper) {
    auto a = layout.unpack(lower);
    const auto b = layout.unpack(upper);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Slot& s = layout.slots_[i];
      switch (s.op) {
        case SlotOp::kAddPow2:
          a[i] = (a[i] + b[i]) & low_bits_mask(s.width);
          break;
        case SlotOp::kAddMod:
          a[i] = a[i] >= s.modulus - b[i] ? a[i] - (s.modulus - b[i]) : a[i] + b[i];
          break;
        case SlotOp::kMulMod:
          a[i] = mul_mod(a[i], b[i], s.modulus);
          break;
        case SlotOp::kMin:
          a[i] = std::min(a[i], b[i]);
          break;
        case SlotOp::kOr:
          a[i] |= b[i];
          break;
      }
    }
    return layout.pack(a);
  };
}

// Layout, most significant first: reason 8 | pe 20 | iteration 12 | bucket 24.
// Absent fields and out-of-range values are all ones.
std::uint64_t encode_failure(const std::optional<VerdictDetail>& detail) {
  if (!detail) return kNoFailure;
  auto field = [](auto value, unsigned width) -> std::uint64_t {
    const std::uint64_t none = low_bits_mask(width);
    if (!value) return none;
    const auto v = static_cast<std::uint64_t>(*value);
    return v < none ? v : none;
  };
  return (std::uint64_t{static_cast<std::uint8_t>(detail->reason)} << 56) | (field(detail->pe, 20) << 36) |
         (field(detail->iteration, 12) << 24) | field(detail->bucket, 24);
}

std::optional<VerdictDetail> decode_failure(std::uint64_t word) {
  if (word == kNoFailure) return std::nullopt;
  VerdictDetail d;
  d.reason = static_cast<Reason>(word >> 56);
  const std::uint64_t pe = (word >> 36) & low_bits_mask(20);
  const std::uint64_t it = (word >> 24) & low_bits_mask(12);
  const std::uint64_t bucket = word & low_bits_mask(24);
  if (pe != low_bits_mask(20)) d.pe = static_cast<int>(pe);
  if (it != low_bits_mask(12)) d.iteration = static_cast<unsigned>(it);
  if (bucket != low_bits_mask(24)) d.bucket = static_cast<std::uint32_t>(bucket);
  return d;
}

VerdictDetail local_failure(Reason reason, const sim::Communicator& comm) {
  VerdictDetail d;
  d.reason = reason;
  d.pe = comm.rank();
  return d;
}

Verdict agree(sim::Communicator& comm, const std::optional<VerdictDetail>& local) {
  const BitString word = comm.all_reduce(BitString::from_value(encode_failure(local)), sim::combiners::min_unsigned(64));
  return from_failure(word.read(0, 64));
}

Verdict broadcast_verdict(sim::Communicator& comm, const Verdict& at_root) {
  const std::uint64_t word = at_root.accepted ? kNoFailure : encode_failure(at_root.detail);
  return from_failure(comm.broadcast(BitString::from_value(word)).read(0, 64));
}

namespace {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod61(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 x = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(x & kMersenne61) + static_cast<std::uint64_t>(x >> 61);
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

std::uint64_t add_mod61(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

// Horner over 32-bit limbs (each < 2^61 - 1) followed by the bit length.
std::uint64_t poly_hash61(const BitString& bits, std::uint64_t base) {
  std::uint64_t h = 0;
  for (std::uint64_t w : bits.words()) {
    h = add_mod61(mul_mod61(h, base), w & 0xffffffffu);
    h = add_mod61(mul_mod61(h, base), w >> 32);
  }
  return add_mod61(mul_mod61(h, base), bits.size() % kMersenne61);
}

}  // namespace

Digest replica_digest(const BitString& bits, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x7265706c));
  const std::uint64_t base_a = uniform_between(rng, 2, kMersenne61 - 2);
  const std::uint64_t base_b = uniform_between(rng, 2, kMersenne61 - 2);
  return {poly_hash61(bits, base_a), poly_hash61(bits, base_b)};
}

std::optional<VerdictDetail> replica_mismatch(sim::Communicator& comm, const BitString& local_copy,
                                              std::uint64_t seed) {
  const Digest mine = replica_digest(local_copy, seed);
  BitString packed;
  packed.append(mine.a, 61);
  packed.append(mine.b, 61);
  const BitString root = comm.broadcast(packed);
  const Digest theirs{root.read(0, 61), root.read(61, 61)};
  if (theirs == mine) return std::nullopt;
  return local_failure(Reason::kReplicaMismatch, comm);
}

}  // namespace pcheck::check::detail
