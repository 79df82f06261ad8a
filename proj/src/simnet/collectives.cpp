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
#include <bit>
#include <string>

#include "pcheck/common/error.hpp"
#include "pcheck/simnet/communicator.hpp"

namespace pcheck::sim {
namespace {

void check_width(const BitString& mine, const BitString& theirs, int self, int from) {
  if (mine.size() != theirs.size()) {
    throw ContractViolation("collective width mismatch: PE " + std::to_string(self) + " holds " +
                            std::to_string(mine.size()) + " bits, PE " + std::to_string(from) + " sent " +
                            std::to_string(theirs.size()));
  }
}

bool is_power_of_two(int p) { return std::has_single_bit(static_cast<unsigned>(p)); }

}  // namespace

std::optional<BitString> Communicator::reduce(const BitString& value, const Combiner& op, int root,
                                              WidthPolicy widths) {
  const int p = size_;
  if (root < 0 || root >= p) throw ContractViolation("reduce: invalid root");
  const int relrank = (rank_ - root + p) % p;
  BitString acc = value;
  for (int mask = 1; mask < p; mask <<= 1) {
    if ((relrank & mask) == 0) {
      const int src = relrank | mask;
      if (src < p) {
        const int from = (src + root) % p;
        BitString in = recv(from);
        if (widths == WidthPolicy::kFixed) check_width(acc, in, rank_, from);
        acc = op(acc, in);
      }
    } else {
      send(((relrank & ~mask) + root) % p, std::move(acc));
      return std::nullopt;
    }
  }
  return acc;
}

BitString Communicator::broadcast(const BitString& value, int root) {
  const int p = size_;
  if (root < 0 || root >= p) throw ContractViolation("broadcast: invalid root");
  const int relrank = (rank_ - root + p) % p;
  BitString v;
  if (relrank == 0) v = value;
  int mask = 1;
  while (mask < p) {
    if (relrank & mask) {
      v = recv((relrank - mask + root) % p);
      break;
    }
    mask <<= 1;
  }
  for (mask >>= 1; mask > 0; mask >>= 1) {
    if (relrank + mask < p) send((relrank + mask + root) % p, v);
  }
  return v;
}

BitString Communicator::all_reduce(const BitString& value, const Combiner& op) {
  const int p = size_;
  if (!is_power_of_two(p)) {
    std::optional<BitString> folded = reduce(value, op, 0);
    return broadcast(folded ? *folded : BitString{}, 0);
  }
  BitString acc = value;
  for (int mask = 1; mask < p; mask <<= 1) {
    const int partner = rank_ ^ mask;
    send(partner, acc);
    BitString in = recv(partner);
    check_width(acc, in, rank_, partner);
    acc = rank_ < partner ? op(acc, in) : op(in, acc);
  }
  return acc;
}

bool Communicator::gather_bool_or(bool flag) {
  return all_reduce(BitString::from_value(flag ? 1 : 0, 1), combiners::bit_or()).read(0, 1) != 0;
}

std::uint64_t Communicator::exclusive_prefix_sum(std::uint64_t count) {
  std::uint64_t inclusive = count;
  for (int dist = 1; dist < size_; dist <<= 1) {
    if (rank_ + dist < size_) send(rank_ + dist, BitString::from_value(inclusive));
    if (rank_ - dist >= 0) inclusive += recv(rank_ - dist).read(0, 64);
  }
  return inclusive - count;
}

std::optional<BitString> Communicator::exclusive_scan(const BitString& value, const Combiner& op,
                                                      ScanDirection direction) {
  // Hillis-Steele dissemination on positions; position 0 is the first PE in
  // scan order.
  const bool forward = direction == ScanDirection::kForward;
  const int pos = forward ? rank_ : size_ - 1 - rank_;
  auto rank_of = [&](int position) { return forward ? position : size_ - 1 - position; };
  BitString window = value;
  std::optional<BitString> prefix;
  for (int dist = 1; dist < size_; dist <<= 1) {
    if (pos + dist < size_) send(rank_of(pos + dist), window);
    if (pos - dist >= 0) {
      BitString in = recv(rank_of(pos - dist));
      prefix = prefix ? op(in, *prefix) : in;
      window = op(in, window);
    }
  }
  return prefix;
}

std::vector<BitString> Communicator::all_to_all(std::vector<BitString> outgoing) {
  const int p = size_;
  if (outgoing.size() != static_cast<std::size_t>(p)) throw ContractViolation("all_to_all: need one slot per PE");
  std::vector<BitString> incoming(static_cast<std::size_t>(p));
  incoming[static_cast<std::size_t>(rank_)] = std::move(outgoing[static_cast<std::size_t>(rank_)]);
  const bool xor_schedule = is_power_of_two(p);
  for (int j = 1; j < p; ++j) {
    const int to = xor_schedule ? rank_ ^ j : (rank_ + j) % p;
    const int from = xor_schedule ? rank_ ^ j : (rank_ - j + p) % p;
    send(to, std::move(outgoing[static_cast<std::size_t>(to)]));
    incoming[static_cast<std::size_t>(from)] = recv(from);
  }
  return incoming;
}

std::optional<std::vector<BitString>> Communicator::gather(const BitString& value, int root) {
  // Each subtree message is a sequence of (64-bit length, bits) frames in
  // relative-rank order.
  BitString framed;
  framed.append(value.size(), 64);
  framed.append(value);
  std::optional<BitString> all = reduce(framed, combiners::concat(), root, WidthPolicy::kVariable);
  if (!all) return std::nullopt;
  std::vector<BitString> pieces(static_cast<std::size_t>(size_));
  BitReader reader(*all);
  for (int rel = 0; rel < size_; ++rel) {
    const std::uint64_t len = reader.get(64);
    pieces[static_cast<std::size_t>((rel + root) % size_)] = reader.get_bits(len);
  }
  return pieces;
}

std::vector<BitString> Communicator::all_gather(const BitString& value) {
  std::optional<std::vector<BitString>> pieces = gather(value, 0);
  BitString packed;
  if (pieces) {
    for (const auto& piece : *pieces) {
      packed.append(piece.size(), 64);
      packed.append(piece);
    }
  }
  packed = broadcast(packed, 0);
  std::vector<BitString> out(static_cast<std::size_t>(size_));
  BitReader reader(packed);
  for (auto& piece : out) piece = reader.get_bits(reader.get(64));
  return out;
}

namespace combiners {
namespace {

template <class SlotOp>
Combiner slotwise(unsigned width, SlotOp slot_op) {
  if (width == 0 || width > 64) throw ConfigError("combiner: slot width must be in 1..64");
  return [width, slot_op](const BitString& a, const BitString& b) {
    BitString out;
    out.reserve_bits(a.size());
    const std::size_t slots = a.size() / width;
    for (std::size_t i = 0; i < slots; ++i) out.append(slot_op(a.read(i * width, width), b.read(i * width, width)), width);
    return out;
  };
}

Combiner wordwise(std::uint64_t (*word_op)(std::uint64_t, std::uint64_t)) {
  return [word_op](const BitString& a, const BitString& b) {
    std::vector<std::uint64_t> w = a.words();
    for (std::size_t i = 0; i < w.size() && i < b.words().size(); ++i) w[i] = word_op(w[i], b.words()[i]);
    return BitString::from_raw(std::move(w), a.size());
  };
}

}  // namespace

Combiner add_mod_pow2(unsigned width) {
  const std::uint64_t m = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  return slotwise(width, [m](std::uint64_t x, std::uint64_t y) { return (x + y) & m; });
}

Combiner bit_xor() {
  return wordwise([](std::uint64_t x, std::uint64_t y) { return x ^ y; });
}

Combiner bit_or() {
  return wordwise([](std::uint64_t x, std::uint64_t y) { return x | y; });
}

Combiner min_unsigned(unsigned width) {
  return slotwise(width, [](std::uint64_t x, std::uint64_t y) { return x < y ? x : y; });
}

Combiner max_unsigned(unsigned width) {
  return slotwise(width, [](std::uint64_t x, std::uint64_t y) { return x < y ? y : x; });
}

Combiner concat() {
  return [](const BitString& a, const BitString& b) {
    BitString out = a;
    out.append(b);
    return out;
  };
}

}  // namespace combiners
}  // namespace pcheck::sim
