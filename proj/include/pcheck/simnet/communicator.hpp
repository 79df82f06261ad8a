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
#include <functional>
#include <optional>
#include <vector>

#include "pcheck/simnet/bit_string.hpp"

namespace pcheck::sim {

class RunState;

// Combines two partial results; `lower` always covers PEs of smaller
// relative rank than `upper`, so non-commutative merges stay ordered when
// the root is PE 0.
using Combiner = std::function<BitString(const BitString& lower, const BitString& upper)>;

enum class WidthPolicy {
  kFixed,     // every contribution must have the same bit length
  kVariable,  // merges may change the length (used by data operations)
};

enum class ScanDirection { kForward, kBackward };

// Per-PE handle for point-to-point messaging and collectives. Every
// collective is built from send/recv, so its cost shows up in the ledger.
class Communicator {
 public:
  int rank() const { return rank_; }
  int size() const { return size_; }

  // Buffered, never blocks. FIFO per ordered pair of PEs.
  void send(int to, BitString payload);
  // Blocks until a message from `from` is available.
  BitString recv(int from);

  // Binomial tree, ceil(log2 p) rounds. Returns the fold at root only.
  std::optional<BitString> reduce(const BitString& value, const Combiner& op, int root = 0,
                                  WidthPolicy widths = WidthPolicy::kFixed);
  // Recursive doubling when p is a power of two (log2 p rounds), otherwise
  // reduce to PE 0 followed by broadcast.
  BitString all_reduce(const BitString& value, const Combiner& op);
  // Binomial tree; `value` is ignored on non-root PEs.
  BitString broadcast(const BitString& value, int root = 0);
  bool gather_bool_or(bool flag);
  // Sum of counts over PEs with smaller rank.
  std::uint64_t exclusive_prefix_sum(std::uint64_t count);
  // Combination of the values of all PEs before this one in `direction`
  // (ranks below for kForward, above for kBackward); nullopt on the first.
  std::optional<BitString> exclusive_scan(const BitString& value, const Combiner& op,
                                          ScanDirection direction = ScanDirection::kForward);
  // Direct delivery in p-1 rounds: partner rank XOR j when p is a power of
  // two, ring order otherwise. outgoing[rank] is kept locally.
  std::vector<BitString> all_to_all(std::vector<BitString> outgoing);
  // Binomial gather of variable-length pieces, indexed by rank at root.
  std::optional<std::vector<BitString>> gather(const BitString& value, int root = 0);
  std::vector<BitString> all_gather(const BitString& value);

 private:
  friend class RunState;
  Communicator(RunState* state, int rank, int size) : state_(state), rank_(rank), size_(size) {}

  RunState* state_;
  int rank_;
  int size_;
};

namespace combiners {
// Slot-wise addition mod 2^width over fixed-width slots.
Combiner add_mod_pow2(unsigned width);
Combiner bit_xor();
Combiner bit_or();
// Slot-wise unsigned minimum over fixed-width slots.
Combiner min_unsigned(unsigned width);
Combiner max_unsigned(unsigned width);
// Concatenation, lower first.
Combiner concat();
}  // namespace combiners

}  // namespace pcheck::sim
