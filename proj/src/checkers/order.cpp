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
#include "order.hpp"

#include <array>

#include "wire.hpp"

namespace pcheck::check::detail {

namespace {

bool in_order(std::uint64_t hi, std::uint64_t next_lo, bool strict) {
  return strict ? hi < next_lo : hi <= next_lo;
}

}  // namespace

std::optional<VerdictDetail> neighbor_boundary(sim::Communicator& comm, const KeyRange& range, bool strict) {
  if (comm.rank() > 0) {
    sim::BitString msg;
    msg.append(range.empty ? 0 : 1, 1);
    msg.append(range.lo, 64);
    comm.send(comm.rank() - 1, std::move(msg));
  }
  if (comm.rank() + 1 < comm.size()) {
    const sim::BitString next = comm.recv(comm.rank() + 1);
    if (next.read(0, 1) != 0 && !range.empty && !in_order(range.hi, next.read(1, 64), strict)) {
      return local_failure(Reason::kBoundaryOrder, comm);
    }
  }
  return std::nullopt;
}

std::optional<VerdictDetail> suffix_boundary(sim::Communicator& comm, const KeyRange& range, bool strict) {
  SlotLayout layout;
  layout.add({1, SlotOp::kOr});
  layout.add({64, SlotOp::kMin});
  const std::array<std::uint64_t, 2> mine{range.empty ? 0u : 1u, range.empty ? ~std::uint64_t{0} : range.lo};
  const auto later = comm.exclusive_scan(layout.pack(mine), layout.combiner(), sim::ScanDirection::kBackward);
  if (!later || range.empty) return std::nullopt;
  const auto values = layout.unpack(*later);
  if (values[0] != 0 && !in_order(range.hi, values[1], strict)) return local_failure(Reason::kBoundaryOrder, comm);
  return std::nullopt;
}

}  // namespace pcheck::check::detail
