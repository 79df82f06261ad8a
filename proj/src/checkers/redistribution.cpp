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
#include <algorithm>

#include "order.hpp"
#include "pcheck/checkers/checkers.hpp"
#include "perm_engine.hpp"
#include "wire.hpp"

namespace pcheck::check {

namespace {

using Pairs = std::span<const ops::KeyValue>;

std::optional<VerdictDetail> ownership(const Communicator& comm, Pairs local, const hashing::HashFunction& owner_hash) {
  for (const auto& kv : local) {
    if (ops::hash_owner(owner_hash(kv.key), comm.size()) != comm.rank()) {
      return detail::local_failure(Reason::kOwnership, comm);
    }
  }
  return std::nullopt;
}

// One all_reduce carrying the failure word, an "any PE empty" bit and the
// lambda slots of all groups.
Verdict finish(Communicator& comm, const detail::PermEngine& engine, std::optional<VerdictDetail> failure,
               const detail::KeyRange* range) {
  detail::SlotLayout layout;
  layout.add({64, detail::SlotOp::kMin});
  layout.add({1, detail::SlotOp::kOr});
  std::vector<std::uint64_t> values{detail::encode_failure(failure), range && range->empty ? 1u : 0u};
  engine.append(layout, values);
  const auto reduced = layout.unpack(comm.all_reduce(layout.pack(values), layout.combiner()));
  Verdict verdict = detail::from_failure(reduced[0]);
  if (verdict.accepted && range && reduced[1] != 0) {
    verdict = detail::agree(comm, detail::suffix_boundary(comm, *range, true));
  }
  if (!verdict.accepted) return verdict;
  const auto mismatch = engine.mismatch(std::span(reduced).subspan(2));
  return mismatch ? Verdict::reject(*mismatch) : Verdict::accept();
}

bool key_sorted(Pairs xs) {
  return std::is_sorted(xs.begin(), xs.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
}

}  // namespace

Verdict check_groupby_redistribution(Communicator& comm, Pairs input, Pairs redistributed, const PermCheckConfig& perm,
                                     const hashing::HashSpec& ownership_hash) {
  detail::PermEngine engine(perm, 1);
  engine.add_pairs(input, 0, false);
  engine.add_pairs(redistributed, 0, true);
  const auto failure = ownership(comm, redistributed, hashing::HashFunction(ownership_hash));
  return finish(comm, engine, failure, nullptr);
}

Verdict check_join_redistribution(Communicator& comm, Pairs r, Pairs s, Pairs r_out, Pairs s_out, ops::JoinMode mode,
                                  const PermCheckConfig& perm, const hashing::HashSpec& ownership_hash) {
  detail::PermEngine engine(perm, 2);
  engine.add_pairs(r, 0, false);
  engine.add_pairs(r_out, 0, true);
  engine.add_pairs(s, 1, false);
  engine.add_pairs(s_out, 1, true);

  if (mode == ops::JoinMode::kHash) {
    const hashing::HashFunction owner_hash(ownership_hash);
    auto failure = ownership(comm, r_out, owner_hash);
    if (!failure) failure = ownership(comm, s_out, owner_hash);
    return finish(comm, engine, failure, nullptr);
  }

  std::optional<VerdictDetail> failure;
  if (!key_sorted(r_out) || !key_sorted(s_out)) failure = detail::local_failure(Reason::kNotLocallySorted, comm);
  detail::KeyRange range;
  for (Pairs rel : {r_out, s_out}) {
    if (!rel.empty()) {
      range.include(rel.front().key);
      range.include(rel.back().key);
    }
  }
  if (auto boundary = detail::neighbor_boundary(comm, range, true); boundary && !failure) failure = boundary;
  return finish(comm, engine, failure, &range);
}

Verdict replica_consistency(Communicator& comm, const sim::BitString& local_copy, const hashing::HashSpec& hash) {
  return detail::agree(comm, detail::replica_mismatch(comm, local_copy, hash.seed));
}

}  // namespace pcheck::check
