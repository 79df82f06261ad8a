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
#include "sum_engine.hpp"

#include "pcheck/common/error.hpp"
#include "wire.hpp"

namespace pcheck::check::detail {

SumEngine::SumEngine(const SumCheckConfig& config, unsigned components, bool failure_slot)
    : iterations_(config.iterations),
      d_(config.d),
      components_(components),
      failure_slot_(failure_slot),
      width_(config.residue_width()),
      slice_bits_(hashing::bits_for_buckets(config.d)),
      moduli_((config.validate(), draw_moduli(config))),
      hasher_(config.hash, config.d, config.iterations) {
  if (components < 1 || components > kMaxComponents) throw ContractViolation("unsupported component count");
  const std::size_t slots = static_cast<std::size_t>(iterations_) * d_ * components_;
  pos_.assign(slots, 0);
  neg_.assign(slots, 0);
}

Verdict SumEngine::finish(sim::Communicator& comm, const std::optional<VerdictDetail>& local) {
  SlotLayout layout;
  std::vector<std::uint64_t> values;
  values.reserve(pos_.size() + 1);
  if (failure_slot_) {
    layout.add({64, SlotOp::kMin});
    values.push_back(encode_failure(local));
  } else if (local) {
    throw ContractViolation("local failure without a failure slot");
  }
  const std::size_t per_iteration = static_cast<std::size_t>(d_) * components_;
  for (unsigned it = 0; it < iterations_; ++it) {
    const std::uint64_t r = moduli_[it];
    layout.add({width_, SlotOp::kAddMod, r}, per_iteration);
    for (std::size_t j = 0; j < per_iteration; ++j) {
      const std::size_t idx = it * per_iteration + j;
      const std::uint64_t p = pos_[idx] % r;
      const std::uint64_t n = neg_[idx] % r;
      values.push_back(p >= n ? p - n : p + (r - n));
    }
  }
  const auto reduced = comm.reduce(layout.pack(values), layout.combiner());
  Verdict at_root;
  if (reduced) {
    const auto table = layout.unpack(*reduced);
    std::size_t first = 0;
    if (failure_slot_) {
      at_root = from_failure(table[0]);
      first = 1;
    }
    for (std::size_t i = first; at_root.accepted && i < table.size(); ++i) {
      if (table[i] == 0) continue;
      const std::size_t slot = i - first;
      VerdictDetail d;
      d.reason = Reason::kTableMismatch;
      d.iteration = static_cast<unsigned>(slot / per_iteration);
      d.bucket = static_cast<std::uint32_t>((slot % per_iteration) / components_);
      at_root = Verdict::reject(d);
    }
  }
  return broadcast_verdict(comm, at_root);
}

}  // namespace pcheck::check::detail
