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
#include <array>
#include <initializer_list>
#include <variant>

#include "order.hpp"
#include "pcheck/checkers/checkers.hpp"
#include "perm_engine.hpp"
#include "wire.hpp"

namespace pcheck::check {

namespace {

using Words = std::span<const std::uint64_t>;

// O is a permutation of the concatenated E parts and, with check_order,
// globally non-decreasing. The hash variant folds everything into one
// all_reduce; an empty PE adds a backward scan.
Verdict ordered_permutation(Communicator& comm, const PermutationCheck& perm, std::initializer_list<Words> e_parts,
                            Words o, bool check_order) {
  std::optional<VerdictDetail> failure;
  detail::KeyRange range;
  if (check_order) {
    if (!std::is_sorted(o.begin(), o.end())) failure = detail::local_failure(Reason::kNotLocallySorted, comm);
    if (!o.empty()) {
      range.include(o.front());
      range.include(o.back());
    }
    if (auto boundary = detail::neighbor_boundary(comm, range, false); boundary && !failure) failure = boundary;
  }

  detail::SlotLayout layout;
  std::vector<std::uint64_t> values;
  if (check_order) {
    layout.add({64, detail::SlotOp::kMin});
    layout.add({1, detail::SlotOp::kOr});
    values = {detail::encode_failure(failure), range.empty ? 1u : 0u};
  }
  const auto* hash_config = std::get_if<PermCheckConfig>(&perm);
  std::optional<detail::PermEngine> engine;
  if (hash_config) {
    engine.emplace(*hash_config, 1);
    for (Words part : e_parts) engine->add_words(part, 0, false);
    engine->add_words(o, 0, true);
    engine->append(layout, values);
  }
  std::vector<std::uint64_t> reduced;
  if (layout.size() > 0) reduced = layout.unpack(comm.all_reduce(layout.pack(values), layout.combiner()));

  Verdict order = Verdict::accept();
  std::size_t lambda_offset = 0;
  if (check_order) {
    order = detail::from_failure(reduced[0]);
    if (order.accepted && reduced[1] != 0) {
      order = detail::agree(comm, detail::suffix_boundary(comm, range, false));
    }
    lambda_offset = 2;
  }

  Verdict permutation = Verdict::accept();
  if (hash_config) {
    if (auto m = engine->mismatch(std::span(reduced).subspan(lambda_offset))) permutation = Verdict::reject(*m);
  } else {
    std::vector<std::uint64_t> e;
    for (Words part : e_parts) e.insert(e.end(), part.begin(), part.end());
    permutation = check_permutation_poly(comm, e, o, std::get<PolyCheckConfig>(perm));
  }
  return order.accepted ? permutation : order;
}

}  // namespace

Verdict check_sorted(Communicator& comm, Words e, Words o, const PermutationCheck& perm) {
  return ordered_permutation(comm, perm, {e}, o, true);
}

Verdict check_union(Communicator& comm, Words s1, Words s2, Words s, const PermutationCheck& perm) {
  return ordered_permutation(comm, perm, {s1, s2}, s, false);
}

Verdict check_merge(Communicator& comm, Words s1, Words s2, Words s, const PermutationCheck& perm) {
  return ordered_permutation(comm, perm, {s1, s2}, s, true);
}

Verdict check_zip(Communicator& comm, Words s1, Words s2, std::span<const U64Pair> s, const PermCheckConfig& config) {
  config.validate();
  // Global start indices of the three local slices.
  detail::SlotLayout counts;
  counts.add({64, detail::SlotOp::kAddPow2}, 3);
  const std::array<std::uint64_t, 3> sizes{s1.size(), s2.size(), s.size()};
  const auto before = comm.exclusive_scan(counts.pack(sizes), counts.combiner());
  const std::array<std::uint64_t, 3> start =
      before ? std::array<std::uint64_t, 3>{before->read(0, 64), before->read(64, 64), before->read(128, 64)}
             : std::array<std::uint64_t, 3>{0, 0, 0};

  // Slots: n1 - n, n2 - n, then per iteration the S1 and S2 fingerprint
  // differences sum r_i x_i mod 2^bits with r_i the position hash.
  detail::SlotLayout layout;
  layout.add({64, detail::SlotOp::kAddPow2}, 2);
  layout.add({config.bits, detail::SlotOp::kAddPow2}, 2 * static_cast<std::size_t>(config.iterations));
  std::vector<std::uint64_t> values{s1.size() - s.size(), s2.size() - s.size()};
  const std::uint64_t mask = hashing::low_bits_mask(config.bits);
  for (unsigned it = 0; it < config.iterations; ++it) {
    hashing::HashFunction(config.hash, it).visit([&](auto position_hash) {
      std::uint64_t f1 = 0, f2 = 0;
      for (std::size_t j = 0; j < s1.size(); ++j) f1 += position_hash(start[0] + j) * s1[j];
      for (std::size_t j = 0; j < s2.size(); ++j) f2 += position_hash(start[1] + j) * s2[j];
      for (std::size_t j = 0; j < s.size(); ++j) {
        const std::uint64_t r = position_hash(start[2] + j);
        f1 -= r * s[j].first;
        f2 -= r * s[j].second;
      }
      values.push_back(f1 & mask);
      values.push_back(f2 & mask);
    });
  }
  const auto reduced = layout.unpack(comm.all_reduce(layout.pack(values), layout.combiner()));
  VerdictDetail d;
  if (reduced[0] != 0 || reduced[1] != 0) {
    d.reason = Reason::kLengthMismatch;
    return Verdict::reject(d);
  }
  for (std::size_t i = 2; i < reduced.size(); ++i) {
    if (reduced[i] != 0) {
      d.reason = Reason::kFingerprintMismatch;
      d.iteration = static_cast<unsigned>((i - 2) / 2);
      return Verdict::reject(d);
    }
  }
  return Verdict::accept();
}

}  // namespace pcheck::check
