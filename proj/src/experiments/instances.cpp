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
#include "pcheck/experiments/instances.hpp"

#include <algorithm>
#include <array>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"
#include "pcheck/dataops/codec.hpp"
#include "pcheck/dataops/operations.hpp"

namespace pcheck::exp {
namespace {

using ops::Distributed;
using ops::KeyValue;

constexpr std::array<std::pair<CheckerId, const char*>, 14> kNames{{
    {CheckerId::kSum, "sum"},
    {CheckerId::kCount, "count"},
    {CheckerId::kAverage, "average"},
    {CheckerId::kMin, "min"},
    {CheckerId::kMedian, "median"},
    {CheckerId::kPermHash, "perm"},
    {CheckerId::kPermPoly, "perm-poly"},
    {CheckerId::kSort, "sort"},
    {CheckerId::kZip, "zip"},
    {CheckerId::kUnion, "union"},
    {CheckerId::kMerge, "merge"},
    {CheckerId::kGroupBy, "groupby"},
    {CheckerId::kJoinHash, "join-hash"},
    {CheckerId::kJoinSortMerge, "join-sortmerge"},
}};

bool uses_sum_config(CheckerId id) {
  return id == CheckerId::kSum || id == CheckerId::kCount || id == CheckerId::kAverage || id == CheckerId::kMedian;
}

bool uses_pairs(CheckerId id) {
  return uses_sum_config(id) || id == CheckerId::kMin || id == CheckerId::kGroupBy || id == CheckerId::kJoinHash ||
         id == CheckerId::kJoinSortMerge;
}

bool is_join(CheckerId id) { return id == CheckerId::kJoinHash || id == CheckerId::kJoinSortMerge; }

ops::JoinMode join_mode(CheckerId id) {
  return id == CheckerId::kJoinHash ? ops::JoinMode::kHash : ops::JoinMode::kSortMerge;
}

template <class T>
Distributed<T> sort_globally(const Distributed<T>& in, const sim::Cluster& cluster) {
  return cluster.run([&](sim::Communicator& c) { return ops::sort(c, in[static_cast<std::size_t>(c.rank())]); }).outputs;
}

template <class T>
std::span<const T> at(const Distributed<T>& d, const sim::Communicator& c) {
  return d[static_cast<std::size_t>(c.rank())];
}

}  // namespace

const std::vector<CheckerId>& all_checkers() {
  static const std::vector<CheckerId> ids = [] {
    std::vector<CheckerId> out;
    for (const auto& [id, text] : kNames) out.push_back(id);
    return out;
  }();
  return ids;
}

std::string name(CheckerId id) {
  for (const auto& [k, text] : kNames) {
    if (k == id) return text;
  }
  return "unknown";
}

CheckerId parse_checker(const std::string& text) {
  for (const auto& [id, t] : kNames) {
    if (text == t) return id;
  }
  throw ConfigError("unknown checker '" + text + "'");
}

CheckerConfig make_config(CheckerId id, const std::string& text, std::optional<hashing::HashFamily> family,
                          std::uint64_t seed) {
  if (uses_sum_config(id)) {
    check::SumCheckConfig c = check::parse_sum_config(text, derive_seed(seed, 1), derive_seed(seed, 2));
    if (family) c.hash.family = *family;
    return c;
  }
  if (id == CheckerId::kMin) return std::monostate{};
  if (id == CheckerId::kPermPoly) {
    check::PolyCheckConfig c;
    try {
      std::size_t used = 0;
      c.delta = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
      throw ConfigError("perm-poly config must be a failure probability, got '" + text + "'");
    }
    c.seed = derive_seed(seed, 3);
    c.validate();
    return c;
  }
  check::PermCheckConfig c = check::parse_perm_config(text, derive_seed(seed, 1));
  if (family) c.hash.family = *family;
  return c;
}

std::string default_config(CheckerId id) {
  if (uses_sum_config(id)) return "4x4m5-tab";
  if (id == CheckerId::kMin) return "-";
  if (id == CheckerId::kPermPoly) return "1e-9";
  return "tab32";
}

std::string config_label(const CheckerConfig& config) {
  struct {
    std::string operator()(std::monostate) const { return "-"; }
    std::string operator()(const check::SumCheckConfig& c) const { return check::to_string(c); }
    std::string operator()(const check::PermCheckConfig& c) const { return check::to_string(c); }
    std::string operator()(const check::PolyCheckConfig& c) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", c.delta);
      return buf;
    }
  } visitor;
  return std::visit(visitor, config);
}

double failure_bound(const CheckerConfig& config) {
  struct {
    double operator()(std::monostate) const { return 0.0; }
    double operator()(const check::SumCheckConfig& c) const { return c.failure_bound(); }
    double operator()(const check::PermCheckConfig& c) const { return c.failure_bound(); }
    double operator()(const check::PolyCheckConfig& c) const { return c.delta; }
  } visitor;
  return std::visit(visitor, config);
}

Instance workload_instance(CheckerId id, const Workload& w, int p) {
  Instance inst;
  inst.grouping = {hashing::HashFamily::kTab64, derive_seed(w.seed, 0x67726f7570)};
  Workload second = w;
  second.seed = derive_seed(w.seed, 0x7332);
  if (uses_pairs(id)) {
    inst.a = gen_pairs(w, p);
    if (is_join(id)) inst.b = gen_pairs(second, p);
    return inst;
  }
  inst.s1 = gen_keys(w, p);
  if (id == CheckerId::kZip) {
    second.n = w.n;
    inst.s2 = gen_keys(second, p);
    std::reverse(inst.s2.begin(), inst.s2.end());
  } else if (id == CheckerId::kUnion || id == CheckerId::kMerge) {
    second.n = w.n / 2;
    inst.s2 = gen_keys(second, p);
  }
  if (id == CheckerId::kMerge) {
    const sim::Cluster cluster({.pes = p});
    inst.s1 = sort_globally(inst.s1, cluster);
    inst.s2 = sort_globally(inst.s2, cluster);
  }
  return inst;
}

Instance random_instance(CheckerId id, std::uint64_t seed, int p, std::size_t max_n) {
  Rng rng(seed);
  Instance inst;
  inst.grouping = {hashing::HashFamily::kTab64, rng()};
  const auto pu = static_cast<std::uint64_t>(p);
  // Some PEs stay empty: elements go to a random subset of PEs.
  auto draw_owner = [&, mask = std::vector<bool>{}]() mutable {
    if (mask.empty()) {
      mask.assign(pu, false);
      for (auto&& m : mask) m = uniform_below(rng, 4) != 0;
      mask[uniform_below(rng, pu)] = true;
    }
    for (;;) {
      const auto pe = uniform_below(rng, pu);
      if (mask[pe]) return pe;
    }
  };
  auto size = [&] { return static_cast<std::size_t>(uniform_below(rng, max_n + 1)); };
  const std::uint64_t key_range = 1 + uniform_below(rng, 2 * max_n + 1);
  const bool small_values = uniform_below(rng, 2) == 0;
  auto value = [&] {
    return small_values ? static_cast<std::int64_t>(uniform_below(rng, 7)) - 3
                        : static_cast<std::int64_t>(uniform_below(rng, std::uint64_t{1} << 41)) - (std::int64_t{1} << 40);
  };
  auto pairs = [&](std::size_t n) {
    Distributed<KeyValue> d(pu);
    for (std::size_t i = 0; i < n; ++i) d[draw_owner()].push_back({uniform_below(rng, key_range), value()});
    return d;
  };
  const std::uint64_t word_ranges[] = {2, 100, ~std::uint64_t{0}};
  const std::uint64_t word_range = word_ranges[uniform_below(rng, 3)];
  auto words = [&](std::size_t n) {
    Distributed<std::uint64_t> d(pu);
    for (std::size_t i = 0; i < n; ++i) d[draw_owner()].push_back(uniform_below(rng, word_range));
    return d;
  };
  if (uses_pairs(id)) {
    inst.a = pairs(size());
    if (is_join(id)) inst.b = pairs(size());
    return inst;
  }
  inst.s1 = words(size());
  if (id == CheckerId::kZip) {
    std::size_t n = 0;
    for (const auto& part : inst.s1) n += part.size();
    inst.s2 = words(n);
  } else if (id == CheckerId::kUnion || id == CheckerId::kMerge) {
    inst.s2 = words(size());
  }
  if (id == CheckerId::kMerge) {
    const sim::Cluster cluster({.pes = p});
    inst.s1 = sort_globally(inst.s1, cluster);
    inst.s2 = sort_globally(inst.s2, cluster);
  }
  return inst;
}

void solve(CheckerId id, Instance& inst, const sim::Cluster& cluster) {
  using sim::Communicator;
  switch (id) {
    case CheckerId::kSum:
      inst.sums = cluster.run([&](Communicator& c) { return ops::sum_aggregate(c, at(inst.a, c)); }).outputs;
      break;
    case CheckerId::kCount:
      inst.counts = cluster.run([&](Communicator& c) { return ops::count_aggregate(c, at(inst.a, c)); }).outputs;
      break;
    case CheckerId::kAverage:
      inst.averages = cluster.run([&](Communicator& c) { return ops::average_aggregate(c, at(inst.a, c)); }).outputs;
      break;
    case CheckerId::kMin:
      inst.minima = cluster.run([&](Communicator& c) { return ops::min_aggregate(c, at(inst.a, c)); }).outputs;
      break;
    case CheckerId::kMedian:
      inst.medians =
          cluster.run([&](Communicator& c) { return ops::median_aggregate(c, at(inst.a, c), inst.grouping); }).outputs;
      break;
    case CheckerId::kPermHash:
    case CheckerId::kPermPoly:
    case CheckerId::kSort:
      inst.out = sort_globally(inst.s1, cluster);
      break;
    case CheckerId::kZip:
      inst.zipped = cluster.run([&](Communicator& c) { return ops::zip(c, at(inst.s1, c), at(inst.s2, c)); }).outputs;
      break;
    case CheckerId::kUnion:
      inst.out = cluster.run([&](Communicator& c) { return ops::union_of(c, at(inst.s1, c), at(inst.s2, c)); }).outputs;
      break;
    case CheckerId::kMerge:
      inst.out = cluster.run([&](Communicator& c) { return ops::merge(c, at(inst.s1, c), at(inst.s2, c)); }).outputs;
      break;
    case CheckerId::kGroupBy:
      inst.a_out =
          cluster.run([&](Communicator& c) { return ops::groupby_redistribute(c, at(inst.a, c), inst.grouping); }).outputs;
      break;
    case CheckerId::kJoinHash:
    case CheckerId::kJoinSortMerge: {
      const auto outs = cluster.run([&](Communicator& c) {
        return ops::join_redistribute(c, at(inst.a, c), at(inst.b, c), join_mode(id), inst.grouping);
      }).outputs;
      inst.a_out.clear();
      inst.b_out.clear();
      for (const auto& [r, s] : outs) {
        inst.a_out.push_back(r);
        inst.b_out.push_back(s);
      }
      break;
    }
  }
}

CheckRun verify(CheckerId id, const Instance& inst, const CheckerConfig& config, const sim::Cluster& cluster) {
  using sim::Communicator;
  auto sum_cfg = [&] { return std::get<check::SumCheckConfig>(config); };
  auto perm = [&]() -> check::PermutationCheck {
    if (const auto* poly = std::get_if<check::PolyCheckConfig>(&config)) return *poly;
    return std::get<check::PermCheckConfig>(config);
  };
  auto run = [&](auto body) {
    auto result = cluster.run(body);
    return CheckRun{result.outputs.front(), std::move(result.ledger)};
  };
  switch (id) {
    case CheckerId::kSum:
      return run([&, c = sum_cfg()](Communicator& comm) { return check::check_sum_agg(comm, at(inst.a, comm), at(inst.sums, comm), c); });
    case CheckerId::kCount:
      return run([&, c = sum_cfg()](Communicator& comm) { return check::check_count_agg(comm, at(inst.a, comm), at(inst.counts, comm), c); });
    case CheckerId::kAverage:
      return run([&, c = sum_cfg()](Communicator& comm) { return check::check_average(comm, at(inst.a, comm), at(inst.averages, comm), c); });
    case CheckerId::kMedian:
      return run([&, c = sum_cfg()](Communicator& comm) {
        return check::check_median(comm, at(inst.a, comm), inst.medians[static_cast<std::size_t>(comm.rank())], c);
      });
    case CheckerId::kMin:
      return run([&](Communicator& comm) {
        const ops::MinResult& mine = inst.minima[static_cast<std::size_t>(comm.rank())];
        ops::MinResult received;
        received.minima = ops::decode_records<KeyValue>(comm.broadcast(ops::encode_records(mine.minima)));
        received.certificate =
            ops::decode_records<ops::MinCertificateEntry>(comm.broadcast(ops::encode_records(mine.certificate)));
        return check::check_min(comm, at(inst.a, comm), received, inst.grouping);
      });
    case CheckerId::kPermHash:
    case CheckerId::kPermPoly:
      return run([&, pc = perm()](Communicator& comm) {
        if (const auto* h = std::get_if<check::PermCheckConfig>(&pc)) {
          return check::check_permutation_hash(comm, at(inst.s1, comm), at(inst.out, comm), *h);
        }
        return check::check_permutation_poly(comm, at(inst.s1, comm), at(inst.out, comm), std::get<check::PolyCheckConfig>(pc));
      });
    case CheckerId::kSort:
      return run([&, pc = perm()](Communicator& comm) { return check::check_sorted(comm, at(inst.s1, comm), at(inst.out, comm), pc); });
    case CheckerId::kZip:
      return run([&, c = std::get<check::PermCheckConfig>(config)](Communicator& comm) {
        return check::check_zip(comm, at(inst.s1, comm), at(inst.s2, comm), at(inst.zipped, comm), c);
      });
    case CheckerId::kUnion:
      return run([&, pc = perm()](Communicator& comm) {
        return check::check_union(comm, at(inst.s1, comm), at(inst.s2, comm), at(inst.out, comm), pc);
      });
    case CheckerId::kMerge:
      return run([&, pc = perm()](Communicator& comm) {
        return check::check_merge(comm, at(inst.s1, comm), at(inst.s2, comm), at(inst.out, comm), pc);
      });
    case CheckerId::kGroupBy:
      return run([&, c = std::get<check::PermCheckConfig>(config)](Communicator& comm) {
        return check::check_groupby_redistribution(comm, at(inst.a, comm), at(inst.a_out, comm), c, inst.grouping);
      });
    case CheckerId::kJoinHash:
    case CheckerId::kJoinSortMerge:
      return run([&, c = std::get<check::PermCheckConfig>(config)](Communicator& comm) {
        return check::check_join_redistribution(comm, at(inst.a, comm), at(inst.b, comm), at(inst.a_out, comm),
                                                at(inst.b_out, comm), join_mode(id), c, inst.grouping);
      });
  }
  throw ConfigError("unknown checker");
}

}  // namespace pcheck::exp
