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
#include "pcheck/experiments/accuracy.hpp"

#include <algorithm>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"

namespace pcheck::exp {
namespace {

enum Stream : std::uint64_t { kWorkloadStream = 1, kTrialStream = 2 };

bool is_perm_family(CheckerId id) {
  return id == CheckerId::kPermHash || id == CheckerId::kPermPoly || id == CheckerId::kSort;
}

void sort_locally(ops::Distributed<std::uint64_t>& d) {
  for (auto& part : d) std::sort(part.begin(), part.end());
}

struct Tally {
  std::uint64_t accepted = 0;
  std::optional<sim::CostLedger> first;

  void add(const CheckRun& run) {
    accepted += run.verdict.accepted;
    if (!first) first = run.ledger;
  }
};

}  // namespace

ExperimentResult run_accuracy(const AccuracySpec& spec) {
  if (spec.trials == 0) throw ConfigError("accuracy: need at least one trial");
  if (spec.refresh == 0) throw ConfigError("accuracy: refresh interval must be positive");
  const bool correct_run = spec.manipulator == "none";
  std::optional<faults::Manipulation> manip;
  if (!correct_run) {
    manip = faults::parse_manipulation(spec.manipulator, 0, spec.target);
    const bool sum_ok = spec.checker == CheckerId::kSum && faults::applies_to_sum(manip->kind);
    const bool perm_ok = is_perm_family(spec.checker) && faults::applies_to_permutation(manip->kind);
    if (!sum_ok && !perm_ok) {
      throw ConfigError("manipulator " + spec.manipulator + " cannot be used with checker " + name(spec.checker));
    }
  }

  const sim::Cluster cluster({.pes = spec.pes});
  Tally tally;
  Instance base;
  std::string label;
  double delta = 0.0;
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    if (trial % spec.refresh == 0) {
      Workload w = spec.workload;
      w.seed = derive_seed(derive_seed(spec.seed, kWorkloadStream), trial / spec.refresh);
      base = workload_instance(spec.checker, w, spec.pes);
      const bool solve_now = correct_run || spec.checker == CheckerId::kSum || manip->target == faults::Target::kOutput;
      if (solve_now) solve(spec.checker, base, cluster);
    }
    const std::uint64_t trial_seed = derive_seed(derive_seed(spec.seed, kTrialStream), trial);
    const CheckerConfig config = make_config(spec.checker, spec.config, spec.hash, derive_seed(trial_seed, 1));
    if (trial == 0) {
      label = config_label(config);
      delta = failure_bound(config);
    }
    if (correct_run) {
      tally.add(verify(spec.checker, base, config, cluster));
      continue;
    }
    faults::Manipulation m = *manip;
    m.seed = derive_seed(trial_seed, 2);
    if (spec.checker == CheckerId::kSum) {
      Instance inst = base;
      faults::apply_sum_manipulation(m.target == faults::Target::kInput ? inst.a : inst.sums, m);
      tally.add(verify(spec.checker, inst, config, cluster));
      continue;
    }
    Instance inst = base;
    if (m.target == faults::Target::kOutput) {
      faults::apply_perm_manipulation(inst.out, m);
    } else {
      inst.out = inst.s1;
      faults::apply_perm_manipulation(inst.out, m);
      if (spec.checker == CheckerId::kSort) {
        Instance sorted;
        sorted.s1 = inst.out;
        solve(CheckerId::kSort, sorted, cluster);
        inst.out = std::move(sorted.out);
      } else {
        sort_locally(inst.out);
      }
    }
    tally.add(verify(spec.checker, inst, config, cluster));
  }

  ExperimentResult r;
  r.checker = name(spec.checker);
  r.config = label;
  r.manipulator = correct_run ? "none" : faults::name(*manip);
  r.workload = describe(spec.workload);
  r.pes = spec.pes;
  r.elements = spec.workload.n;
  r.trials = spec.trials;
  r.failures = correct_run ? spec.trials - tally.accepted : tally.accepted;
  r.observed_rate = static_cast<double>(r.failures) / static_cast<double>(r.trials);
  r.expected_delta = delta;
  if (delta > 0) r.ratio = r.observed_rate / delta;
  r.bottleneck_bits = tally.first->bottleneck_volume();
  r.rounds = tally.first->rounds();
  r.messages = tally.first->total_messages();
  r.seed = spec.seed;
  return r;
}

std::vector<CostRow> run_cost_report(CheckerId checker, const std::string& config, const std::vector<std::uint64_t>& sizes,
                                     int pes, const Workload& base) {
  const sim::Cluster cluster({.pes = pes});
  const CheckerConfig cfg = make_config(checker, config, std::nullopt, base.seed);
  std::vector<CostRow> rows;
  for (std::uint64_t n : sizes) {
    Workload w = base;
    w.n = n;
    Instance inst = workload_instance(checker, w, pes);
    solve(checker, inst, cluster);
    const CheckRun run = verify(checker, inst, cfg, cluster);
    if (!run.verdict.accepted) throw ContractViolation("cost report: checker rejected a correct instance");
    CostRow row;
    row.checker = name(checker);
    row.config = config_label(cfg);
    row.pes = pes;
    row.elements = n;
    if (checker == CheckerId::kMin) row.result_entries = inst.minima.front().minima.size();
    row.bottleneck_bits = run.ledger.bottleneck_volume();
    row.total_bits = run.ledger.total_bits_sent();
    row.rounds = run.ledger.rounds();
    row.messages = run.ledger.total_messages();
    rows.push_back(row);
  }
  return rows;
}

bool communication_independent_of_n(const std::vector<CostRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [&](const CostRow& r) {
    return r.bottleneck_bits == rows.front().bottleneck_bits && r.total_bits == rows.front().total_bits &&
           r.rounds == rows.front().rounds && r.messages == rows.front().messages;
  });
}

}  // namespace pcheck::exp
