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

#include <functional>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "pcheck/common/error.hpp"
#include "pcheck/simnet/communicator.hpp"
#include "pcheck/simnet/cost_ledger.hpp"

namespace pcheck::sim {

struct ClusterConfig {
  int pes = 1;
  double alpha = 1.0;
  double beta = 1.0;
  // Charge payloads rounded up to whole bytes.
  bool byte_granularity = false;
};

template <class Out>
struct RunResult {
  std::vector<Out> outputs;
  CostLedger ledger;
};

// A simulated cluster of p PEs. Each run executes one program per PE as a
// cooperatively scheduled fiber; PEs are resumed in pe_id order whenever
// they can make progress, so runs are deterministic. A run in which every
// unfinished PE waits on an empty channel raises DeadlockError.
class Cluster {
 public:
  explicit Cluster(ClusterConfig config);

  const ClusterConfig& config() const { return config_; }
  int pes() const { return config_.pes; }

  // Runs body on every PE and returns the ledger. An exception thrown on any
  // PE aborts the run and is rethrown here.
  CostLedger execute(const std::function<void(Communicator&)>& body) const;

  // program(comm, inputs[rank]) on every PE.
  template <class In, class Program>
  auto run(Program&& program, const std::vector<In>& inputs) const
      -> RunResult<std::invoke_result_t<Program&, Communicator&, const In&>> {
    using Out = std::invoke_result_t<Program&, Communicator&, const In&>;
    if (inputs.size() != static_cast<std::size_t>(config_.pes)) {
      throw ContractViolation("cluster run: expected one input slice per PE");
    }
    std::vector<std::optional<Out>> slots(inputs.size());
    CostLedger ledger = execute([&](Communicator& comm) {
      slots[static_cast<std::size_t>(comm.rank())].emplace(program(comm, inputs[static_cast<std::size_t>(comm.rank())]));
    });
    return {unwrap(std::move(slots)), std::move(ledger)};
  }

  // program(comm) on every PE.
  template <class Program>
  auto run(Program&& program) const -> RunResult<std::invoke_result_t<Program&, Communicator&>> {
    using Out = std::invoke_result_t<Program&, Communicator&>;
    std::vector<std::optional<Out>> slots(static_cast<std::size_t>(config_.pes));
    CostLedger ledger = execute([&](Communicator& comm) {
      slots[static_cast<std::size_t>(comm.rank())].emplace(program(comm));
    });
    return {unwrap(std::move(slots)), std::move(ledger)};
  }

 private:
  template <class Out>
  static std::vector<Out> unwrap(std::vector<std::optional<Out>>&& slots) {
    std::vector<Out> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
  }

  ClusterConfig config_;
};

}  // namespace pcheck::sim
