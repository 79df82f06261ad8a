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
#include <vector>

#include <json.hpp>

namespace pcheck::sim {

struct PeCost {
  std::uint64_t bits_sent = 0;
  std::uint64_t bits_received = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_received = 0;
  double time = 0.0;  // sum of alpha + beta*m over this PE's sends and receives
  // Logical clocks of the single send port and single receive port.
  std::uint64_t send_round = 0;
  std::uint64_t recv_round = 0;

  friend bool operator==(const PeCost&, const PeCost&) = default;
};

// Communication accounting of one cluster run.
//
// Rounds follow a single-ported full-duplex model: each PE sends at most one
// and receives at most one message per round, and a send is issued no earlier
// than the round after the PE's latest receive. rounds() is the largest round
// number used by any port, i.e. the critical path length in messages.
class CostLedger {
 public:
  CostLedger() = default;
  explicit CostLedger(int pes) : pes_(static_cast<std::size_t>(pes)) {}

  int pes() const { return static_cast<int>(pes_.size()); }
  const PeCost& pe(int i) const { return pes_.at(static_cast<std::size_t>(i)); }
  const std::vector<PeCost>& per_pe() const { return pes_; }

  // max over PEs of max(bits_sent, bits_received)
  std::uint64_t bottleneck_volume() const;
  std::uint64_t rounds() const;
  std::uint64_t total_bits_sent() const;
  std::uint64_t total_bits_received() const;
  std::uint64_t total_messages() const;
  double max_time() const;

  nlohmann::json to_json() const;

  friend bool operator==(const CostLedger&, const CostLedger&) = default;

 private:
  friend class RunState;
  std::vector<PeCost> pes_;
};

}  // namespace pcheck::sim
