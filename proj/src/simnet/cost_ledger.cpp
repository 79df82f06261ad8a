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
#include "pcheck/simnet/cost_ledger.hpp"

#include <algorithm>

namespace pcheck::sim {

std::uint64_t CostLedger::bottleneck_volume() const {
  std::uint64_t v = 0;
  for (const auto& pe : pes_) v = std::max({v, pe.bits_sent, pe.bits_received});
  return v;
}

std::uint64_t CostLedger::rounds() const {
  std::uint64_t r = 0;
  for (const auto& pe : pes_) r = std::max({r, pe.send_round, pe.recv_round});
  return r;
}

std::uint64_t CostLedger::total_bits_sent() const {
  std::uint64_t s = 0;
  for (const auto& pe : pes_) s += pe.bits_sent;
  return s;
}

std::uint64_t CostLedger::total_bits_received() const {
  std::uint64_t s = 0;
  for (const auto& pe : pes_) s += pe.bits_received;
  return s;
}

std::uint64_t CostLedger::total_messages() const {
  std::uint64_t s = 0;
  for (const auto& pe : pes_) s += pe.messages_sent;
  return s;
}

double CostLedger::max_time() const {
  double t = 0;
  for (const auto& pe : pes_) t = std::max(t, pe.time);
  return t;
}

nlohmann::json CostLedger::to_json() const {
  nlohmann::json pes = nlohmann::json::array();
  for (const auto& pe : pes_) {
    pes.push_back({{"sent_bits", pe.bits_sent},
                   {"recv_bits", pe.bits_received},
                   {"sent_msgs", pe.messages_sent},
                   {"recv_msgs", pe.messages_received},
                   {"time", pe.time}});
  }
  return {{"pe", std::move(pes)}, {"bottleneck_volume", bottleneck_volume()}, {"rounds", rounds()}};
}

}  // namespace pcheck::sim
