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
#include "pcheck/simnet/cluster.hpp"

#include <sys/mman.h>
#include <unistd.h>

#include <boost/context/fiber.hpp>
#include <boost/context/stack_context.hpp>
#include <deque>
#include <exception>
#include <new>
#include <string>

namespace pcheck::sim {
namespace {

namespace ctx = boost::context;

// Fiber stacks are mmap'd with a guard page and recycled per thread, since
// short checker runs would otherwise spend most of their time in mmap.
class StackPool {
 public:
  static constexpr std::size_t kStackSize = std::size_t{1} << 20;

  ~StackPool() {
    for (auto& sc : free_) unmap(sc);
  }

  ctx::stack_context allocate() {
    if (!free_.empty()) {
      ctx::stack_context sc = free_.back();
      free_.pop_back();
      return sc;
    }
    const std::size_t page = static_cast<std::size_t>(::sysconf(_SC_PAGESIZE));
    void* base = ::mmap(nullptr, kStackSize + page, PROT_READ | PROT_WRITE, MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
    if (base == MAP_FAILED) throw std::bad_alloc();
    ::mprotect(base, page, PROT_NONE);
    ctx::stack_context sc;
    sc.size = kStackSize;
    sc.sp = static_cast<char*>(base) + page + kStackSize;
    return sc;
  }

  void deallocate(ctx::stack_context& sc) {
    if (free_.size() < 256) {
      free_.push_back(sc);
    } else {
      unmap(sc);
    }
  }

 private:
  static void unmap(ctx::stack_context& sc) {
    const std::size_t page = static_cast<std::size_t>(::sysconf(_SC_PAGESIZE));
    ::munmap(static_cast<char*>(sc.sp) - sc.size - page, sc.size + page);
  }

  std::vector<ctx::stack_context> free_;
};

StackPool& stack_pool() {
  thread_local StackPool pool;
  return pool;
}

struct PooledStack {
  ctx::stack_context allocate() { return stack_pool().allocate(); }
  void deallocate(ctx::stack_context& sc) noexcept { stack_pool().deallocate(sc); }
};

struct Message {
  BitString payload;
  std::uint64_t round;
};

}  // namespace

class RunState {
 public:
  RunState(const ClusterConfig& config, CostLedger& ledger)
      : config_(config), ledger_(ledger), p_(config.pes), channels_(static_cast<std::size_t>(p_ * p_)),
        pes_(static_cast<std::size_t>(p_)) {}

  void run(const std::function<void(Communicator&)>& body) {
    for (int r = 0; r < p_; ++r) {
      Pe& pe = pes_[static_cast<std::size_t>(r)];
      pe.comm = Communicator(this, r, p_);
      pe.fiber = ctx::fiber(std::allocator_arg, PooledStack{}, [this, r, &body](ctx::fiber&& sink) {
        Pe& self = pes_[static_cast<std::size_t>(r)];
        self.sink = std::move(sink);
        try {
          body(self.comm);
        } catch (const ctx::detail::forced_unwind&) {
          throw;
        } catch (...) {
          self.error = std::current_exception();
        }
        self.finished = true;
        return std::move(self.sink);
      });
    }

    int unfinished = p_;
    while (unfinished > 0) {
      bool progressed = false;
      for (int r = 0; r < p_; ++r) {
        Pe& pe = pes_[static_cast<std::size_t>(r)];
        if (pe.finished) continue;
        if (pe.waiting_on >= 0 && channel(pe.waiting_on, r).empty()) continue;
        pe.fiber = std::move(pe.fiber).resume();
        progressed = true;
        if (pe.error) std::rethrow_exception(pe.error);
        if (pe.finished) --unfinished;
      }
      if (!progressed) throw DeadlockError(deadlock_report());
    }

    for (int from = 0; from < p_; ++from) {
      for (int to = 0; to < p_; ++to) {
        if (!channel(from, to).empty()) {
          throw ContractViolation("cluster run ended with " + std::to_string(channel(from, to).size()) +
                                  " unreceived message(s) from PE " + std::to_string(from) + " to PE " +
                                  std::to_string(to));
        }
      }
    }
  }

  void send(int from, int to, BitString&& payload) {
    if (to < 0 || to >= p_ || to == from) {
      throw ContractViolation("send: invalid destination " + std::to_string(to) + " from PE " + std::to_string(from));
    }
    const std::uint64_t bits = charged_bits(payload.size());
    const double cost = config_.alpha + config_.beta * static_cast<double>(bits);
    PeCost& s = ledger_.pes_[static_cast<std::size_t>(from)];
    PeCost& d = ledger_.pes_[static_cast<std::size_t>(to)];
    s.bits_sent += bits;
    s.messages_sent += 1;
    s.time += cost;
    d.bits_received += bits;
    d.messages_received += 1;
    d.time += cost;
    s.send_round = std::max(s.send_round, s.recv_round) + 1;
    channel(from, to).push_back(Message{std::move(payload), s.send_round});
  }

  BitString recv(int self, int from) {
    if (from < 0 || from >= p_ || from == self) {
      throw ContractViolation("recv: invalid source " + std::to_string(from) + " at PE " + std::to_string(self));
    }
    Pe& pe = pes_[static_cast<std::size_t>(self)];
    auto& ch = channel(from, self);
    while (ch.empty()) {
      pe.waiting_on = from;
      pe.sink = std::move(pe.sink).resume();
    }
    pe.waiting_on = -1;
    Message m = std::move(ch.front());
    ch.pop_front();
    PeCost& d = ledger_.pes_[static_cast<std::size_t>(self)];
    d.recv_round = std::max(d.recv_round + 1, m.round);
    return std::move(m.payload);
  }

 private:
  struct Pe {
    Communicator comm{nullptr, 0, 0};
    ctx::fiber fiber;
    ctx::fiber sink;
    int waiting_on = -1;
    bool finished = false;
    std::exception_ptr error;
  };

  std::deque<Message>& channel(int from, int to) { return channels_[static_cast<std::size_t>(from * p_ + to)]; }

  std::uint64_t charged_bits(std::size_t bits) const {
    return config_.byte_granularity ? (bits + 7) / 8 * 8 : bits;
  }

  std::string deadlock_report() const {
    std::string msg = "deadlock: all unfinished PEs are blocked on receives:";
    for (int r = 0; r < p_; ++r) {
      const Pe& pe = pes_[static_cast<std::size_t>(r)];
      if (!pe.finished) msg += " PE " + std::to_string(r) + " waits for PE " + std::to_string(pe.waiting_on) + ";";
    }
    return msg;
  }

  const ClusterConfig& config_;
  CostLedger& ledger_;
  int p_;
  std::vector<std::deque<Message>> channels_;
  std::vector<Pe> pes_;
};

void Communicator::send(int to, BitString payload) { state_->send(rank_, to, std::move(payload)); }

BitString Communicator::recv(int from) { return state_->recv(rank_, from); }

Cluster::Cluster(ClusterConfig config) : config_(config) {
  if (config_.pes < 1) throw ConfigError("cluster: p must be at least 1");
  if (config_.alpha < 0 || config_.beta < 0) throw ConfigError("cluster: alpha and beta must be nonnegative");
}

CostLedger Cluster::execute(const std::function<void(Communicator&)>& body) const {
  CostLedger ledger(config_.pes);
  {
    RunState state(config_, ledger);
    state.run(body);
  }
  return ledger;
}

}  // namespace pcheck::sim
