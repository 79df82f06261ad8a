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
// Acceptance gate. Prints one "criterion N: PASS|FAIL" line per criterion,
// followed by indented detail lines. Exit status is 0 iff every selected
// criterion passed.

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pcheck/checkers/checkers.hpp"
#include "pcheck/checkers/minireduction.hpp"
#include "pcheck/common/random.hpp"
#include "pcheck/dataops/operations.hpp"
#include "pcheck/experiments/accuracy.hpp"
#include "pcheck/experiments/instances.hpp"
#include "pcheck/experiments/workload.hpp"
#include "pcheck/simnet/cluster.hpp"
#include "pcheck/tuner/tuner.hpp"

namespace {

using namespace pcheck;
using ops::Distributed;
using ops::KeyValue;
using sim::BitString;
using sim::Cluster;
using sim::Communicator;
using Words = std::vector<std::uint64_t>;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail(std::string line) {
    pass = false;
    details.push_back(std::move(line));
  }
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double four_sigma(double q, std::uint64_t trials) {
  return 4.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

template <class T>
const std::vector<T>& at(const Distributed<T>& d, const Communicator& c) {
  return d[static_cast<std::size_t>(c.rank())];
}

// ---- 1: one-sided error ----------------------------------------------------

Outcome one_sided_error() {
  Outcome out;
  constexpr int kInstances = 1000;
  constexpr std::size_t kMaxN = 10'000;
  const int pes[] = {1, 2, 4, 8};
  std::uint64_t rejections = 0, checked = 0;
  for (exp::CheckerId id : exp::all_checkers()) {
    std::uint64_t rejected_here = 0;
    for (int i = 0; i < kInstances; ++i) {
      const std::uint64_t seed = derive_seed(0xacce55 + static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(i));
      const int p = pes[i % 4];
      const Cluster cluster({.pes = p});
      exp::Instance inst = exp::random_instance(id, seed, p, kMaxN);
      exp::solve(id, inst, cluster);
      const auto family = (i % 2 == 0) ? hashing::HashFamily::kTab32 : hashing::HashFamily::kCrc32c;
      const auto config = exp::make_config(id, exp::default_config(id), family, derive_seed(seed, 1));
      const bool accepted = exp::verify(id, inst, config, cluster).verdict.accepted;
      rejected_here += !accepted;
      ++checked;
    }
    rejections += rejected_here;
    if (rejected_here != 0) out.fail(format("%s: %llu rejections", exp::name(id).c_str(), (unsigned long long)rejected_here));
  }
  out.summary = format("%llu correct instances over %zu checkers, %llu rejections", (unsigned long long)checked,
                       exp::all_checkers().size(), (unsigned long long)rejections);
  return out;
}

// ---- 2: minireduction exact oracle -----------------------------------------

// Exact false-accept probability of one iteration over all d^|K| bucket maps
// and all moduli in (rhat, 2 rhat].
double exact_false_accept(const std::vector<KeyValue>& input, const std::vector<KeyValue>& output, unsigned keys,
                          std::uint32_t d, std::uint64_t rhat) {
  std::uint64_t maps = 1;
  for (unsigned i = 0; i < keys; ++i) maps *= d;
  std::uint64_t accepted = 0, total = 0;
  for (std::uint64_t code = 0; code < maps; ++code) {
    auto bucket = [&](std::uint64_t key) {
      std::uint64_t c = code;
      for (std::uint64_t i = 0; i < key; ++i) c /= d;
      return static_cast<std::uint32_t>(c % d);
    };
    for (std::uint64_t r = rhat + 1; r <= 2 * rhat; ++r) {
      accepted += check::condensed_table(input, d, r, bucket) == check::condensed_table(output, d, r, bucket);
      ++total;
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(total);
}

std::vector<KeyValue> key_sums(const std::vector<KeyValue>& input) {
  std::map<std::uint64_t, std::int64_t> s;
  for (const auto& kv : input) s[kv.key] += kv.value;
  std::vector<KeyValue> out;
  for (const auto& [k, v] : s) out.push_back({k, v});
  return out;
}

Outcome minireduction_oracle() {
  Outcome out;
  int cases = 0;
  double worst_margin = 1.0;
  for (unsigned keys : {3u, 4u}) {
    std::vector<KeyValue> input;
    for (std::uint64_t k = 0; k < keys; ++k) {
      input.push_back({k, static_cast<std::int64_t>(3 * k + 2)});
      input.push_back({k, static_cast<std::int64_t>(k + 1)});
    }
    const auto correct = key_sums(input);
    for (std::uint32_t d : {2u, 3u}) {
      for (std::uint64_t rhat : {4u, 8u}) {
        const auto delta = static_cast<std::int64_t>(rhat);
        std::vector<std::pair<std::string, std::vector<KeyValue>>> corruptions;
        for (std::int64_t change : {std::int64_t{1}, std::int64_t{-1}, std::int64_t{2}, delta, delta + 1, 2 * delta}) {
          auto o = correct;
          o[0].value += change;
          corruptions.emplace_back(format("value%+lld", (long long)change), o);
        }
        {
          auto o = correct;
          o[0].value -= 2;
          o[1].value += 2;
          corruptions.emplace_back("relabel", o);
        }
        {
          auto o = correct;
          o[1].value += 1;
          o[2].value -= 1;
          corruptions.emplace_back("incdec", o);
        }
        {
          auto o = correct;
          std::swap(o[0].value, o[keys - 1].value);
          corruptions.emplace_back("switch", o);
        }
        const double bound = 1.0 / static_cast<double>(rhat) + 1.0 / d;
        for (const auto& [label, o] : corruptions) {
          const double q = exact_false_accept(input, o, keys, d, rhat);
          ++cases;
          worst_margin = std::min(worst_margin, bound - q);
          if (q > bound + 1e-12) {
            out.fail(format("|K|=%u d=%u rhat=%llu %s: %.6f > %.6f", keys, d, (unsigned long long)rhat, label.c_str(), q,
                            bound));
          }
        }
      }
    }
  }
  // Tightness: a single relabel with values that never vanish mod r.
  const std::vector<KeyValue> input{{0, 5}, {1, 7}, {2, 11}};
  for (std::uint32_t d : {2u, 3u}) {
    auto o = key_sums(input);
    o[0].value -= 5;
    o[2].value += 5;
    const double q = exact_false_accept(input, o, 3, d, 4096);
    out.details.push_back(format("tightness d=%u rhat=4096: %.9f (1/d = %.9f)", d, q, 1.0 / d));
    if (q != 1.0 / d) out.fail(format("tightness d=%u: %.12f != %.12f", d, q, 1.0 / d));
  }
  out.summary = format("%d exhaustive cases within 1/rhat + 1/d (min margin %.4f), relabel tight at 1/d", cases,
                       worst_margin);
  return out;
}

// ---- 3: tuner table --------------------------------------------------------

Outcome tuner_table() {
  Outcome out;
  int matched = 0;
  for (const auto& row : tune::published_table()) {
    const auto got = tune::optimize(row.budget_bits, row.delta);
    if (!got) {
      out.fail(format("b=%llu delta=%g: infeasible", (unsigned long long)row.budget_bits, row.delta));
      continue;
    }
    const bool same = got->d == row.printed.d && got->rhat == row.printed.rhat &&
                      got->iterations == row.printed.iterations;
    const double rel = std::abs(got->achieved_delta - row.printed.achieved_delta) / row.printed.achieved_delta;
    if (!same || rel > 0.05) {
      out.fail(format("b=%llu delta=%g: got (%u, 2^%u, %u, %.3g) printed (%u, 2^%u, %u, %.3g)",
                      (unsigned long long)row.budget_bits, row.delta, got->d, got->log2_rhat(), got->iterations,
                      got->achieved_delta, row.printed.d, row.printed.log2_rhat(), row.printed.iterations,
                      row.printed.achieved_delta));
    } else {
      ++matched;
    }
  }
  out.summary = format("%d of %zu published rows reproduced", matched, tune::published_table().size());
  return out;
}

// ---- 4: sum checker accuracy -----------------------------------------------

Outcome sum_accuracy() {
  Outcome out;
  constexpr std::uint64_t kTrials = 20'000;
  const std::vector<std::string> configs{"1x2", "1x4", "4x2m4", "4x4m3", "4x4m5"};
  int cells = 0;
  std::uint64_t cell_seed = 4000;
  for (const auto& cfg : configs) {
    for (const std::string hash : {"crc", "tab"}) {
      for (const auto& manip : faults::sum_manipulator_names()) {
        exp::AccuracySpec spec;
        spec.checker = exp::CheckerId::kSum;
        spec.config = cfg + "-" + hash;
        spec.manipulator = manip;
        spec.workload = exp::power_law(1'000'000, 50'000, ++cell_seed);
        spec.pes = 4;
        spec.trials = kTrials;
        spec.seed = cell_seed;
        const auto r = exp::run_accuracy(spec);
        ++cells;
        const double q = r.expected_delta;
        const double limit = q + four_sigma(q, kTrials);
        std::string line = format("%-10s %-12s rate %.6f delta %.6f ratio %.3f", spec.config.c_str(), manip.c_str(),
                                  r.observed_rate, q, r.ratio.value_or(0.0));
        if (r.observed_rate > limit) {
          out.fail(line + format("  above delta + 4 sigma = %.6f", limit));
          continue;
        }
        const bool banded = (cfg == "1x2" || cfg == "1x4") && (manip == "randkey" || manip == "incdec1");
        if (banded && (!r.ratio || *r.ratio < 0.9 || *r.ratio > 1.1)) {
          out.fail(line + "  ratio outside [0.9, 1.1]");
          continue;
        }
        out.details.push_back(line);
      }
    }
  }
  out.summary = format("%d cells (p=4, n=50000 power law 1e6, %llu trials)", cells, (unsigned long long)kTrials);
  return out;
}

// ---- 5: permutation checker accuracy ---------------------------------------

Outcome permutation_accuracy() {
  Outcome out;
  constexpr std::uint64_t kTrials = 20'000;
  const std::uint64_t kElements = 10'000;
  std::uint64_t cell_seed = 5000;
  auto run = [&](const std::string& config, const std::string& manip) {
    exp::AccuracySpec spec;
    spec.checker = exp::CheckerId::kPermHash;
    spec.config = config;
    spec.manipulator = manip;
    spec.workload = exp::uniform(0, 99'999'999, kElements, ++cell_seed);
    spec.pes = 4;
    spec.trials = kTrials;
    spec.seed = cell_seed;
    return exp::run_accuracy(spec);
  };
  int cells = 0;
  for (unsigned bits : {1u, 2u, 4u, 8u, 12u}) {
    for (const auto& manip : faults::permutation_manipulator_names()) {
      const auto r = run("tab" + std::to_string(bits), manip);
      ++cells;
      const double q = r.expected_delta;
      const double ratio = r.ratio.value_or(0.0);
      const bool ok = (ratio >= 0.85 && ratio <= 1.15) || std::abs(r.observed_rate - q) <= four_sigma(q, kTrials);
      std::string line = format("tab%-3u %-10s rate %.6f expected %.6f ratio %.3f", bits, manip.c_str(),
                                r.observed_rate, q, ratio);
      if (ok) {
        out.details.push_back(line);
      } else {
        out.fail(line + "  outside [0.85, 1.15] and the 4 sigma band");
      }
    }
  }
  for (unsigned bits : {4u, 8u, 12u}) {
    const auto r = run("crc" + std::to_string(bits), "increment");
    const double ratio = r.ratio.value_or(0.0);
    std::string line = format("crc%-3u increment  rate %.6f expected %.6f ratio %.3f", bits, r.observed_rate,
                              r.expected_delta, ratio);
    if (ratio > 1.5) {
      out.details.push_back(line);
    } else {
      out.fail(line + "  not above 1.5");
    }
  }
  out.summary = format("%d tabulation cells plus CRC-32C increment at bits 4, 8, 12 (p=4, n=%llu uniform [0, 1e8), "
                       "%llu trials)",
                       cells, (unsigned long long)kElements, (unsigned long long)kTrials);
  return out;
}

// ---- 6: polynomial root bound ----------------------------------------------

void multisets(std::uint64_t r, std::size_t len, Words& cur, std::vector<Words>& all) {
  if (cur.size() == len) {
    all.push_back(cur);
    return;
  }
  for (std::uint64_t x = cur.empty() ? 0 : cur.back(); x < r; ++x) {
    cur.push_back(x);
    multisets(r, len, cur, all);
    cur.pop_back();
  }
}

bool poly_checker_accepts(const Words& e, const Words& o, std::uint64_t r, std::uint64_t z) {
  check::PolyCheckConfig cfg;
  cfg.prime_override = r;
  cfg.z_override = z;
  const Cluster cluster({.pes = 1});
  return cluster.run([&](Communicator& c) { return check::check_permutation_poly(c, e, o, cfg); })
      .outputs.front()
      .accepted;
}

Outcome poly_root_bound() {
  Outcome out;
  std::uint64_t pairs = 0;
  for (std::uint64_t r : {7u, 11u, 13u}) {
    std::vector<std::vector<Words>> by_len(5);
    for (std::size_t len = 0; len <= 4; ++len) {
      Words cur;
      multisets(r, len, cur, by_len[len]);
    }
    // Equal lengths: the fingerprint difference has at most |E| roots.
    for (std::size_t len = 0; len <= 4; ++len) {
      const auto& sets = by_len[len];
      std::vector<Words> fp(sets.size(), Words(r));
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::uint64_t z = 0; z < r; ++z) fp[i][z] = check::poly_fingerprint(sets[i], z, r);
      }
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = 0; j < sets.size(); ++j) {
          if (i == j) continue;
          std::uint64_t hits = 0;
          for (std::uint64_t z = 0; z < r; ++z) hits += fp[i][z] == fp[j][z];
          ++pairs;
          if (hits > len) out.fail(format("r=%llu |E|=%zu pair (%zu, %zu): %llu accepting z", (unsigned long long)r, len,
                                          i, j, (unsigned long long)hits));
        }
      }
    }
  }
  // Unequal lengths: the checker rejects even at a z where the fingerprints
  // coincide.
  std::uint64_t unequal = 0;
  {
    const std::uint64_t r = 7;
    std::vector<Words> all;
    for (std::size_t len = 0; len <= 4; ++len) {
      Words cur;
      multisets(r, len, cur, all);
    }
    for (const auto& e : all) {
      for (const auto& o : all) {
        if (e.size() == o.size()) continue;
        std::uint64_t z = 0;
        for (std::uint64_t c = 0; c < r; ++c) {
          if (check::poly_fingerprint(e, c, r) == check::poly_fingerprint(o, c, r)) z = c;
        }
        ++unequal;
        if (poly_checker_accepts(e, o, r, z)) out.fail(format("unequal lengths %zu vs %zu accepted", e.size(), o.size()));
      }
    }
  }
  int worked = 0;
  for (std::uint64_t z = 0; z < 7; ++z) worked += poly_checker_accepts({1, 2}, {1, 3}, 7, z);
  if (worked != 1) out.fail(format("E={1,2} O={1,3} r=7: %d accepting z, expected 1", worked));
  out.summary = format("%llu equal-length pairs over r in {7, 11, 13} within |E| roots, %llu unequal-length pairs "
                       "rejected, worked case %d accepting z",
                       (unsigned long long)pairs, (unsigned long long)unequal, worked);
  return out;
}

// ---- 7: communication independence -----------------------------------------

Outcome communication() {
  Outcome out;
  const std::vector<std::uint64_t> sizes{1'000, 10'000, 100'000};
  auto show = [&](const std::vector<exp::CostRow>& rows) {
    for (const auto& r : rows) {
      out.details.push_back(format("%-6s %-10s n=%-7llu k=%-7llu bottleneck %llu total %llu rounds %llu messages %llu",
                                   r.checker.c_str(), r.config.c_str(), (unsigned long long)r.elements,
                                   (unsigned long long)r.result_entries, (unsigned long long)r.bottleneck_bits,
                                   (unsigned long long)r.total_bits, (unsigned long long)r.rounds,
                                   (unsigned long long)r.messages));
    }
  };
  const auto sum_rows =
      exp::run_cost_report(exp::CheckerId::kSum, "4x4m3-tab", sizes, 8, exp::power_law(1'000'000, 0, 70));
  show(sum_rows);
  if (!exp::communication_independent_of_n(sum_rows)) out.fail("sum checker traffic depends on n");
  const auto perm_rows = exp::run_cost_report(exp::CheckerId::kPermHash, "tab16", sizes, 8, exp::uniform(0, 99'999'999, 0, 71));
  show(perm_rows);
  if (!exp::communication_independent_of_n(perm_rows)) out.fail("permutation checker traffic depends on n");

  // Keys almost all distinct, so k grows with n.
  const auto min_rows = exp::run_cost_report(exp::CheckerId::kMin, "", sizes, 8, exp::uniform(0, 1ull << 40, 0, 72));
  show(min_rows);
  const auto& a = min_rows[0];
  const auto& b = min_rows[1];
  const auto& c = min_rows[2];
  const auto affine = [&](auto field) {
    const auto d1 = static_cast<double>(field(b)) - static_cast<double>(field(a));
    const auto d2 = static_cast<double>(field(c)) - static_cast<double>(field(b));
    const double k1 = static_cast<double>(b.result_entries - a.result_entries);
    const double k2 = static_cast<double>(c.result_entries - b.result_entries);
    return d1 > 0 && std::abs(d1 / k1 - d2 / k2) <= 1e-9 * (d1 / k1);
  };
  if (!affine([](const exp::CostRow& r) { return r.total_bits; })) out.fail("min total bits not linear in k");
  if (!affine([](const exp::CostRow& r) { return r.bottleneck_bits; })) out.fail("min bottleneck not linear in k");
  const double per_key = static_cast<double>(c.total_bits - a.total_bits) / static_cast<double>(c.result_entries - a.result_entries);
  out.summary = format("sum and permutation traffic identical for n in {1e3, 1e4, 1e5} at p=8; min traffic linear in "
                       "k at %.1f total bits per key",
                       per_key);
  return out;
}

// ---- 8: collectives and operations against sequential oracles --------------

constexpr int kOracleInstances = 200;

BitString random_bits(Rng& rng, std::size_t max_bits) {
  const std::size_t n = uniform_below(rng, max_bits + 1);
  BitString b;
  for (std::size_t i = 0; i < n; ++i) b.append(rng() & 1, 1);
  return b;
}

BitString slots(const Words& values, unsigned width) {
  BitString b;
  for (auto v : values) b.append(v, width);
  return b;
}

Distributed<KeyValue> random_pairs(Rng& rng, int p) {
  Distributed<KeyValue> d(static_cast<std::size_t>(p));
  const std::uint64_t keys = 1 + uniform_below(rng, 20);
  for (auto& slice : d) {
    const std::size_t n = uniform_below(rng, 4) == 0 ? 0 : uniform_below(rng, 60);
    for (std::size_t i = 0; i < n; ++i) {
      slice.push_back({uniform_below(rng, keys), static_cast<std::int64_t>(uniform_below(rng, 2001)) - 1000});
    }
  }
  return d;
}

Distributed<std::uint64_t> random_words(Rng& rng, int p, std::uint64_t range) {
  Distributed<std::uint64_t> d(static_cast<std::size_t>(p));
  for (auto& slice : d) {
    const std::size_t n = uniform_below(rng, 4) == 0 ? 0 : uniform_below(rng, 60);
    for (std::size_t i = 0; i < n; ++i) slice.push_back(uniform_below(rng, range));
  }
  return d;
}

template <class T>
std::vector<T> flatten(const Distributed<T>& d) {
  std::vector<T> all;
  for (const auto& s : d) all.insert(all.end(), s.begin(), s.end());
  return all;
}

// Splits a sequence into p random consecutive pieces.
template <class T>
Distributed<T> deal_randomly(Rng& rng, const std::vector<T>& all, int p) {
  std::vector<std::size_t> cuts{0, all.size()};
  for (int i = 1; i < p; ++i) cuts.push_back(uniform_below(rng, all.size() + 1));
  std::sort(cuts.begin(), cuts.end());
  Distributed<T> d;
  for (int i = 0; i < p; ++i) d.emplace_back(all.begin() + cuts[i], all.begin() + cuts[i + 1]);
  return d;
}

template <class T>
bool balanced(const Distributed<T>& d, std::size_t n) {
  std::size_t lo = n, hi = 0, total = 0;
  for (const auto& s : d) {
    lo = std::min(lo, s.size());
    hi = std::max(hi, s.size());
    total += s.size();
  }
  return total == n && hi - lo <= 1;
}

int random_pes(Rng& rng) { return 1 + static_cast<int>(uniform_below(rng, 12)); }

using Check = std::function<bool(Rng&)>;

std::vector<std::pair<std::string, Check>> collective_checks() {
  std::vector<std::pair<std::string, Check>> checks;
  checks.emplace_back("send/recv", [](Rng& rng) {
    const int p = 1 + random_pes(rng);  // no self-messages
    std::vector<BitString> msg;
    for (int i = 0; i < p; ++i) msg.push_back(random_bits(rng, 200));
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      c.send((c.rank() + 1) % p, msg[static_cast<std::size_t>(c.rank())]);
      return c.recv((c.rank() + p - 1) % p);
    });
    for (int i = 0; i < p; ++i) {
      if (got.outputs[static_cast<std::size_t>(i)] != msg[static_cast<std::size_t>((i + p - 1) % p)]) return false;
    }
    return true;
  });
  checks.emplace_back("reduce add", [](Rng& rng) {
    const int p = random_pes(rng);
    const unsigned width = 1 + static_cast<unsigned>(uniform_below(rng, 64));
    const std::size_t count = 1 + uniform_below(rng, 5);
    const int root = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(p)));
    const std::uint64_t mask = width == 64 ? ~0ull : (1ull << width) - 1;
    std::vector<Words> vals(static_cast<std::size_t>(p), Words(count));
    Words expect(count, 0);
    for (auto& v : vals) {
      for (std::size_t j = 0; j < count; ++j) {
        v[j] = rng() & mask;
        expect[j] = (expect[j] + v[j]) & mask;
      }
    }
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.reduce(slots(vals[static_cast<std::size_t>(c.rank())], width), sim::combiners::add_mod_pow2(width), root);
    });
    for (int i = 0; i < p; ++i) {
      const auto& o = got.outputs[static_cast<std::size_t>(i)];
      if (i == root ? (!o || *o != slots(expect, width)) : o.has_value()) return false;
    }
    return true;
  });
  checks.emplace_back("reduce concat", [](Rng& rng) {
    const int p = random_pes(rng);
    std::vector<BitString> vals;
    BitString expect;
    for (int i = 0; i < p; ++i) {
      vals.push_back(random_bits(rng, 100));
      expect.append(vals.back());
    }
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.reduce(vals[static_cast<std::size_t>(c.rank())], sim::combiners::concat(), 0, sim::WidthPolicy::kVariable);
    });
    return got.outputs[0] && *got.outputs[0] == expect;
  });
  checks.emplace_back("all_reduce min/max/xor/or", [](Rng& rng) {
    const int p = random_pes(rng);
    const unsigned width = 1 + static_cast<unsigned>(uniform_below(rng, 64));
    const std::uint64_t mask = width == 64 ? ~0ull : (1ull << width) - 1;
    Words vals(static_cast<std::size_t>(p));
    for (auto& v : vals) v = rng() & mask;
    const int which = static_cast<int>(uniform_below(rng, 4));
    std::uint64_t expect = which == 0 ? mask : 0;
    for (auto v : vals) {
      switch (which) {
        case 0: expect = std::min(expect, v); break;
        case 1: expect = std::max(expect, v); break;
        case 2: expect ^= v; break;
        default: expect |= v; break;
      }
    }
    const sim::Combiner op = which == 0   ? sim::combiners::min_unsigned(width)
                             : which == 1 ? sim::combiners::max_unsigned(width)
                             : which == 2 ? sim::combiners::bit_xor()
                                          : sim::combiners::bit_or();
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.all_reduce(BitString::from_value(vals[static_cast<std::size_t>(c.rank())], width), op);
    });
    return std::all_of(got.outputs.begin(), got.outputs.end(),
                       [&](const BitString& b) { return b == BitString::from_value(expect, width); });
  });
  checks.emplace_back("broadcast", [](Rng& rng) {
    const int p = random_pes(rng);
    const int root = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(p)));
    const BitString value = random_bits(rng, 300);
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.broadcast(c.rank() == root ? value : BitString{}, root);
    });
    return std::all_of(got.outputs.begin(), got.outputs.end(), [&](const BitString& b) { return b == value; });
  });
  checks.emplace_back("gather_bool_or", [](Rng& rng) {
    const int p = random_pes(rng);
    std::vector<bool> flags(static_cast<std::size_t>(p));
    bool expect = false;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      flags[i] = uniform_below(rng, 3 * flags.size()) == 0;
      expect = expect || flags[i];
    }
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.gather_bool_or(flags[static_cast<std::size_t>(c.rank())]);
    });
    return std::all_of(got.outputs.begin(), got.outputs.end(), [&](bool b) { return b == expect; });
  });
  checks.emplace_back("exclusive_prefix_sum", [](Rng& rng) {
    const int p = random_pes(rng);
    Words counts(static_cast<std::size_t>(p));
    for (auto& x : counts) x = uniform_below(rng, 1'000'000);
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.exclusive_prefix_sum(counts[static_cast<std::size_t>(c.rank())]);
    });
    std::uint64_t acc = 0;
    for (int i = 0; i < p; ++i) {
      if (got.outputs[static_cast<std::size_t>(i)] != acc) return false;
      acc += counts[static_cast<std::size_t>(i)];
    }
    return true;
  });
  checks.emplace_back("exclusive_scan", [](Rng& rng) {
    const int p = random_pes(rng);
    const bool forward = uniform_below(rng, 2) == 0;
    Words vals(static_cast<std::size_t>(p));
    for (auto& v : vals) v = rng() & 0xffff'ffff;
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.exclusive_scan(BitString::from_value(vals[static_cast<std::size_t>(c.rank())], 32),
                              sim::combiners::add_mod_pow2(32),
                              forward ? sim::ScanDirection::kForward : sim::ScanDirection::kBackward);
    });
    for (int i = 0; i < p; ++i) {
      std::uint64_t s = 0;
      int before = 0;
      for (int j = 0; j < p; ++j) {
        if (forward ? j < i : j > i) {
          s = (s + vals[static_cast<std::size_t>(j)]) & 0xffff'ffff;
          ++before;
        }
      }
      const auto& o = got.outputs[static_cast<std::size_t>(i)];
      if (before == 0 ? o.has_value() : (!o || *o != BitString::from_value(s, 32))) return false;
    }
    return true;
  });
  checks.emplace_back("exclusive_scan concat", [](Rng& rng) {
    const int p = random_pes(rng);
    std::vector<BitString> vals;
    for (int i = 0; i < p; ++i) vals.push_back(random_bits(rng, 40));
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return c.exclusive_scan(vals[static_cast<std::size_t>(c.rank())], sim::combiners::concat());
    });
    BitString prefix;
    for (int i = 0; i < p; ++i) {
      const auto& o = got.outputs[static_cast<std::size_t>(i)];
      if (i == 0 ? o.has_value() : (!o || *o != prefix)) return false;
      prefix.append(vals[static_cast<std::size_t>(i)]);
    }
    return true;
  });
  checks.emplace_back("all_to_all", [](Rng& rng) {
    const int p = random_pes(rng);
    std::vector<std::vector<BitString>> out(static_cast<std::size_t>(p));
    for (auto& row : out) {
      for (int j = 0; j < p; ++j) row.push_back(random_bits(rng, 120));
    }
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) { return c.all_to_all(out[static_cast<std::size_t>(c.rank())]); });
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (got.outputs[j][i] != out[i][j]) return false;
      }
    }
    return true;
  });
  checks.emplace_back("gather/all_gather", [](Rng& rng) {
    const int p = random_pes(rng);
    const int root = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(p)));
    std::vector<BitString> vals;
    for (int i = 0; i < p; ++i) vals.push_back(random_bits(rng, 150));
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      const auto& mine = vals[static_cast<std::size_t>(c.rank())];
      return std::make_pair(c.gather(mine, root), c.all_gather(mine));
    });
    for (int i = 0; i < p; ++i) {
      const auto& [g, ag] = got.outputs[static_cast<std::size_t>(i)];
      if (i == root ? (!g || *g != vals) : g.has_value()) return false;
      if (ag != vals) return false;
    }
    return true;
  });
  return checks;
}

std::map<std::uint64_t, std::vector<std::int64_t>> values_by_key(const Distributed<KeyValue>& d) {
  std::map<std::uint64_t, std::vector<std::int64_t>> m;
  for (const auto& s : d) {
    for (const auto& kv : s) m[kv.key].push_back(kv.value);
  }
  return m;
}

// Expected PE-local order of hash redistribution: (hash, key, source PE,
// source position).
Distributed<KeyValue> oracle_hash_partition(const Distributed<KeyValue>& in, int p, const hashing::HashSpec& spec) {
  struct Item {
    std::uint64_t h;
    KeyValue kv;
    std::size_t src, pos;
  };
  std::vector<std::vector<Item>> parts(static_cast<std::size_t>(p));
  for (std::size_t s = 0; s < in.size(); ++s) {
    for (std::size_t i = 0; i < in[s].size(); ++i) {
      const std::uint64_t h = hashing::eval_hash(spec, in[s][i].key);
      parts[h % static_cast<std::uint64_t>(p)].push_back({h, in[s][i], s, i});
    }
  }
  Distributed<KeyValue> out(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::sort(parts[i].begin(), parts[i].end(), [](const Item& a, const Item& b) {
      return std::tie(a.h, a.kv.key, a.src, a.pos) < std::tie(b.h, b.kv.key, b.src, b.pos);
    });
    for (const auto& it : parts[i]) out[i].push_back(it.kv);
  }
  return out;
}

std::vector<std::pair<std::string, Check>> operation_checks() {
  std::vector<std::pair<std::string, Check>> checks;
  checks.emplace_back("sum/count/average", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto in = random_pairs(rng, p);
    const auto got = Cluster({.pes = p}).run(
        [&](Communicator& c) {
          auto s = ops::sum_aggregate(c, at(in, c));
          auto n = ops::count_aggregate(c, at(in, c));
          auto a = ops::average_aggregate(c, at(in, c));
          return std::make_tuple(s, n, a);
        });
    std::vector<KeyValue> sums;
    std::vector<ops::KeyCount> counts;
    std::vector<ops::AverageEntry> avgs;
    for (const auto& [k, vs] : values_by_key(in)) {
      const std::int64_t s = std::accumulate(vs.begin(), vs.end(), std::int64_t{0});
      sums.push_back({k, s});
      counts.push_back({k, vs.size()});
      avgs.push_back({k, {s, static_cast<std::int64_t>(vs.size())}, vs.size()});
    }
    for (int i = 0; i < p; ++i) {
      const auto& [s, n, a] = got.outputs[static_cast<std::size_t>(i)];
      if (i == 0) {
        if (s != sums || n != counts || a.size() != avgs.size()) return false;
        for (std::size_t j = 0; j < a.size(); ++j) {
          if (a[j].key != avgs[j].key || a[j].count != avgs[j].count || !ops::same_value(a[j].average, avgs[j].average)) {
            return false;
          }
        }
      } else if (!s.empty() || !n.empty() || !a.empty()) {
        return false;
      }
    }
    return true;
  });
  checks.emplace_back("min", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto in = random_pairs(rng, p);
    std::map<std::uint64_t, ops::MinCertificateEntry> best;
    for (std::size_t s = 0; s < in.size(); ++s) {
      for (const auto& kv : in[s]) {
        auto it = best.find(kv.key);
        if (it == best.end() || kv.value < it->second.min_value) {
          best[kv.key] = {kv.key, static_cast<std::uint32_t>(s), kv.value};
        }
      }
    }
    ops::MinResult expect;
    for (const auto& [k, e] : best) {
      expect.minima.push_back({k, e.min_value});
      expect.certificate.push_back(e);
    }
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) { return ops::min_aggregate(c, at(in, c)); });
    return std::all_of(got.outputs.begin(), got.outputs.end(), [&](const ops::MinResult& r) { return r == expect; });
  });
  checks.emplace_back("median", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto in = random_pairs(rng, p);
    const hashing::HashSpec spec{hashing::HashFamily::kTab32, rng()};
    ops::MedianAssertion expect;
    for (auto [k, vs] : values_by_key(in)) {
      std::sort(vs.begin(), vs.end());
      const std::size_t m = vs.size() / 2;
      const ops::Rational med = vs.size() % 2 ? ops::Rational{vs[m], 1} : ops::Rational{vs[m - 1] + vs[m], 2};
      std::uint64_t below = 0;
      for (std::size_t j = 0; j < m; ++j) below += vs[j] * med.den == med.num;
      expect.push_back({k, med, below});
    }
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) { return ops::median_aggregate(c, at(in, c), spec); });
    return std::all_of(got.outputs.begin(), got.outputs.end(), [&](const ops::MedianAssertion& r) { return r == expect; });
  });
  checks.emplace_back("sort", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto in = random_words(rng, p, 1 + uniform_below(rng, 1000));
    auto expect = flatten(in);
    std::sort(expect.begin(), expect.end());
    const Distributed<std::uint64_t> got =
        Cluster({.pes = p}).run([&](Communicator& c) { return ops::sort(c, at(in, c)); }).outputs;
    return flatten(got) == expect && balanced(got, expect.size());
  });
  checks.emplace_back("merge", [](Rng& rng) {
    const int p = random_pes(rng);
    auto a = flatten(random_words(rng, p, 500));
    auto b = flatten(random_words(rng, p, 500));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto s1 = deal_randomly(rng, a, p);
    const auto s2 = deal_randomly(rng, b, p);
    Words expect;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(expect));
    const Distributed<std::uint64_t> got =
        Cluster({.pes = p}).run([&](Communicator& c) { return ops::merge(c, at(s1, c), at(s2, c)); }).outputs;
    return flatten(got) == expect && balanced(got, expect.size());
  });
  checks.emplace_back("union", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto s1 = random_words(rng, p, 1ull << 40);
    const auto s2 = random_words(rng, p, 1ull << 40);
    auto expect = flatten(s1);
    const auto tail = flatten(s2);
    expect.insert(expect.end(), tail.begin(), tail.end());
    const Distributed<std::uint64_t> got =
        Cluster({.pes = p}).run([&](Communicator& c) { return ops::union_of(c, at(s1, c), at(s2, c)); }).outputs;
    return flatten(got) == expect && balanced(got, expect.size());
  });
  checks.emplace_back("zip", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto s1 = random_words(rng, p, 1ull << 40);
    const auto a = flatten(s1);
    Words b(a.size());
    for (auto& x : b) x = rng();
    const auto s2 = deal_randomly(rng, b, p);
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) { return ops::zip(c, at(s1, c), at(s2, c)); });
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s1.size(); ++i) {
      const auto& mine = got.outputs[i];
      if (mine.size() != s1[i].size()) return false;
      for (const auto& [x, y] : mine) {
        if (x != a[idx] || y != b[idx]) return false;
        ++idx;
      }
    }
    return idx == a.size();
  });
  checks.emplace_back("groupby", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto in = random_pairs(rng, p);
    const hashing::HashSpec spec{uniform_below(rng, 2) ? hashing::HashFamily::kTab32 : hashing::HashFamily::kCrc32c,
                                 rng()};
    const Distributed<KeyValue> got =
        Cluster({.pes = p}).run([&](Communicator& c) { return ops::groupby_redistribute(c, at(in, c), spec); }).outputs;
    return got == oracle_hash_partition(in, p, spec);
  });
  checks.emplace_back("join hash", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto r = random_pairs(rng, p);
    const auto s = random_pairs(rng, p);
    const hashing::HashSpec spec{hashing::HashFamily::kTab32, rng()};
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return ops::join_redistribute(c, at(r, c), at(s, c), ops::JoinMode::kHash, spec);
    });
    const auto er = oracle_hash_partition(r, p, spec);
    const auto es = oracle_hash_partition(s, p, spec);
    for (int i = 0; i < p; ++i) {
      const auto& [gr, gs] = got.outputs[static_cast<std::size_t>(i)];
      if (gr != er[static_cast<std::size_t>(i)] || gs != es[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  });
  checks.emplace_back("join sort-merge", [](Rng& rng) {
    const int p = random_pes(rng);
    const auto r = random_pairs(rng, p);
    const auto s = random_pairs(rng, p);
    const auto got = Cluster({.pes = p}).run([&](Communicator& c) {
      return ops::join_redistribute(c, at(r, c), at(s, c), ops::JoinMode::kSortMerge, hashing::HashSpec{});
    });
    // Concatenation in PE order is the (key, value)-sorted relation, and all
    // tuples of one key from both relations share a PE.
    auto sr = flatten(r);
    auto ss = flatten(s);
    std::sort(sr.begin(), sr.end());
    std::sort(ss.begin(), ss.end());
    std::vector<KeyValue> gr, gs;
    std::map<std::uint64_t, int> home;
    for (int i = 0; i < p; ++i) {
      const auto& [pr, ps] = got.outputs[static_cast<std::size_t>(i)];
      for (const auto* rel : {&pr, &ps}) {
        for (const auto& kv : *rel) {
          const auto [it, fresh] = home.emplace(kv.key, i);
          if (!fresh && it->second != i) return false;
        }
      }
      gr.insert(gr.end(), pr.begin(), pr.end());
      gs.insert(gs.end(), ps.begin(), ps.end());
    }
    return gr == sr && gs == ss;
  });
  return checks;
}

Outcome oracles() {
  Outcome out;
  Rng rng(0x0ac1e);
  int families = 0;
  for (auto checks : {collective_checks(), operation_checks()}) {
    for (const auto& [label, check] : checks) {
      ++families;
      int failures = 0;
      for (int i = 0; i < kOracleInstances; ++i) failures += !check(rng);
      if (failures != 0) out.fail(format("%s: %d of %d instances differ", label.c_str(), failures, kOracleInstances));
    }
  }
  out.summary = format("%d collective and operation families x %d random instances checked against sequential oracles", families,
                       kOracleInstances);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  bool verbose = false;
  app.add_option("criteria", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 8));
  app.add_flag("-v,--verbose", verbose, "Print per-cell detail lines");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"one-sided error", one_sided_error}},
      {2, {"minireduction exact oracle", minireduction_oracle}},
      {3, {"tuner table", tuner_table}},
      {4, {"sum checker accuracy", sum_accuracy}},
      {5, {"permutation checker accuracy", permutation_accuracy}},
      {6, {"polynomial root bound", poly_root_bound}},
      {7, {"communication independence", communication}},
      {8, {"collective and operation oracles", oracles}},
  };

  bool all = true;
  for (int id : selected) {
    const auto& [title, fn] = criteria.at(id);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::printf("criterion %d: %s  %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.summary.c_str(),
                secs);
    for (const auto& line : o.details) {
      if (verbose || !o.pass || line.find("tightness") != std::string::npos) std::printf("    %s\n", line.c_str());
    }
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
