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
// pcheck: accuracy campaigns, cost reports, parameter tuning and workload
// dumps for the distributed checkers.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pcheck/common/error.hpp"
#include "pcheck/common/random.hpp"
#include "pcheck/experiments/accuracy.hpp"
#include "pcheck/experiments/results.hpp"
#include "pcheck/tuner/tuner.hpp"

namespace {

using namespace pcheck;

struct Shared {
  int pes = 4;
  std::uint64_t elements = 50'000;
  std::uint64_t trials = 20'000;
  std::uint64_t seed = 1;
  std::string workload = "powerlaw:1000000";
  std::string format = "csv";
  std::string out;
  std::string hash;
};

void add_shared(CLI::App* app, Shared& s, bool trials) {
  app->add_option("--pes", s.pes, "simulated PEs")->check(CLI::Range(1, 1 << 16))->capture_default_str();
  app->add_option("--elements", s.elements, "elements per workload")->capture_default_str();
  if (trials) app->add_option("--trials", s.trials, "trials per row")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--seed", s.seed, "master seed")->capture_default_str();
  app->add_option("--workload", s.workload, "powerlaw:<N> or uniform:<lo>:<hi>")->capture_default_str();
  app->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--out", s.out, "output file (default stdout)");
}

std::optional<hashing::HashFamily> hash_override(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (auto f = hashing::parse_hash_family(text)) return f;
  throw ConfigError("unknown hash '" + text + "' (crc, tab, tab64)");
}

template <class Row>
void emit(const Shared& s, const exp::Table<Row>& table) {
  std::ofstream file;
  if (!s.out.empty()) {
    file.open(s.out);
    if (!file) throw ConfigError("cannot open " + s.out);
  }
  std::ostream& out = s.out.empty() ? std::cout : file;
  if (s.format == "json") {
    out << exp::to_json(table).dump(2) << '\n';
  } else {
    exp::write_csv(out, table);
  }
}

std::string command_line(int argc, char** argv) {
  std::ostringstream s;
  for (int i = 0; i < argc; ++i) s << (i ? " " : "") << argv[i];
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic checkers for distributed operations on a simulated cluster"};
  app.require_subcommand(1);
  const exp::RunHeader base_header{command_line(argc, argv), 0, std::string(kRngName)};

  Shared acc;
  std::string checker = "sum";
  std::vector<std::string> configs;
  std::vector<std::string> manipulators{"none"};
  std::string target = "input";
  std::uint64_t refresh = 100;
  auto* accuracy = app.add_subcommand("accuracy", "false-accept rates over repeated manipulated runs");
  add_shared(accuracy, acc, true);
  accuracy->add_option("--checker", checker, "checker name")->capture_default_str();
  accuracy->add_option("--config", configs, "checker configuration(s), e.g. 4x4m3-tab or tab8");
  accuracy->add_option("--hash", acc.hash, "override the hash family: crc, tab, tab64");
  accuracy->add_option("--manipulator", manipulators, "manipulator(s), or none")->capture_default_str();
  accuracy->add_option("--target", target, "input or output")->check(CLI::IsMember({"input", "output"}))->capture_default_str();
  accuracy->add_option("--refresh", refresh, "trials per generated workload")->check(CLI::PositiveNumber)->capture_default_str();

  std::uint64_t budget = 1024;
  double delta = 1e-6;
  bool table2 = false;
  Shared tun;
  auto* tune = app.add_subcommand("tune", "optimal sum checker parameters for a message budget");
  tune->add_option("--budget-bits", budget, "message budget b in bits")->capture_default_str();
  tune->add_option("--delta", delta, "target failure probability")->capture_default_str();
  tune->add_flag("--table2", table2, "evaluate every published (b, delta) row");
  tune->add_option("--format", tun.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  tune->add_option("--out", tun.out, "output file (default stdout)");

  Shared cst;
  cst.pes = 8;
  std::string cost_checker = "sum";
  std::string cost_config;
  std::vector<std::uint64_t> sizes{1000, 10000, 100000};
  auto* cost = app.add_subcommand("cost", "checker communication on correct instances of several sizes");
  add_shared(cost, cst, false);
  cost->add_option("--checker", cost_checker, "checker name")->capture_default_str();
  cost->add_option("--config", cost_config, "checker configuration");
  cost->add_option("--sizes", sizes, "element counts")->delimiter(',')->capture_default_str();

  Shared wl;
  bool pairs = false;
  auto* workload = app.add_subcommand("workload", "print a generated workload as pe,key[,value] lines");
  add_shared(workload, wl, false);
  workload->add_flag("--pairs", pairs, "emit key-value pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (accuracy->parsed()) {
      const exp::CheckerId id = exp::parse_checker(checker);
      if (configs.empty()) configs.push_back(exp::default_config(id));
      exp::Table<exp::ExperimentResult> table{base_header, {}};
      table.header.seed = acc.seed;
      for (const auto& config : configs) {
        for (const auto& manipulator : manipulators) {
          exp::AccuracySpec spec;
          spec.checker = id;
          spec.config = config;
          spec.hash = hash_override(acc.hash);
          spec.manipulator = manipulator;
          spec.target = target == "input" ? faults::Target::kInput : faults::Target::kOutput;
          spec.workload = exp::parse_workload_kind(acc.workload, acc.elements, 0);
          spec.pes = acc.pes;
          spec.trials = acc.trials;
          spec.seed = acc.seed;
          spec.refresh = refresh;
          table.rows.push_back(exp::run_accuracy(spec));
        }
      }
      emit(acc, table);
    } else if (tune->parsed()) {
      exp::Table<tune::TuneResult> table{base_header, {}};
      if (table2) {
        for (const auto& row : tune::published_table()) {
          const auto r = tune::optimize(row.budget_bits, row.delta);
          if (!r) throw ConfigError("published row is infeasible");
          table.rows.push_back(*r);
        }
      } else {
        const auto r = tune::optimize(budget, delta);
        if (!r) {
          std::cerr << "infeasible: no configuration reaches delta " << delta << " within " << budget << " bits\n";
          return 3;
        }
        table.rows.push_back(*r);
      }
      emit(tun, table);
    } else if (cost->parsed()) {
      const exp::CheckerId id = exp::parse_checker(cost_checker);
      if (cost_config.empty()) cost_config = exp::default_config(id);
      exp::Table<exp::CostRow> table{base_header, {}};
      table.header.seed = cst.seed;
      table.rows = exp::run_cost_report(id, cost_config, sizes, cst.pes, exp::parse_workload_kind(cst.workload, 0, cst.seed));
      emit(cst, table);
      if (id == exp::CheckerId::kSum || id == exp::CheckerId::kPermHash) {
        std::cerr << "communication independent of n: " << (exp::communication_independent_of_n(table.rows) ? "yes" : "no")
                  << '\n';
      }
    } else if (workload->parsed()) {
      const exp::Workload w = exp::parse_workload_kind(wl.workload, wl.elements, wl.seed);
      std::ofstream file;
      if (!wl.out.empty()) file.open(wl.out);
      std::ostream& out = wl.out.empty() ? std::cout : file;
      if (pairs) {
        const auto d = exp::gen_pairs(w, wl.pes);
        out << "pe,key,value\n";
        for (std::size_t pe = 0; pe < d.size(); ++pe) {
          for (const auto& kv : d[pe]) out << pe << ',' << kv.key << ',' << kv.value << '\n';
        }
      } else {
        const auto d = exp::gen_keys(w, wl.pes);
        out << "pe,key\n";
        for (std::size_t pe = 0; pe < d.size(); ++pe) {
          for (auto k : d[pe]) out << pe << ',' << k << '\n';
        }
      }
    }
  } catch (const pcheck::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const pcheck::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
