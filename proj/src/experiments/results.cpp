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
#include "pcheck/experiments/results.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pcheck/common/error.hpp"

namespace pcheck::exp {
namespace {

using Fields = std::vector<std::string>;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t to_u64(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

template <class Row>
struct Codec;

template <>
struct Codec<ExperimentResult> {
  static const Fields& columns() {
    static const Fields c{"checker",        "config",          "manipulator", "workload", "pes",
                          "elements",       "trials",          "failures",    "observed_rate",
                          "expected_delta", "ratio",           "bottleneck_bits", "rounds", "messages", "seed"};
    return c;
  }
  static Fields fields(const ExperimentResult& r) {
    return {r.checker,
            r.config,
            r.manipulator,
            r.workload,
            std::to_string(r.pes),
            std::to_string(r.elements),
            std::to_string(r.trials),
            std::to_string(r.failures),
            fmt_double(r.observed_rate),
            fmt_double(r.expected_delta),
            r.ratio ? fmt_double(*r.ratio) : "",
            std::to_string(r.bottleneck_bits),
            std::to_string(r.rounds),
            std::to_string(r.messages),
            std::to_string(r.seed)};
  }
  static ExperimentResult parse(const Fields& f) {
    ExperimentResult r;
    r.checker = f[0];
    r.config = f[1];
    r.manipulator = f[2];
    r.workload = f[3];
    r.pes = static_cast<int>(to_u64(f[4]));
    r.elements = to_u64(f[5]);
    r.trials = to_u64(f[6]);
    r.failures = to_u64(f[7]);
    r.observed_rate = to_double(f[8]);
    r.expected_delta = to_double(f[9]);
    if (!f[10].empty()) r.ratio = to_double(f[10]);
    r.bottleneck_bits = to_u64(f[11]);
    r.rounds = to_u64(f[12]);
    r.messages = to_u64(f[13]);
    r.seed = to_u64(f[14]);
    return r;
  }
  static nlohmann::json json(const ExperimentResult& r) {
    nlohmann::json j{{"checker", r.checker},
                     {"config", r.config},
                     {"manipulator", r.manipulator},
                     {"workload", r.workload},
                     {"pes", r.pes},
                     {"elements", r.elements},
                     {"trials", r.trials},
                     {"failures", r.failures},
                     {"observed_rate", r.observed_rate},
                     {"expected_delta", r.expected_delta},
                     {"ratio", nullptr},
                     {"bottleneck_bits", r.bottleneck_bits},
                     {"rounds", r.rounds},
                     {"messages", r.messages},
                     {"seed", r.seed}};
    if (r.ratio) j["ratio"] = *r.ratio;
    return j;
  }
  static ExperimentResult from(const nlohmann::json& j) {
    ExperimentResult r;
    j.at("checker").get_to(r.checker);
    j.at("config").get_to(r.config);
    j.at("manipulator").get_to(r.manipulator);
    j.at("workload").get_to(r.workload);
    j.at("pes").get_to(r.pes);
    j.at("elements").get_to(r.elements);
    j.at("trials").get_to(r.trials);
    j.at("failures").get_to(r.failures);
    j.at("observed_rate").get_to(r.observed_rate);
    j.at("expected_delta").get_to(r.expected_delta);
    if (!j.at("ratio").is_null()) r.ratio = j.at("ratio").get<double>();
    j.at("bottleneck_bits").get_to(r.bottleneck_bits);
    j.at("rounds").get_to(r.rounds);
    j.at("messages").get_to(r.messages);
    j.at("seed").get_to(r.seed);
    return r;
  }
};

template <>
struct Codec<CostRow> {
  static const Fields& columns() {
    static const Fields c{"checker", "config", "pes", "elements", "result_entries", "bottleneck_bits", "total_bits", "rounds", "messages"};
    return c;
  }
  static Fields fields(const CostRow& r) {
    return {r.checker,
            r.config,
            std::to_string(r.pes),
            std::to_string(r.elements),
            std::to_string(r.result_entries),
            std::to_string(r.bottleneck_bits),
            std::to_string(r.total_bits),
            std::to_string(r.rounds),
            std::to_string(r.messages)};
  }
  static CostRow parse(const Fields& f) {
    return {f[0], f[1], static_cast<int>(to_u64(f[2])), to_u64(f[3]), to_u64(f[4]), to_u64(f[5]), to_u64(f[6]), to_u64(f[7]), to_u64(f[8])};
  }
  static nlohmann::json json(const CostRow& r) {
    return {{"checker", r.checker},
            {"config", r.config},
            {"pes", r.pes},
            {"elements", r.elements},
            {"result_entries", r.result_entries},
            {"bottleneck_bits", r.bottleneck_bits},
            {"total_bits", r.total_bits},
            {"rounds", r.rounds},
            {"messages", r.messages}};
  }
  static CostRow from(const nlohmann::json& j) {
    return {j.at("checker").get<std::string>(),  j.at("config").get<std::string>(),
            j.at("pes").get<int>(),              j.at("elements").get<std::uint64_t>(),
            j.at("result_entries").get<std::uint64_t>(), j.at("bottleneck_bits").get<std::uint64_t>(),
            j.at("total_bits").get<std::uint64_t>(), j.at("rounds").get<std::uint64_t>(),
            j.at("messages").get<std::uint64_t>()};
  }
};

template <>
struct Codec<tune::TuneResult> {
  static const Fields& columns() {
    static const Fields c{"d", "rhat", "log2_rhat", "iterations", "achieved_delta", "payload_bits"};
    return c;
  }
  static Fields fields(const tune::TuneResult& r) {
    return {std::to_string(r.d),          std::to_string(r.rhat),          std::to_string(r.log2_rhat()),
            std::to_string(r.iterations), fmt_double(r.achieved_delta), std::to_string(r.payload_bits)};
  }
  static tune::TuneResult parse(const Fields& f) {
    return {static_cast<std::uint32_t>(to_u64(f[0])), to_u64(f[1]), static_cast<unsigned>(to_u64(f[3])), to_double(f[4]),
            to_u64(f[5])};
  }
  static nlohmann::json json(const tune::TuneResult& r) {
    return {{"d", r.d},
            {"rhat", r.rhat},
            {"log2_rhat", r.log2_rhat()},
            {"iterations", r.iterations},
            {"achieved_delta", r.achieved_delta},
            {"payload_bits", r.payload_bits}};
  }
  static tune::TuneResult from(const nlohmann::json& j) {
    return {j.at("d").get<std::uint32_t>(), j.at("rhat").get<std::uint64_t>(), j.at("iterations").get<unsigned>(),
            j.at("achieved_delta").get<double>(), j.at("payload_bits").get<std::uint64_t>()};
  }
};

Fields split(const std::string& line) {
  Fields out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join(const Fields& f) {
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s.push_back(',');
    if (f[i].find_first_of(",\n") != std::string::npos) throw ConfigError("csv field contains a separator: " + f[i]);
    s += f[i];
  }
  return s;
}

}  // namespace

template <class Row>
const std::vector<std::string>& csv_columns() {
  return Codec<Row>::columns();
}

template <class Row>
void write_csv(std::ostream& out, const Table<Row>& table) {
  if (table.header.command.find('\n') != std::string::npos) throw ConfigError("command line contains a newline");
  out << "# command: " << table.header.command << '\n';
  out << "# seed: " << table.header.seed << '\n';
  out << "# rng: " << table.header.rng << '\n';
  out << join(Codec<Row>::columns()) << '\n';
  for (const Row& r : table.rows) out << join(Codec<Row>::fields(r)) << '\n';
}

template <class Row>
Table<Row> read_csv(std::istream& in) {
  Table<Row> table;
  std::string line;
  bool seen_columns = false;
  try {
    while (std::getline(in, line)) {
      if (line.rfind("# ", 0) == 0) {
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(2, colon - 2), value = line.substr(colon + 2);
        if (key == "command") table.header.command = value;
        if (key == "seed") table.header.seed = to_u64(value);
        if (key == "rng") table.header.rng = value;
        continue;
      }
      if (line.empty()) continue;
      const Fields f = split(line);
      if (!seen_columns) {
        if (f != Codec<Row>::columns()) throw ConfigError("unexpected csv columns: " + line);
        seen_columns = true;
        continue;
      }
      if (f.size() != Codec<Row>::columns().size()) throw ConfigError("wrong field count: " + line);
      table.rows.push_back(Codec<Row>::parse(f));
    }
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("malformed csv value: ") + e.what());
  }
  if (!seen_columns) throw ConfigError("csv has no column line");
  return table;
}

template <class Row>
nlohmann::json to_json(const Table<Row>& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& r : table.rows) rows.push_back(Codec<Row>::json(r));
  return {{"header", {{"command", table.header.command}, {"seed", table.header.seed}, {"rng", table.header.rng}}},
          {"rows", rows}};
}

template <class Row>
Table<Row> from_json(const nlohmann::json& j) {
  Table<Row> table;
  try {
    const auto& h = j.at("header");
    h.at("command").get_to(table.header.command);
    h.at("seed").get_to(table.header.seed);
    h.at("rng").get_to(table.header.rng);
    for (const auto& r : j.at("rows")) table.rows.push_back(Codec<Row>::from(r));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed result json: ") + e.what());
  }
  return table;
}

#define PCHECK_INSTANTIATE(Row)                                   \
  template const std::vector<std::string>& csv_columns<Row>();    \
  template void write_csv<Row>(std::ostream&, const Table<Row>&); \
  template Table<Row> read_csv<Row>(std::istream&);               \
  template nlohmann::json to_json<Row>(const Table<Row>&);        \
  template Table<Row> from_json<Row>(const nlohmann::json&);

PCHECK_INSTANTIATE(ExperimentResult)
PCHECK_INSTANTIATE(CostRow)
PCHECK_INSTANTIATE(tune::TuneResult)

#undef PCHECK_INSTANTIATE

}  // namespace pcheck::exp
