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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcheck/experiments/accuracy.hpp"
#include "pcheck/tuner/tuner.hpp"

namespace pcheck::exp {

// Provenance written at the top of every output file.
struct RunHeader {
  std::string command;
  std::uint64_t seed = 0;
  std::string rng;

  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

template <class Row>
struct Table {
  RunHeader header;
  std::vector<Row> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

// CSV: '#'-prefixed "key: value" header lines, one column-name line, then
// one line per row. Doubles use 17 significant digits; a missing ratio is an
// empty field. JSON: {"header": {...}, "rows": [...]}. Readers throw
// ConfigError on malformed input.
template <class Row>
void write_csv(std::ostream& out, const Table<Row>& table);
template <class Row>
Table<Row> read_csv(std::istream& in);
template <class Row>
nlohmann::json to_json(const Table<Row>& table);
template <class Row>
Table<Row> from_json(const nlohmann::json& j);

template <class Row>
const std::vector<std::string>& csv_columns();

}  // namespace pcheck::exp
