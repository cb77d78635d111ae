// Copyright 2026 The lindblad-twophoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twophoton/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "twophoton/errors.hpp"

#ifndef TWOPHOTON_VERSION
#define TWOPHOTON_VERSION "0.0.0"
#endif

namespace twophoton {

std::string version() { return TWOPHOTON_VERSION; }

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table::add_row: width mismatch");
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("Table: no column named " + name);
}

std::vector<double> Table::column(const std::string& name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  out << "# lindblad-twophoton v" << version() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void emit_csv(const Table& table, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("emit_csv: cannot open " + path + " for writing");
  write_csv(table, f);
  f.flush();
  if (!f) throw Error("emit_csv: write to " + path + " failed");
}

}  // namespace twophoton
