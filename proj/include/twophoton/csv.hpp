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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twophoton {

std::string version();

// Column-oriented numeric table; NaN marks a value that was not computed.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::size_t column_index(const std::string& name) const;  // throws if absent
  std::vector<double> column(const std::string& name) const;
};

// Version line, column names, then rows in %.14e (15 significant digits).
void write_csv(const Table& table, std::ostream& out);
void emit_csv(const Table& table, const std::string& path);

std::string format_number(double x);

}  // namespace twophoton
