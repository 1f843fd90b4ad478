// Copyright 2026 The aerosurvey Authors
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


// Minimal CSV reading and writing for the plain numeric tables the pipeline
// exchanges. Fields never contain commas, quotes or newlines.

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aerosurvey::csv {

std::vector<std::string> split_line(std::string_view line);

class Table {
 public:
  /// Reads a header row and data rows. Blank lines and lines starting with
  /// '#' are skipped. Throws ValidationError on a ragged row.
  static Table read(std::istream& in, std::string_view what);
  static Table read_file(const std::filesystem::path& path);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  bool has_column(const std::string& name) const { return index_.count(name) != 0; }

  /// Throws ValidationError naming the column and row when missing or malformed.
  const std::string& text(std::size_t row, const std::string& column) const;
  double number(std::size_t row, const std::string& column) const;
  long long integer(std::size_t row, const std::string& column) const;

  void require(std::initializer_list<const char*> columns) const;

 private:
  std::string what_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace aerosurvey::csv
