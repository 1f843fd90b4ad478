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


#include "aerosurvey/core/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::csv {

std::vector<std::string> split_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Table Table::read(std::istream& in, std::string_view what) {
  Table t;
  t.what_ = std::string(what);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    auto fields = split_line(line);
    if (!have_header) {
      t.header_ = std::move(fields);
      for (std::size_t i = 0; i < t.header_.size(); ++i) t.index_[t.header_[i]] = i;
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw ValidationError(fmt::format("{}: row {} has {} fields, header has {}", t.what_, t.rows_.size() + 1,
                                        fields.size(), t.header_.size()));
    }
    t.rows_.push_back(std::move(fields));
  }
  if (!have_header) throw ValidationError(fmt::format("{}: missing header row", t.what_));
  return t;
}

Table Table::read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return read(in, path.string());
}

void Table::require(std::initializer_list<const char*> columns) const {
  for (const char* c : columns) {
    if (!has_column(c)) throw ValidationError(fmt::format("{}: missing column '{}'", what_, c));
  }
}

const std::string& Table::text(std::size_t row, const std::string& column) const {
  const auto it = index_.find(column);
  if (it == index_.end()) throw ValidationError(fmt::format("{}: missing column '{}'", what_, column));
  return rows_.at(row)[it->second];
}

double Table::number(std::size_t row, const std::string& column) const {
  const std::string& s = text(row, column);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(fmt::format("{}: row {} column '{}': '{}' is not a number", what_, row + 1, column, s));
  }
  return v;
}

long long Table::integer(std::size_t row, const std::string& column) const {
  const std::string& s = text(row, column);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(fmt::format("{}: row {} column '{}': '{}' is not an integer", what_, row + 1, column, s));
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace aerosurvey::csv
