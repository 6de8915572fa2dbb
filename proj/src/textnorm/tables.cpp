// Copyright (c) 2026 The asrwb Authors
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

#include <algorithm>
#include <charconv>
#include <set>
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/textnorm/textnorm.hpp"

namespace asrwb::textnorm {
namespace detail {
extern const std::string_view kUnitsTsv;
extern const std::string_view kAbbrevTsv;
}  // namespace detail

namespace {

struct Row {
  std::size_t line;
  std::string key;
  std::string value;
};

std::vector<Row> parse_rows(std::string_view tsv) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  while (!tsv.empty()) {
    const std::size_t nl = tsv.find('\n');
    std::string_view line = tsv.substr(0, nl);
    tsv = nl == std::string_view::npos ? std::string_view{} : tsv.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(Errc::kInvalidArgument,
                  "table line " + std::to_string(line_no) + ": expected key<TAB>value");
    rows.push_back({line_no, std::string(line.substr(0, tab)),
                    std::string(line.substr(tab + 1))});
  }
  return rows;
}

bool has_digit(std::string_view s) {
  for (char c : s)
    if (c >= '0' && c <= '9') return true;
  // Devanagari digits U+0966..U+096F encode as E0 A5 A6..AF.
  for (std::size_t i = 0; i + 2 < s.size(); ++i)
    if (static_cast<unsigned char>(s[i]) == 0xE0 &&
        static_cast<unsigned char>(s[i + 1]) == 0xA5 &&
        static_cast<unsigned char>(s[i + 2]) >= 0xA6 &&
        static_cast<unsigned char>(s[i + 2]) <= 0xAF)
      return true;
  return false;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

}  // namespace

NumberWordTable NumberWordTable::parse(std::string_view tsv) {
  NumberWordTable table;
  std::array<bool, 100> seen{};
  for (const Row& row : parse_rows(tsv)) {
    std::uint64_t key = 0;
    const auto [p, ec] =
        std::from_chars(row.key.data(), row.key.data() + row.key.size(), key);
    if (ec != std::errc{} || p != row.key.data() + row.key.size() || row.value.empty())
      throw Error(Errc::kInvalidArgument,
                  "number table line " + std::to_string(row.line) + ": bad entry");
    if (key < 100) {
      table.units[key] = row.value;
      seen[key] = true;
    } else {
      table.scale_words.emplace_back(key, row.value);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw Error(Errc::kInvalidArgument,
                  "number table lacks a word for " + std::to_string(i));
  std::sort(table.scale_words.begin(), table.scale_words.end());
  const std::vector<std::uint64_t> expected{100, 1000, 100000, 10000000};
  if (table.scale_words.size() != expected.size())
    throw Error(Errc::kInvalidArgument, "number table needs exactly 4 scale words");
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (table.scale_words[i].first != expected[i])
      throw Error(Errc::kInvalidArgument,
                  "unexpected scale value " + std::to_string(table.scale_words[i].first));
  return table;
}

const NumberWordTable& NumberWordTable::bundled() {
  static const NumberWordTable table = parse(detail::kUnitsTsv);
  return table;
}

AbbrevTable AbbrevTable::parse(std::string_view tsv) {
  AbbrevTable table;
  for (const Row& row : parse_rows(tsv)) {
    const std::string where = "abbreviation table line " + std::to_string(row.line);
    if (row.key.empty() || row.key.find_first_of(" \t") != std::string::npos)
      throw Error(Errc::kInvalidArgument, where + ": key must be a single token");
    if (row.key == row.value)
      throw Error(Errc::kInvalidArgument, where + ": key maps to itself");
    if (has_digit(row.value))
      throw Error(Errc::kInvalidArgument, where + ": expansion contains digits");
    if (!table.entries_.emplace(row.key, row.value).second)
      throw Error(Errc::kInvalidArgument, where + ": duplicate key " + row.key);
  }
  for (const auto& [key, value] : table.entries_)
    for (std::string_view tok : tokens(value))
      if (table.entries_.count(tok) != 0)
        throw Error(Errc::kInvalidArgument,
                    "expansion of " + key + " contains the key " + std::string(tok));
  return table;
}

const AbbrevTable& AbbrevTable::bundled() {
  static const AbbrevTable table = parse(detail::kAbbrevTsv);
  return table;
}

const std::string* AbbrevTable::find(std::string_view token) const {
  const auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace asrwb::textnorm
