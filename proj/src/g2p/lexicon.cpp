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
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/g2p/g2p.hpp"

namespace asrwb::g2p {

Lexicon build_lexicon(const std::vector<std::string>& words, const G2pTables& tables) {
  // UTF-8 byte order is codepoint order, so std::string ordering suffices.
  std::vector<std::string> unique = words;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  Lexicon lex;
  for (const std::string& w : unique) {
    try {
      lex.entries.push_back({w, g2p(w, tables)});
    } catch (const Error& e) {
      lex.failures.push_back({w, e.what()});
    }
  }
  return lex;
}

std::string format_lexicon(const std::vector<LexiconEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += e.word;
    out.push_back('\t');
    out += join_phones(e.phones);
    out.push_back('\n');
  }
  return out;
}

std::map<std::string, PhoneSeq, std::less<>> parse_lexicon(std::string_view tsv) {
  std::map<std::string, PhoneSeq, std::less<>> out;
  std::size_t line_no = 0;
  while (!tsv.empty()) {
    const std::size_t nl = tsv.find('\n');
    std::string_view line = tsv.substr(0, nl);
    tsv = nl == std::string_view::npos ? std::string_view{} : tsv.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == 0 || tab == std::string_view::npos)
      throw Error(Errc::kInvalidArgument,
                  "lexicon line " + std::to_string(line_no) + ": expected word<TAB>phones");
    PhoneSeq phones;
    std::string_view rest = line.substr(tab + 1);
    while (!rest.empty()) {
      const std::size_t sp = rest.find(' ');
      if (sp != 0) phones.emplace_back(rest.substr(0, sp));
      rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
    }
    if (phones.empty())
      throw Error(Errc::kInvalidArgument,
                  "lexicon line " + std::to_string(line_no) + ": no phones");
    out[std::string(line.substr(0, tab))] = std::move(phones);
  }
  return out;
}

}  // namespace asrwb::g2p
