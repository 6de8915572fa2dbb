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

#include <string>

#include "asrwb/error.hpp"
#include "asrwb/g2p/g2p.hpp"
#include "asrwb/unicode.hpp"

namespace asrwb::g2p {
namespace detail {
extern const std::string_view kG2pTsv;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(b, i - b));
      b = i + 1;
    }
  return out;
}

PhoneSeq phones_of(std::string_view field) {
  PhoneSeq out;
  for (std::string_view p : split(field, ' '))
    if (!p.empty()) out.emplace_back(p);
  return out;
}

char32_t single_codepoint(std::string_view field, const std::string& where) {
  const std::u32string cps = unicode::decode_utf8(field);
  if (cps.size() != 1) throw Error(Errc::kInvalidArgument, where + ": expected one letter");
  return cps[0];
}

}  // namespace

G2pTables G2pTables::parse(std::string_view tsv) {
  G2pTables t;
  std::size_t line_no = 0;
  for (std::string_view line : split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    const std::string where = "g2p table line " + std::to_string(line_no);
    if (f.size() < 3 || phones_of(f[2]).empty())
      throw Error(Errc::kInvalidArgument, where + ": too few fields");

    if (f[0] == "consonant") {
      if (f.size() != 4) throw Error(Errc::kInvalidArgument, where + ": needs a place");
      std::u32string key = unicode::decode_utf8(f[1]);
      if (key.empty() || key.size() > 2 || (key.size() == 2 && key[1] != 0x093C))
        throw Error(Errc::kInvalidArgument, where + ": bad consonant spelling");
      t.consonants_[key] = Consonant{phones_of(f[2]), std::string(f[3])};
    } else if (f[0] == "vowel") {
      t.vowels_[single_codepoint(f[1], where)] = phones_of(f[2]);
    } else if (f[0] == "matra") {
      t.matras_[single_codepoint(f[1], where)] = phones_of(f[2]);
    } else if (f[0] == "nasal") {
      const PhoneSeq p = phones_of(f[2]);
      if (p.size() != 1) throw Error(Errc::kInvalidArgument, where + ": one nasal phone");
      t.nasals_[std::string(f[1])] = p[0];
    } else {
      throw Error(Errc::kInvalidArgument, where + ": unknown kind");
    }
  }

  // A vowel phone is whatever ends an independent vowel or matra entry; the
  // rest of a multi-phone entry (the r of ri) is consonantal.
  auto add_vowels = [&t](const std::map<char32_t, PhoneSeq>& m) {
    for (const auto& [cp, seq] : m) {
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) t.inventory_.insert(seq[i]);
      t.vowel_phones_.insert(seq.back());
      t.vowel_phones_.insert(seq.back() + "~");
    }
  };
  add_vowels(t.vowels_);
  add_vowels(t.matras_);
  t.vowel_phones_.insert("a");
  t.vowel_phones_.insert("a~");
  t.inventory_.insert(t.vowel_phones_.begin(), t.vowel_phones_.end());
  for (const auto& [k, c] : t.consonants_) t.inventory_.insert(c.phones.begin(), c.phones.end());
  for (const auto& [k, p] : t.nasals_) t.inventory_.insert(p);
  t.inventory_.insert("h");
  return t;
}

const G2pTables& G2pTables::bundled() {
  static const G2pTables tables = parse(detail::kG2pTsv);
  return tables;
}

const G2pTables::Consonant* G2pTables::consonant(std::u32string_view letter) const {
  const auto it = consonants_.find(letter);
  return it == consonants_.end() ? nullptr : &it->second;
}

const PhoneSeq* G2pTables::independent_vowel(char32_t cp) const {
  const auto it = vowels_.find(cp);
  return it == vowels_.end() ? nullptr : &it->second;
}

const PhoneSeq* G2pTables::matra(char32_t cp) const {
  const auto it = matras_.find(cp);
  return it == matras_.end() ? nullptr : &it->second;
}

const Phone* G2pTables::homorganic_nasal(std::string_view place) const {
  const auto it = nasals_.find(place);
  return it == nasals_.end() ? nullptr : &it->second;
}

bool G2pTables::is_vowel_phone(std::string_view phone) const {
  return vowel_phones_.count(phone) != 0;
}

}  // namespace asrwb::g2p
