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

#include <cstdio>
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/g2p/g2p.hpp"
#include "asrwb/unicode.hpp"

namespace asrwb::g2p {
namespace {

constexpr char32_t kChandrabindu = 0x0901;
constexpr char32_t kAnusvara = 0x0902;
constexpr char32_t kVisarga = 0x0903;
constexpr char32_t kNukta = 0x093C;
constexpr char32_t kVirama = 0x094D;

// Canonical decompositions of the precomposed nukta letters U+0958..U+095F.
char32_t nukta_base(char32_t cp) {
  static constexpr char32_t kBases[8] = {0x0915, 0x0916, 0x0917, 0x091C,
                                         0x0921, 0x0922, 0x092B, 0x092F};
  return (cp >= 0x0958 && cp <= 0x095F) ? kBases[cp - 0x0958] : 0;
}

std::u32string letter_key(char32_t base, bool nukta) {
  if (const char32_t b = nukta_base(base)) return {b, kNukta};
  std::u32string key(1, base);
  if (nukta) key.push_back(kNukta);
  return key;
}

[[noreturn]] void reject(const std::u32string& word, std::size_t at, Errc code,
                         const std::string& why) {
  char hex[16];
  std::snprintf(hex, sizeof hex, "U+%04X", static_cast<unsigned>(word[at]));
  throw Error(code, why + " " + hex + " at index " + std::to_string(at));
}

struct Slot {
  PhoneSeq onset;  // consonant phones, empty for an independent vowel
  PhoneSeq vowel;
  PhoneSeq coda;   // homorganic nasal and/or visarga h
  bool inherent = false;
  bool protect = false;  // nasal mark or visarga on this cluster
  bool deleted = false;

  PhoneSeq::size_type live_vowel() const { return deleted ? 0 : vowel.size(); }
  const Phone* last_phone() const {
    if (!coda.empty()) return &coda.back();
    if (live_vowel() != 0) return &vowel.back();
    if (!onset.empty()) return &onset.back();
    return nullptr;
  }
};

}  // namespace

std::vector<GraphemeCluster> parse_graphemes(std::string_view word,
                                             const G2pTables& tables) {
  const std::u32string cps = unicode::decode_utf8(word);
  if (cps.empty()) throw Error(Errc::kEmptyInput, "empty word");

  std::vector<GraphemeCluster> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    const std::size_t begin = i;
    const char32_t cp = cps[i];
    if (!unicode::is_devanagari(cp))
      reject(cps, i, Errc::kNonDevanagariCodepoint, "non-Devanagari codepoint");

    GraphemeCluster c;
    c.base = cp;
    ++i;
    if (tables.independent_vowel(cp) != nullptr) {
      // independent vowels take only nasal marks and visarga
    } else if (tables.consonant(letter_key(cp, false)) != nullptr || nukta_base(cp) != 0) {
      c.nukta = nukta_base(cp) != 0;
      if (i < cps.size() && cps[i] == kNukta && !c.nukta) {
        c.nukta = true;
        ++i;
      }
      if (i < cps.size() && cps[i] == kVirama) {
        c.virama = true;
        ++i;
      } else if (i < cps.size() && tables.matra(cps[i]) != nullptr) {
        c.matra = cps[i];
        ++i;
      }
    } else {
      reject(cps, begin, Errc::kMalformedWord, "no cluster can start with");
    }
    if (i < cps.size() && (cps[i] == kAnusvara || cps[i] == kChandrabindu)) {
      c.nasal_mark = cps[i] == kAnusvara ? NasalMark::kAnusvara : NasalMark::kChandrabindu;
      ++i;
    }
    if (i < cps.size() && cps[i] == kVisarga) {
      c.visarga = true;
      ++i;
    }
    c.source = cps.substr(begin, i - begin);
    out.push_back(std::move(c));
  }
  return out;
}

PhoneSeq clusters_to_phones(const std::vector<GraphemeCluster>& clusters,
                            const G2pTables& tables) {
  if (clusters.empty()) throw Error(Errc::kEmptyInput, "no grapheme clusters");

  const std::size_t n = clusters.size();
  std::vector<Slot> slots(n);
  std::vector<const G2pTables::Consonant*> cons(n, nullptr);

  // Inherent schwa, virama, matras, independent vowels.
  for (std::size_t k = 0; k < n; ++k) {
    const GraphemeCluster& c = clusters[k];
    Slot& s = slots[k];
    if (const PhoneSeq* v = tables.independent_vowel(c.base)) {
      s.vowel = *v;
    } else {
      cons[k] = tables.consonant(letter_key(c.base, c.nukta));
      if (cons[k] == nullptr) cons[k] = tables.consonant(letter_key(c.base, false));
      if (cons[k] == nullptr)
        throw Error(Errc::kMalformedWord, "no phone for consonant cluster " +
                                              std::to_string(k));
      s.onset = cons[k]->phones;
      if (c.virama) {
      } else if (c.matra) {
        s.vowel = *tables.matra(*c.matra);
      } else {
        s.vowel = {"a"};
        s.inherent = true;
      }
    }
    s.protect = c.nasal_mark.has_value() || c.visarga;
  }

  // Anusvara, chandrabindu and visarga.
  for (std::size_t k = 0; k < n; ++k) {
    const GraphemeCluster& c = clusters[k];
    Slot& s = slots[k];
    if (c.nasal_mark) {
      const Phone* homorganic = nullptr;
      if (c.nasal_mark == NasalMark::kAnusvara && k + 1 < n && cons[k + 1] != nullptr)
        homorganic = tables.homorganic_nasal(cons[k + 1]->place);
      if (homorganic != nullptr)
        s.coda.push_back(*homorganic);
      else if (!s.vowel.empty())
        s.vowel.back() += "~";
    }
    if (c.visarga) s.coda.push_back("h");
  }

  // Final schwa.
  if (n >= 2 && slots[n - 1].inherent && !slots[n - 1].protect) slots[n - 1].deleted = true;

  // Medial schwa, single pass.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    Slot& s = slots[k];
    if (!s.inherent || s.protect || s.deleted) continue;
    const Phone* before = slots[k - 1].last_phone();
    const Slot& next = slots[k + 1];
    const bool vc = before != nullptr && tables.is_vowel_phone(*before);
    const bool cv = !next.onset.empty() && next.live_vowel() != 0;
    if (vc && cv) s.deleted = true;
  }

  PhoneSeq out;
  for (const Slot& s : slots) {
    out.insert(out.end(), s.onset.begin(), s.onset.end());
    if (!s.deleted) out.insert(out.end(), s.vowel.begin(), s.vowel.end());
    out.insert(out.end(), s.coda.begin(), s.coda.end());
  }
  return out;
}

PhoneSeq g2p(std::string_view word, const G2pTables& tables) {
  return clusters_to_phones(parse_graphemes(word, tables), tables);
}

std::string join_phones(const PhoneSeq& phones) {
  std::string out;
  for (const Phone& p : phones) {
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
  return out;
}

}  // namespace asrwb::g2p
