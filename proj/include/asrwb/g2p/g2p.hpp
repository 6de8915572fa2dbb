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

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace asrwb::g2p {

enum class NasalMark { kAnusvara, kChandrabindu };

/// One orthographic unit: a consonant or independent vowel together with the
/// signs that attach to it.
struct GraphemeCluster {
  char32_t base = 0;  // as written; precomposed nukta letters are kept
  bool nukta = false;
  std::optional<char32_t> matra;
  bool virama = false;
  std::optional<NasalMark> nasal_mark;
  bool visarga = false;
  std::u32string source;  // exact codepoints covered by this cluster

  bool operator==(const GraphemeCluster&) const = default;
};

using Phone = std::string;
using PhoneSeq = std::vector<Phone>;

/// Letter-to-phone tables, loaded from the `kind<TAB>...` format in
/// data/hi_g2p.tsv.
class G2pTables {
 public:
  struct Consonant {
    PhoneSeq phones;
    std::string place;  // varga, "-" for none
  };

  static G2pTables parse(std::string_view tsv);
  static const G2pTables& bundled();

  /// Keyed by the decomposed spelling (base, or base + U+093C nukta).
  const Consonant* consonant(std::u32string_view letter) const;
  const PhoneSeq* independent_vowel(char32_t cp) const;
  const PhoneSeq* matra(char32_t cp) const;
  /// Homorganic nasal for a place of articulation, if that place has one.
  const Phone* homorganic_nasal(std::string_view place) const;

  bool is_vowel_phone(std::string_view phone) const;
  /// Every phone g2p can emit: table phones, nasalized vowels, and "h".
  const std::set<Phone, std::less<>>& inventory() const { return inventory_; }

 private:
  std::map<std::u32string, Consonant, std::less<>> consonants_;
  std::map<char32_t, PhoneSeq> vowels_;
  std::map<char32_t, PhoneSeq> matras_;
  std::map<std::string, Phone, std::less<>> nasals_;
  std::set<Phone, std::less<>> vowel_phones_;
  std::set<Phone, std::less<>> inventory_;
};

/// Left-to-right grouping of base + nukta? + (matra | virama)? + nasal? +
/// visarga?. Throws Error: kEmptyInput, kNonDevanagariCodepoint (outside the
/// Devanagari block), kMalformedWord (a sign without a base, or a letter the
/// tables do not cover). Messages carry the codepoint index.
std::vector<GraphemeCluster> parse_graphemes(
    std::string_view word, const G2pTables& tables = G2pTables::bundled());

/// Applies, in order:
///   a consonant without matra/virama takes the inherent schwa "a";
///   virama suppresses the vowel;
///   anusvara before a consonant with a homorganic nasal becomes that
///     nasal, otherwise it nasalizes its own vowel; chandrabindu always
///     nasalizes;
///   the word-final schwa is dropped when there are two or more clusters;
///   one left-to-right pass deletes a medial schwa in a VC_CV context,
///     judged on the sequence as already modified by the pass.
/// A schwa carrying a nasal mark or visarga is never deleted.
/// Throws Error(kEmptyInput) for no clusters.
PhoneSeq clusters_to_phones(const std::vector<GraphemeCluster>& clusters,
                            const G2pTables& tables = G2pTables::bundled());

PhoneSeq g2p(std::string_view word, const G2pTables& tables = G2pTables::bundled());

std::string join_phones(const PhoneSeq& phones);

struct LexiconEntry {
  std::string word;
  PhoneSeq phones;
  bool operator==(const LexiconEntry&) const = default;
};

struct LexiconFailure {
  std::string word;
  std::string reason;
};

struct Lexicon {
  std::vector<LexiconEntry> entries;  // unique, sorted by codepoint order
  std::vector<LexiconFailure> failures;
};

Lexicon build_lexicon(const std::vector<std::string>& words,
                      const G2pTables& tables = G2pTables::bundled());

/// `word<TAB>phone phone ...` lines.
std::string format_lexicon(const std::vector<LexiconEntry>& entries);
/// Throws Error(kInvalidArgument) on malformed lines.
std::map<std::string, PhoneSeq, std::less<>> parse_lexicon(std::string_view tsv);

}  // namespace asrwb::g2p
