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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asrwb::textnorm {

/// Indian-system number words: irregular units 0..99 plus the scale words
/// for hundred, thousand, lakh and crore.
struct NumberWordTable {
  std::array<std::string, 100> units;
  std::vector<std::pair<std::uint64_t, std::string>> scale_words;  // ascending

  /// Parses `key<TAB>value` lines (`#` comments). Keys 0..99 are units, any
  /// other key is a scale word. Throws Error(kInvalidArgument) when a unit is
  /// missing or scales are not {100, 1000, 100000, 10000000}.
  static NumberWordTable parse(std::string_view tsv);
  static const NumberWordTable& bundled();
};

/// Exact, case-sensitive abbreviation -> expansion map.
class AbbrevTable {
 public:
  AbbrevTable() = default;

  /// Throws Error(kInvalidArgument) for empty keys, self-mappings, duplicate
  /// keys, or expansions that contain digits or another key as a token
  /// (either would make normalization non-idempotent).
  static AbbrevTable parse(std::string_view tsv);
  static const AbbrevTable& bundled();

  const std::string* find(std::string_view token) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

enum class SpanKind { kDigits, kAbbreviation, kPlain };

struct TextSpan {
  std::string text;
  SpanKind kind = SpanKind::kPlain;
};

inline constexpr std::uint64_t kNumberLimit = 1'000'000'000;

/// Throws Error(kOutOfRange) for n >= 10^9.
std::string number_to_words(std::uint64_t n,
                            const NumberWordTable& table = NumberWordTable::bundled());

/// Throws Error(kNotFound) when the token is absent (including "").
std::string expand_abbreviation(std::string_view token,
                                const AbbrevTable& table = AbbrevTable::bundled());

/// Splits text into whitespace runs, abbreviation tokens, maximal digit runs
/// (ASCII or Devanagari) and everything else. Concatenating the spans gives
/// the input back.
std::vector<TextSpan> classify(std::string_view text, const AbbrevTable& abbrev);

struct NormalizeOptions {
  bool numbers = true;
  bool abbreviations = true;
};

/// Replaces digit runs by number words and known abbreviation tokens by their
/// expansions; every other byte, whitespace included, is copied through.
/// Digit runs of 10^9 or more are left unchanged.
std::string normalize_text(std::string_view text,
                           const NumberWordTable& numbers = NumberWordTable::bundled(),
                           const AbbrevTable& abbrev = AbbrevTable::bundled(),
                           NormalizeOptions opts = {});

}  // namespace asrwb::textnorm
