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
#include "asrwb/textnorm/textnorm.hpp"
#include "asrwb/unicode.hpp"

namespace asrwb::textnorm {
namespace {

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// 0..9 for ASCII or Devanagari digits, -1 otherwise.
int digit_value(char32_t c) {
  if (c >= U'0' && c <= U'9') return static_cast<int>(c - U'0');
  if (c >= 0x0966 && c <= 0x096F) return static_cast<int>(c - 0x0966);
  return -1;
}

// Digit runs inside a single non-space token.
void split_digits(std::u32string_view token, std::vector<TextSpan>& out) {
  std::size_t i = 0;
  while (i < token.size()) {
    const bool digits = digit_value(token[i]) >= 0;
    std::size_t j = i;
    while (j < token.size() && (digit_value(token[j]) >= 0) == digits) ++j;
    out.push_back({unicode::encode_utf8(token.substr(i, j - i)),
                   digits ? SpanKind::kDigits : SpanKind::kPlain});
    i = j;
  }
}

std::vector<TextSpan> classify_impl(std::string_view text, const AbbrevTable* abbrev) {
  const std::u32string cps = unicode::decode_utf8(text);
  std::vector<TextSpan> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    const bool space = is_space(cps[i]);
    std::size_t j = i;
    while (j < cps.size() && is_space(cps[j]) == space) ++j;
    const std::u32string_view run(cps.data() + i, j - i);
    if (space) {
      out.push_back({unicode::encode_utf8(run), SpanKind::kPlain});
    } else {
      std::string token = unicode::encode_utf8(run);
      if (abbrev != nullptr && abbrev->find(token) != nullptr)
        out.push_back({std::move(token), SpanKind::kAbbreviation});
      else
        split_digits(run, out);
    }
    i = j;
  }
  return out;
}

// Value of a digit run, or kNumberLimit when it does not fit below it.
std::uint64_t digits_value(std::string_view run) {
  std::uint64_t v = 0;
  for (char32_t c : unicode::decode_utf8(run)) {
    v = v * 10 + static_cast<std::uint64_t>(digit_value(c));
    if (v >= kNumberLimit) return kNumberLimit;
  }
  return v;
}

}  // namespace

std::string number_to_words(std::uint64_t n, const NumberWordTable& table) {
  if (n >= kNumberLimit)
    throw Error(Errc::kOutOfRange,
                std::to_string(n) + " is outside the supported range [0, 10^9)");
  if (n == 0) return table.units[0];

  // crore / lakh / thousand / hundred groups, then the 0..99 remainder.
  const auto& scale = table.scale_words;
  const std::uint64_t groups[4] = {n / 10000000, (n / 100000) % 100,
                                   (n / 1000) % 100, (n / 100) % 10};
  std::string out;
  auto append = [&out](const std::string& word) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  };
  for (int g = 0; g < 4; ++g) {
    if (groups[g] == 0) continue;
    append(table.units[groups[g]]);
    append(scale[3 - g].second);
  }
  if (n % 100 != 0) append(table.units[n % 100]);
  return out;
}

std::string expand_abbreviation(std::string_view token, const AbbrevTable& table) {
  if (const std::string* hit = table.find(token)) return *hit;
  throw Error(Errc::kNotFound, "unknown abbreviation '" + std::string(token) + "'");
}

std::vector<TextSpan> classify(std::string_view text, const AbbrevTable& abbrev) {
  return classify_impl(text, &abbrev);
}

std::string normalize_text(std::string_view text, const NumberWordTable& numbers,
                           const AbbrevTable& abbrev, NormalizeOptions opts) {
  std::string out;
  out.reserve(text.size() * 2);
  for (const TextSpan& span : classify_impl(text, opts.abbreviations ? &abbrev : nullptr)) {
    switch (span.kind) {
      case SpanKind::kAbbreviation:
        out += *abbrev.find(span.text);
        break;
      case SpanKind::kDigits: {
        const std::uint64_t v = opts.numbers ? digits_value(span.text) : kNumberLimit;
        out += v < kNumberLimit ? number_to_words(v, numbers) : span.text;
        break;
      }
      case SpanKind::kPlain:
        out += span.text;
        break;
    }
  }
  return out;
}

}  // namespace asrwb::textnorm
