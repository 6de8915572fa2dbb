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

#include "asrwb/unicode.hpp"

#include "asrwb/error.hpp"

namespace asrwb {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMalformedContainer: return "MalformedContainer";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kUpsampleUnsupported: return "UpsampleUnsupported";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kSegmentOutOfRange: return "SegmentOutOfRange";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kNotFound: return "NotFound";
    case Errc::kNonDevanagariCodepoint: return "NonDevanagariCodepoint";
    case Errc::kMalformedWord: return "MalformedWord";
    case Errc::kShapeMismatch: return "ShapeMismatch";
    case Errc::kTooShort: return "TooShort";
    case Errc::kTooFewFrames: return "TooFewFrames";
    case Errc::kAuthFailed: return "AuthFailed";
    case Errc::kVersionConflict: return "VersionConflict";
    case Errc::kNoModelLoaded: return "NoModelLoaded";
    case Errc::kIo: return "IoError";
  }
  return "Unknown";
}

namespace unicode {

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  auto fail = [&] {
    throw Error(Errc::kInvalidArgument,
                "invalid UTF-8 at byte " + std::to_string(i));
  };
  while (i < bytes.size()) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    int len;
    char32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      fail();
    }
    if (i + len > bytes.size()) fail();
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) fail();
      cp = (cp << 6) | (b & 0x3F);
    }
    // overlong forms, surrogates, out of range
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      fail();
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 3);
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

}  // namespace unicode
}  // namespace asrwb
