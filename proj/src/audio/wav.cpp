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
#include <array>
#include <cmath>
#include <cstring>
#include <string>

#include "asrwb/audio/audio.hpp"
#include "asrwb/error.hpp"

namespace asrwb::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(Errc::kMalformedContainer, "malformed WAV: " + why);
}

struct Located {
  WavInfo info;
  std::size_t data_offset = 0;
};

Located locate(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    malformed("missing RIFF/WAVE magic");

  // Some writers put a bogus RIFF size on streamed files; chunk bounds are
  // checked against the real buffer instead.
  std::size_t pos = 12;
  bool have_fmt = false;
  Located out;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) malformed("truncated chunk");

    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) malformed("fmt chunk too short");
      std::uint16_t format = read_u16(bytes, body);
      const std::uint16_t channels = read_u16(bytes, body + 2);
      const std::uint32_t rate = read_u32(bytes, body + 4);
      const std::uint16_t bits = read_u16(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) malformed("extensible fmt chunk too short");
        format = read_u16(bytes, body + 24);  // first two bytes of the GUID
      }
      if (format != kFormatPcm || bits != 16)
        throw Error(Errc::kUnsupportedEncoding,
                    "only 16-bit PCM is supported (format tag " +
                        std::to_string(format) + ", " + std::to_string(bits) +
                        " bits)");
      if (channels == 0 || rate == 0 || rate > 0x7fffffffu)
        malformed("zero channels or invalid sample rate");
      out.info.channels = channels;
      out.info.sample_rate_hz = static_cast<int>(rate);
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) malformed("data chunk before fmt chunk");
      if (size % (2u * static_cast<std::uint32_t>(out.info.channels)) != 0)
        malformed("data length is not a whole number of frames");
      out.info.data_byte_length = size;
      out.data_offset = body;
      return out;
    }
    pos = body + size + (size & 1u);
  }
  malformed(have_fmt ? "no data chunk" : "no fmt chunk");
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavInfo probe_wav(std::span<const std::uint8_t> bytes) { return locate(bytes).info; }

AudioBuffer parse_wav(std::span<const std::uint8_t> bytes) {
  const Located loc = locate(bytes);
  AudioBuffer buf;
  buf.sample_rate_hz = loc.info.sample_rate_hz;
  buf.channels = loc.info.channels;
  const std::size_t count = loc.info.data_byte_length / 2;
  buf.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::int16_t>(read_u16(bytes, loc.data_offset + 2 * i));
    buf.samples[i] = static_cast<float>(v) / 32768.0f;
  }
  return buf;
}

std::int16_t quantize_sample(float sample) {
  const double scaled = std::round(static_cast<double>(sample) * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

std::vector<std::uint8_t> write_wav(const AudioBuffer& buffer) {
  if (buffer.channels <= 0 || buffer.sample_rate_hz <= 0 ||
      buffer.samples.size() % static_cast<std::size_t>(buffer.channels) != 0)
    throw Error(Errc::kInvalidArgument, "invalid audio buffer metadata");
  const auto channels = static_cast<std::uint16_t>(buffer.channels);
  const auto rate = static_cast<std::uint32_t>(buffer.sample_rate_hz);
  const auto data_len = static_cast<std::uint32_t>(buffer.samples.size() * 2);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_len);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * 2);
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_len);
  for (float s : buffer.samples) put_u16(out, static_cast<std::uint16_t>(quantize_sample(s)));
  return out;
}

}  // namespace asrwb::audio
