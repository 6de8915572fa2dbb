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

#include "asrwb/service/auth.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <charconv>
#include <stdexcept>
#include <vector>

#include "asrwb/error.hpp"

namespace asrwb::service {
namespace {

constexpr std::string_view kScheme = "pbkdf2-sha256";
constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kHashBytes = 32;

std::string to_hex(const unsigned char* p, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = kDigits[p[i] >> 4];
    out[2 * i + 1] = kDigits[p[i] & 0xF];
  }
  return out;
}

bool from_hex(std::string_view hex, std::vector<unsigned char>& out) {
  if (hex.size() % 2 != 0) return false;
  out.resize(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned v = 0;
    const auto r = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, v, 16);
    if (r.ec != std::errc{} || r.ptr != hex.data() + 2 * i + 2) return false;
    out[i] = static_cast<unsigned char>(v);
  }
  return true;
}

void random_bytes(unsigned char* p, std::size_t n) {
  if (RAND_bytes(p, static_cast<int>(n)) != 1)
    throw Error(Errc::kIo, "system random source unavailable");
}

void derive(std::string_view password, const unsigned char* salt, std::size_t salt_len,
            int iterations, unsigned char* out) {
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt,
                        static_cast<int>(salt_len), iterations, EVP_sha256(),
                        static_cast<int>(kHashBytes), out) != 1)
    throw Error(Errc::kIo, "PBKDF2 failed");
}

}  // namespace

std::string hash_password(std::string_view password, int iterations) {
  if (iterations < 1) throw Error(Errc::kInvalidArgument, "iterations must be positive");
  unsigned char salt[kSaltBytes];
  unsigned char hash[kHashBytes];
  random_bytes(salt, sizeof salt);
  derive(password, salt, sizeof salt, iterations, hash);
  return std::string(kScheme) + "$" + std::to_string(iterations) + "$" +
         to_hex(salt, sizeof salt) + "$" + to_hex(hash, sizeof hash);
}

bool verify_password(std::string_view password, std::string_view stored) {
  std::string_view parts[4];
  std::size_t n = 0;
  while (n < 4) {
    const std::size_t d = stored.find('$');
    parts[n++] = stored.substr(0, d);
    if (d == std::string_view::npos) break;
    stored.remove_prefix(d + 1);
  }
  if (n != 4 || parts[0] != kScheme) return false;
  int iterations = 0;
  const auto r = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), iterations);
  if (r.ec != std::errc{} || iterations < 1) return false;
  std::vector<unsigned char> salt, expected;
  if (!from_hex(parts[2], salt) || !from_hex(parts[3], expected) ||
      expected.size() != kHashBytes)
    return false;
  unsigned char actual[kHashBytes];
  derive(password, salt.data(), salt.size(), iterations, actual);
  return CRYPTO_memcmp(actual, expected.data(), kHashBytes) == 0;
}

std::string random_token() {
  unsigned char bytes[32];
  random_bytes(bytes, sizeof bytes);
  return to_hex(bytes, sizeof bytes);
}

}  // namespace asrwb::service
