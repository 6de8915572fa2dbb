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

#include <string>
#include <string_view>

namespace asrwb::service {

inline constexpr int kDefaultPbkdf2Iterations = 60000;

/// "pbkdf2-sha256$<iterations>$<salt hex>$<hash hex>" with a fresh 16-byte salt.
std::string hash_password(std::string_view password,
                          int iterations = kDefaultPbkdf2Iterations);

/// Constant-time comparison against a hash_password() string. Malformed
/// stored hashes never verify.
bool verify_password(std::string_view password, std::string_view stored);

/// 32 random bytes, hex encoded.
std::string random_token();

}  // namespace asrwb::service
