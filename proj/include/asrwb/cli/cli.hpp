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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "asrwb/net/train.hpp"

namespace asrwb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// args excludes the program name. Structured output goes to `out`,
/// diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Frame datasets are text, one frame per line: `label<TAB>f1 f2 ... fB`.
/// A label of "-" marks an unlabelled frame (stored as -1). Blank lines and
/// lines starting with '#' are skipped.
net::Dataset parse_frame_dataset(std::string_view text);
std::string format_frame_rows(const net::Matrix& frames, int label);

}  // namespace asrwb::cli
