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

#include <charconv>
#include <cstdio>

#include "asrwb/cli/cli.hpp"
#include "asrwb/error.hpp"

namespace asrwb::cli {

net::Dataset parse_frame_dataset(std::string_view text) {
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const std::string where = "dataset line " + std::to_string(line_no);
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(Errc::kInvalidArgument, where + ": expected label<TAB>features");
    const std::string_view label = line.substr(0, tab);
    int y = -1;
    if (label != "-") {
      const auto r = std::from_chars(label.data(), label.data() + label.size(), y);
      if (r.ec != std::errc{} || r.ptr != label.data() + label.size() || y < 0)
        throw Error(Errc::kInvalidArgument, where + ": bad label");
    }

    std::size_t count = 0;
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0;
      const auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc{}) throw Error(Errc::kInvalidArgument, where + ": bad number");
      values.push_back(v);
      ++count;
      p = r.ptr;
    }
    if (count == 0) throw Error(Errc::kInvalidArgument, where + ": no features");
    if (width == 0) width = count;
    if (count != width)
      throw Error(Errc::kShapeMismatch, where + ": expected " + std::to_string(width) +
                                            " features, got " + std::to_string(count));
    labels.push_back(y);
  }
  if (labels.empty()) throw Error(Errc::kEmptyInput, "dataset has no frames");

  net::Dataset ds;
  ds.features = net::Matrix(labels.size(), width);
  std::copy(values.begin(), values.end(), ds.features.flat().begin());
  ds.labels = std::move(labels);
  return ds;
}

std::string format_frame_rows(const net::Matrix& frames, int label) {
  std::string out;
  char buf[32];
  const std::string prefix = label < 0 ? "-" : std::to_string(label);
  for (std::size_t r = 0; r < frames.rows(); ++r) {
    out += prefix;
    out.push_back('\t');
    for (std::size_t c = 0; c < frames.cols(); ++c) {
      if (c != 0) out.push_back(' ');
      // %.17g round-trips doubles exactly.
      const int n = std::snprintf(buf, sizeof buf, "%.17g", frames(r, c));
      out.append(buf, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace asrwb::cli
