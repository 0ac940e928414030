// Copyright 2026 The ringret Authors.
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

// Line and field helpers shared by the text format parsers.

#ifndef RINGRET_SRC_TEXT_FIELDS_HPP_
#define RINGRET_SRC_TEXT_FIELDS_HPP_

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "ringret/errors.hpp"

namespace ringret::text {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos
                                         ? std::string_view::npos
                                         : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

// Calls `fn(line, line_no)` for every non-empty line; strips a trailing CR.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos
                                     ? std::string_view::npos
                                     : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) fn(line, line_no);
  }
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("bad number '" + std::string(s) + "'", line);
  }
  return v;
}

inline long long parse_int(std::string_view s, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + std::string(s) + "'", line);
  }
  return v;
}

}  // namespace ringret::text

#endif  // RINGRET_SRC_TEXT_FIELDS_HPP_
