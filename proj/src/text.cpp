// Copyright 2026 The ADI Rerank Authors.
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

#include "adi/text.hpp"

#include <algorithm>

namespace adi {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text, Span range) {
  std::vector<Token> tokens;
  std::size_t i = range.start;
  const std::size_t end = std::min(range.end, text.size());
  while (i < end) {
    while (i < end && is_space(text[i])) ++i;
    if (i >= end) break;
    std::size_t j = i;
    while (j < end && !is_space(text[j])) ++j;
    Token t{{i, j}, {i, j}};
    while (t.core.start < t.core.end && is_punct(text[t.core.start]))
      ++t.core.start;
    while (t.core.end > t.core.start && is_punct(text[t.core.end - 1]))
      --t.core.end;
    if (t.core.empty()) t.core = Span{t.raw.start, t.raw.start};
    tokens.push_back(t);
    i = j;
  }
  return tokens;
}

}  // namespace adi
