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

#ifndef ADI_TEXT_HPP_
#define ADI_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace adi {

// Half-open character range [start, end) into a document's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool empty() const { return end <= start; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Document {
  std::string id;
  std::string text;
};

// A whitespace-delimited token. `raw` covers the full run of non-space
// characters; `core` is the same run with leading/trailing punctuation
// stripped (empty when the token is punctuation only).
struct Token {
  Span raw;
  Span core;
};

// ASCII-only classification; bytes >= 0x80 are treated as letters so that
// UTF-8 sequences never split tokens or count as punctuation.
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || is_upper(c) ||
         static_cast<unsigned char>(c) >= 0x80;
}
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
inline bool is_punct(char c) {
  return !is_space(c) && !is_alnum(c) && static_cast<unsigned char>(c) > 0x20;
}
inline char to_lower(char c) { return is_upper(c) ? char(c - 'A' + 'a') : c; }

std::string ascii_lower(std::string_view s);

// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

// Collapses runs of whitespace to a single space and trims the ends.
std::string collapse_whitespace(std::string_view s);

// Splits text[range] into whitespace-delimited tokens with absolute offsets.
std::vector<Token> tokenize(std::string_view text, Span range);
inline std::vector<Token> tokenize(std::string_view text) {
  return tokenize(text, Span{0, text.size()});
}

inline std::string_view slice(std::string_view text, Span s) {
  return text.substr(s.start, s.end - s.start);
}

}  // namespace adi

#endif  // ADI_TEXT_HPP_
