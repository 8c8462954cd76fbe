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

#include "adi/extractor.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace adi {

namespace {

constexpr std::size_t kMaxShortFormChars = 10;
constexpr std::size_t kMaxShortFormTokens = 2;

// One '(' ... ')' pair with no nested '(' inside.
struct Parenthetical {
  std::size_t open = 0;
  std::size_t close = 0;
  Span content;  // trimmed
};

std::vector<Parenthetical> scan_parentheticals(std::string_view text) {
  std::vector<Parenthetical> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '(') continue;
    std::size_t j = i + 1;
    while (j < text.size() && text[j] != ')' && text[j] != '(') ++j;
    if (j >= text.size() || text[j] == '(') continue;
    Span content{i + 1, j};
    while (content.start < content.end && is_space(text[content.start]))
      ++content.start;
    while (content.end > content.start && is_space(text[content.end - 1]))
      --content.end;
    if (content.empty()) continue;
    out.push_back({i, j, content});
  }
  return out;
}

bool is_sentence_end(char c) { return c == '.' || c == '!' || c == '?'; }

bool looks_like_year(std::string_view s) {
  if (s.size() < 4 || s.size() > 5) return false;
  for (std::size_t i = 0; i < 4; ++i)
    if (!is_digit(s[i])) return false;
  if (s.size() == 5 && !(s[4] >= 'a' && s[4] <= 'z')) return false;
  return (s[0] == '1' && (s[1] == '8' || s[1] == '9')) ||
         (s[0] == '2' && s[1] == '0');
}

bool looks_like_citation(std::string_view s) {
  static constexpr std::string_view kMarkers[] = {
      "e.g", "i.e", "cf.", "cf ", "see ", "et al", "ibid", "fig", "table",
      "ref", "eq.", "p<", "p=", "n="};
  const std::string lower = ascii_lower(s);
  for (std::string_view m : kMarkers)
    if (lower.starts_with(m)) return true;
  for (const Token& t : tokenize(s))
    if (looks_like_year(slice(s, t.core))) return true;
  return false;
}

// Tokens of text[lo, open) trimmed to the sentence containing `open` and
// capped at `max_window` nearest tokens.
std::vector<Token> window_before(std::string_view text, std::size_t open,
                                 std::size_t max_window) {
  std::size_t lo = 0;
  if (open > 0) {
    std::size_t prev = text.rfind(')', open - 1);
    if (prev != std::string_view::npos) lo = prev + 1;
  }
  std::vector<Token> tokens = tokenize(text, Span{lo, open});
  std::size_t first = tokens.size();
  while (first > 0 && tokens.size() - first < max_window) {
    const Token& prev = tokens[first - 1];
    if (first < tokens.size()) {
      const Token& next = tokens[first];
      if (is_sentence_end(text[prev.raw.end - 1]) &&
          is_upper(text[next.raw.start]))
        break;
    }
    --first;
  }
  tokens.erase(tokens.begin(), tokens.begin() + static_cast<long>(first));
  return tokens;
}

// End offset of the last token with a non-empty core, or npos.
std::size_t last_core_end(const std::vector<Token>& window) {
  for (auto it = window.rbegin(); it != window.rend(); ++it)
    if (!it->core.empty()) return it->core.end;
  return std::string_view::npos;
}

bool equals_ignore_case(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  return true;
}

std::size_t short_form_length(std::string_view sf) { return sf.size(); }

}  // namespace

std::string_view pattern_name(DefinitionPattern p) {
  switch (p) {
    case DefinitionPattern::kLongFormParenShortForm:
      return "LF_PAREN_SF";
    case DefinitionPattern::kShortFormParenLongForm:
      return "SF_PAREN_LF";
  }
  return "?";
}

bool is_plausible_short_form(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.size() > kMaxShortFormChars) return false;
  if (std::none_of(s.begin(), s.end(), is_alpha)) return false;
  if (tokenize(s).size() > kMaxShortFormTokens) return false;
  if (s.find_first_of(",;=<>()") != std::string_view::npos) return false;
  return !looks_like_citation(s);
}

std::size_t default_max_window(std::string_view sf) {
  const std::size_t n = short_form_length(sf);
  return std::min(n + 5, 2 * n);
}

std::vector<DefinitionSite> find_definition_sites(const Document& doc,
                                                  std::size_t max_window) {
  if (max_window == 0)
    throw std::invalid_argument("max_window must be at least 1");
  std::vector<DefinitionSite> sites;
  const std::string_view text = doc.text;
  for (const Parenthetical& p : scan_parentheticals(text)) {
    const std::string_view content = slice(text, p.content);
    if (!is_plausible_short_form(content)) continue;
    std::vector<Token> window = window_before(text, p.open, max_window);
    if (window.empty()) continue;
    DefinitionSite site;
    site.sf = std::string(content);
    site.sf_span = p.content;
    site.window_span = Span{window.front().raw.start, window.back().raw.end};
    site.window = std::move(window);
    sites.push_back(std::move(site));
  }
  return sites;
}

std::optional<LongFormMatch> char_match_lf(std::string_view sf,
                                           std::string_view text,
                                           const std::vector<Token>& window) {
  if (sf.empty() || window.empty()) return std::nullopt;
  const std::size_t lf_end = last_core_end(window);
  if (lf_end == std::string_view::npos) return std::nullopt;

  std::size_t first_sf = 0;
  while (first_sf < sf.size() && !is_alnum(sf[first_sf])) ++first_sf;
  if (first_sf == sf.size()) return std::nullopt;

  // Walk (token, offset) right to left over token cores.
  long tok = static_cast<long>(window.size()) - 1;
  long pos = static_cast<long>(window[tok].core.end) - 1;
  auto step_back = [&] {
    --pos;
    while (tok >= 0 && pos < static_cast<long>(window[tok].core.start)) {
      if (--tok >= 0) pos = static_cast<long>(window[tok].core.end) - 1;
    }
  };
  if (pos < static_cast<long>(window[tok].core.start)) step_back();

  auto token_initial = [&](long t, long p) {
    for (long q = static_cast<long>(window[t].core.start); q < p; ++q)
      if (is_alnum(text[q])) return false;
    return true;
  };

  long lf_token = -1;
  for (long si = static_cast<long>(sf.size()) - 1;
       si >= static_cast<long>(first_sf); --si) {
    const char c = to_lower(sf[si]);
    if (!is_alnum(c)) continue;
    const bool need_initial = si == static_cast<long>(first_sf);
    while (tok >= 0 &&
           (to_lower(text[pos]) != c || (need_initial && !token_initial(tok, pos))))
      step_back();
    if (tok < 0) return std::nullopt;
    lf_token = tok;
    step_back();
  }

  const Span lf_span{window[lf_token].core.start, lf_end};
  const std::string_view lf = slice(text, lf_span);
  const std::size_t n_tokens = window.size() - static_cast<std::size_t>(lf_token);
  if (n_tokens > default_max_window(sf)) return std::nullopt;
  if (lf.find('(') != std::string_view::npos) return std::nullopt;
  if (equals_ignore_case(trim(lf), trim(sf))) return std::nullopt;
  return LongFormMatch{std::string(lf), lf_span};
}

std::optional<LongFormMatch> char_match_lf(
    std::string_view sf, const std::vector<std::string>& window) {
  std::string joined;
  for (const std::string& w : window) {
    if (!joined.empty()) joined.push_back(' ');
    joined += w;
  }
  return char_match_lf(sf, joined, tokenize(joined));
}

std::vector<SfLfPair> extract_pairs(const Document& doc) {
  std::vector<SfLfPair> pairs;
  const std::string_view text = doc.text;
  for (const Parenthetical& p : scan_parentheticals(text)) {
    const std::string_view content = slice(text, p.content);
    if (is_plausible_short_form(content)) {
      const std::vector<Token> window =
          window_before(text, p.open, default_max_window(content));
      auto m = char_match_lf(content, text, window);
      if (!m || m->lf.size() <= content.size()) continue;
      pairs.push_back({std::string(content), std::move(m->lf), p.content,
                       m->lf_span, DefinitionPattern::kLongFormParenShortForm});
      continue;
    }
    // SF (LF): the token right before '(' is the short form.
    const std::vector<Token> before = window_before(text, p.open, 1);
    if (before.empty() || before.back().core.empty()) continue;
    const Span sf_span = before.back().core;
    const std::string_view sf = slice(text, sf_span);
    if (!is_plausible_short_form(sf)) continue;
    const std::vector<Token> lf_window = tokenize(text, p.content);
    auto m = char_match_lf(sf, text, lf_window);
    if (!m || m->lf.size() <= sf.size()) continue;
    pairs.push_back({std::string(sf), std::move(m->lf), sf_span, m->lf_span,
                     DefinitionPattern::kShortFormParenLongForm});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const SfLfPair& a, const SfLfPair& b) {
                     return a.sf_span.start < b.sf_span.start;
                   });
  return pairs;
}

NBestList generate_nbest(const Document& doc, const DefinitionSite& site,
                         std::size_t k, std::size_t k_max) {
  if (k < 1 || k > k_max)
    throw std::invalid_argument("n-best size must be in 1.." +
                                std::to_string(k_max));
  NBestList out{doc.id, site.sf, site.sf_span, {}};
  const std::size_t lf_end = last_core_end(site.window);
  if (lf_end == std::string_view::npos) return out;
  const std::string_view text = doc.text;

  struct Suffix {
    std::string lf;
    std::size_t tokens;
  };
  std::vector<Suffix> suffixes;
  for (std::size_t j = site.window.size(); j-- > 0;) {
    if (site.window[j].core.empty()) continue;
    std::string lf(slice(text, Span{site.window[j].core.start, lf_end}));
    if (std::any_of(suffixes.begin(), suffixes.end(),
                    [&](const Suffix& s) { return s.lf == lf; }))
      continue;
    suffixes.push_back({std::move(lf), site.window.size() - j});
  }

  std::vector<std::string> ordered;
  if (auto m = char_match_lf(site.sf, text, site.window)) {
    ordered.push_back(m->lf);
    std::erase_if(suffixes, [&](const Suffix& s) { return s.lf == m->lf; });
  }
  const auto target = static_cast<long>(short_form_length(site.sf));
  std::stable_sort(suffixes.begin(), suffixes.end(),
                   [&](const Suffix& a, const Suffix& b) {
                     const long da = std::labs(static_cast<long>(a.tokens) - target);
                     const long db = std::labs(static_cast<long>(b.tokens) - target);
                     if (da != db) return da < db;
                     return a.tokens < b.tokens;
                   });
  for (Suffix& s : suffixes) ordered.push_back(std::move(s.lf));

  for (std::size_t r = 0; r < ordered.size() && r < k; ++r)
    out.candidates.push_back({std::move(ordered[r]), static_cast<int>(r), {}});
  return out;
}

std::vector<NBestList> generate_all_nbest(const Document& doc, std::size_t k,
                                          std::size_t k_max) {
  std::vector<NBestList> lists;
  const std::string_view text = doc.text;
  for (const Parenthetical& p : scan_parentheticals(text)) {
    const std::string_view content = slice(text, p.content);
    if (!is_plausible_short_form(content)) continue;
    std::vector<Token> window =
        window_before(text, p.open, default_max_window(content));
    if (window.empty()) continue;
    DefinitionSite site{std::string(content), p.content, std::move(window), {}};
    site.window_span = Span{site.window.front().raw.start,
                            site.window.back().raw.end};
    lists.push_back(generate_nbest(doc, site, k, k_max));
  }
  return lists;
}

}  // namespace adi
