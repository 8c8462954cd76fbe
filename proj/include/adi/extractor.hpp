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

// Definition extraction: locates parenthetical definition sites, pairs short
// forms with long forms by right-to-left character matching, and produces
// n-best long-form candidate lists for the reranker.

#ifndef ADI_EXTRACTOR_HPP_
#define ADI_EXTRACTOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adi/text.hpp"

namespace adi {

inline constexpr std::size_t kDefaultMaxCandidates = 5;

enum class DefinitionPattern {
  kLongFormParenShortForm,  // heat shock protein (HSP)
  kShortFormParenLongForm,  // HSP (heat shock protein)
};

std::string_view pattern_name(DefinitionPattern p);

struct SfLfPair {
  std::string sf;
  std::string lf;
  Span sf_span;
  Span lf_span;
  DefinitionPattern pattern = DefinitionPattern::kLongFormParenShortForm;

  friend bool operator==(const SfLfPair&, const SfLfPair&) = default;
};

struct DefinitionSite {
  std::string sf;
  Span sf_span;
  // Tokens immediately preceding the '(' in reading order, nearest last.
  std::vector<Token> window;
  Span window_span;
};

struct Candidate {
  std::string lf;
  int rank = 0;
  std::optional<double> generator_score;
};

struct NBestList {
  std::string doc_id;
  std::string sf;
  Span sf_span;
  std::vector<Candidate> candidates;
};

struct LongFormMatch {
  std::string lf;
  Span lf_span;
};

// True when a parenthesized string looks like a short form: 1-10 characters,
// at least one letter, at most two tokens, and not a number, year or
// citation marker such as "e.g.".
bool is_plausible_short_form(std::string_view s);

// Window cap for a short form: min(|sf| + 5, 2 * |sf|) tokens.
std::size_t default_max_window(std::string_view sf);

std::vector<DefinitionSite> find_definition_sites(const Document& doc,
                                                  std::size_t max_window);

// Finds the shortest suffix of `window` whose tokens cover every
// alphanumeric character of `sf` in order (case-insensitive, matched from
// the right). The first short-form character must land on the first
// alphanumeric character of a token. `text` is the string the token offsets
// refer to.
std::optional<LongFormMatch> char_match_lf(std::string_view sf,
                                           std::string_view text,
                                           const std::vector<Token>& window);

// Convenience overload for a bare token list; tokens are joined with single
// spaces and the returned span indexes that joined string.
std::optional<LongFormMatch> char_match_lf(
    std::string_view sf, const std::vector<std::string>& window);

std::vector<SfLfPair> extract_pairs(const Document& doc);

// Surrogate n-best generator: window suffixes ending at the token before
// '('. Rank 0 is the character-match long form when one exists; the rest
// are ordered by |token count - |sf|| and then by length.
NBestList generate_nbest(const Document& doc, const DefinitionSite& site,
                         std::size_t k,
                         std::size_t k_max = kDefaultMaxCandidates);

// Runs find_definition_sites with the per-short-form window cap and
// generates an n-best list for each site.
std::vector<NBestList> generate_all_nbest(
    const Document& doc, std::size_t k,
    std::size_t k_max = kDefaultMaxCandidates);

}  // namespace adi

#endif  // ADI_EXTRACTOR_HPP_
