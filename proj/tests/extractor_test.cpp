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

#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"

namespace adi {
namespace {

std::vector<std::string> window_strings(const Document& d,
                                        const DefinitionSite& s) {
  std::vector<std::string> out;
  for (const Token& t : s.window) out.emplace_back(slice(d.text, t.core));
  return out;
}

// Alphanumeric characters of sf appear in lf in order (case-insensitive).
bool covers_in_order(std::string_view sf, std::string_view lf) {
  std::size_t j = 0;
  for (char c : sf) {
    if (!is_alnum(c)) continue;
    while (j < lf.size() && to_lower(lf[j]) != to_lower(c)) ++j;
    if (j == lf.size()) return false;
    ++j;
  }
  return true;
}

TEST_CASE("find_definition_sites on the canonical example") {
  const Document d{"d", "heat shock protein (HSP)"};
  const auto sites = find_definition_sites(d, 6);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].sf == "HSP");
  CHECK(window_strings(d, sites[0]) ==
        std::vector<std::string>{"heat", "shock", "protein"});
  CHECK(d.text[sites[0].window_span.end + 1] == '(');
}

TEST_CASE("find_definition_sites without parentheses") {
  CHECK(find_definition_sites({"d", "no parentheses at all"}, 5).empty());
}

TEST_CASE("numeric parenthetical is not a short form") {
  CHECK_FALSE(is_plausible_short_form("7.4"));
  CHECK(find_definition_sites({"d", "pH (7.4) was measured"}, 5).empty());
}

TEST_CASE("short-form plausibility filter") {
  CHECK(is_plausible_short_form("HSP"));
  CHECK(is_plausible_short_form("IL-2"));
  CHECK(is_plausible_short_form("HSP 70"));
  CHECK_FALSE(is_plausible_short_form(""));
  CHECK_FALSE(is_plausible_short_form("ABCDEFGHIJK"));  // 11 chars
  CHECK_FALSE(is_plausible_short_form("a b c"));
  CHECK_FALSE(is_plausible_short_form("1998"));
  CHECK_FALSE(is_plausible_short_form("Smith 1998"));
  CHECK_FALSE(is_plausible_short_form("e.g."));
  CHECK_FALSE(is_plausible_short_form("i.e."));
  CHECK_FALSE(is_plausible_short_form("p<0.05"));
}

TEST_CASE("window stops at a sentence boundary and a prior ')'") {
  const Document d{"d", "It was done. Heat shock protein (HSP) binds."};
  auto sites = find_definition_sites(d, 10);
  REQUIRE(sites.size() == 1);
  CHECK(window_strings(d, sites[0]) ==
        std::vector<std::string>{"Heat", "shock", "protein"});

  const Document e{"e", "alpha (A) beta gamma (BG)"};
  sites = find_definition_sites(e, 10);
  REQUIRE(sites.size() == 2);
  CHECK(window_strings(e, sites[1]) == std::vector<std::string>{"beta", "gamma"});
}

TEST_CASE("window honours max_window") {
  const Document d{"d", "one two three four five (OTF)"};
  const auto sites = find_definition_sites(d, 2);
  REQUIRE(sites.size() == 1);
  CHECK(window_strings(d, sites[0]) == std::vector<std::string>{"four", "five"});
  CHECK_THROWS_AS(find_definition_sites(d, 0), std::invalid_argument);
}

TEST_CASE("char_match_lf examples") {
  auto m = char_match_lf("HC", {"patients", "and", "healthy", "controls"});
  REQUIRE(m);
  CHECK(m->lf == "healthy controls");

  m = char_match_lf("HSV", {"Latent", "herpes", "simplex", "virus"});
  REQUIRE(m);
  CHECK(m->lf == "herpes simplex virus");

  CHECK_FALSE(char_match_lf("ABC", {"xyz"}));
}

TEST_CASE("char_match_lf validity constraints") {
  // First short-form character must start a token.
  CHECK_FALSE(char_match_lf("HC", {"the", "achc"}));
  // Identical to the short form ignoring case.
  CHECK_FALSE(char_match_lf("abc", {"ABC"}));
  // Too many tokens: |sf| = 2 allows at most 4.
  CHECK_FALSE(char_match_lf("AB", {"alpha", "x", "y", "z", "w", "beta"}));
  // Contains '('.
  CHECK_FALSE(char_match_lf("AB", {"a(lpha", "beta"}));
  // Case-insensitive.
  auto m = char_match_lf("tnf", {"Tumor", "Necrosis", "Factor"});
  REQUIRE(m);
  CHECK(m->lf == "Tumor Necrosis Factor");
}

TEST_CASE("char_match_lf on offsets into a document") {
  const Document d{"d", "we saw (x) the heat shock protein (HSP) today"};
  const auto sites = find_definition_sites(d, 6);
  REQUIRE(sites.size() == 2);
  const auto m = char_match_lf(sites[1].sf, d.text, sites[1].window);
  REQUIRE(m);
  CHECK(m->lf == "heat shock protein");
  CHECK(slice(d.text, m->lf_span) == "heat shock protein");
}

TEST_CASE("extract_pairs: both definition orders") {
  auto pairs = extract_pairs({"d", "heat shock protein (HSP)"});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].sf == "HSP");
  CHECK(pairs[0].lf == "heat shock protein");
  CHECK(pairs[0].pattern == DefinitionPattern::kLongFormParenShortForm);
  CHECK(pairs[0].lf_span == Span{0, 18});
  CHECK(pairs[0].sf_span == Span{20, 23});

  pairs = extract_pairs({"d", "HSP (heat shock protein)"});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].sf == "HSP");
  CHECK(pairs[0].lf == "heat shock protein");
  CHECK(pairs[0].pattern == DefinitionPattern::kShortFormParenLongForm);
  CHECK(pairs[0].sf_span == Span{0, 3});
  CHECK(pairs[0].lf_span == Span{5, 23});
}

TEST_CASE("extract_pairs: AFC / NFC") {
  const Document d{
      "d",
      "The American Football Conference (AFC) champion Denver Broncos defeated "
      "the National Football Conference (NFC) champion Carolina Panthers 24-10."};
  const auto pairs = extract_pairs(d);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].sf == "AFC");
  CHECK(pairs[0].lf == "American Football Conference");
  CHECK(pairs[1].sf == "NFC");
  CHECK(pairs[1].lf == "National Football Conference");
}

TEST_CASE("extract_pairs: off-by-one examples") {
  auto pairs = extract_pairs({"d", "We compared patients and healthy controls (HC)."});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].lf == "healthy controls");
  pairs = extract_pairs({"d", "Latent herpes simplex virus (HSV) has been demonstrated in..."});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].sf == "HSV");
  CHECK(pairs[0].lf == "herpes simplex virus");
}

TEST_CASE("extract_pairs ignores unparseable regions") {
  CHECK(extract_pairs({"d", ""}).empty());
  CHECK(extract_pairs({"d", "((("}).empty());
  CHECK(extract_pairs({"d", "unclosed (HSP"}).empty());
  CHECK(extract_pairs({"d", "(HSP) at the start"}).empty());
  CHECK(extract_pairs({"d", "values (see Table 2) were"}).empty());
}

TEST_CASE("generate_nbest ordering") {
  const Document d{"d", "patients and healthy controls (HC)"};
  const auto sites = find_definition_sites(d, 4);
  REQUIRE(sites.size() == 1);
  const NBestList l = generate_nbest(d, sites[0], 3);
  REQUIRE(l.candidates.size() == 3);
  CHECK(l.candidates[0].lf == "healthy controls");
  CHECK(l.candidates[1].lf == "controls");
  CHECK(l.candidates[2].lf == "and healthy controls");
  for (int r = 0; r < 3; ++r) CHECK(l.candidates[r].rank == r);

  const NBestList five = generate_nbest(d, sites[0], 5);
  REQUIRE(five.candidates.size() == 4);
  CHECK(five.candidates[3].lf == "patients and healthy controls");

  CHECK(generate_nbest(d, sites[0], 1).candidates.size() == 1);
  CHECK_THROWS_AS(generate_nbest(d, sites[0], 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_nbest(d, sites[0], 6), std::invalid_argument);
}

TEST_CASE("generate_nbest never pads") {
  const Document d{"d", "virus (HSV)"};
  const auto sites = find_definition_sites(d, 6);
  REQUIRE(sites.size() == 1);
  const NBestList l = generate_nbest(d, sites[0], 5);
  REQUIRE(l.candidates.size() == 1);
  CHECK(l.candidates[0].lf == "virus");
}

TEST_CASE("generate_nbest with an empty window") {
  const Document d{"d", "x (AB)"};
  DefinitionSite site{"AB", Span{3, 5}, {}, {}};
  CHECK(generate_nbest(d, site, 5).candidates.empty());
}

// Random documents built from a small vocabulary with embedded definitions.
std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> kWords = {
      "heat", "shock", "protein", "and", "the", "Virus", "simplex", "of",
      "cell", "T-cell", "receptor", "growth", "factor", "(HSP)", "(TCR)",
      "(GF)", "(7.4)", "(e.g.", "x)", "alpha.", "Beta", "(CR", "2019)", "(a)"};
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  std::string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (i > 0) s += (rng() % 7 == 0) ? "  " : " ";
    s += kWords[pick(rng)];
  }
  return s;
}

TEST_CASE("extraction invariants on random text") {
  std::mt19937_64 rng(20261018);
  for (int iter = 0; iter < 2000; ++iter) {
    const Document d{"r", random_text(rng)};
    const auto pairs = extract_pairs(d);
    CHECK(pairs == extract_pairs(d));  // deterministic
    if (d.text.find('(') == std::string::npos) {
      CHECK(pairs.empty());
      CHECK(find_definition_sites(d, 5).empty());
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const SfLfPair& p = pairs[i];
      CHECK(!p.sf.empty());
      CHECK(p.sf.size() < p.lf.size());
      CHECK(covers_in_order(p.sf, p.lf));
      CHECK(slice(d.text, p.sf_span) == p.sf);
      CHECK(slice(d.text, p.lf_span) == p.lf);
      CHECK((p.sf_span.end <= p.lf_span.start || p.lf_span.end <= p.sf_span.start));
      if (p.pattern == DefinitionPattern::kLongFormParenShortForm) {
        CHECK(p.lf_span.end < p.sf_span.start);
        const std::string_view between =
            std::string_view(d.text).substr(p.lf_span.end, p.sf_span.start - p.lf_span.end);
        // Only punctuation and spacing separate the long form from '('.
        CHECK(trim(between).ends_with('('));
        for (char c : between) CHECK((is_space(c) || is_punct(c)));
      }
      if (i > 0) CHECK(pairs[i - 1].sf_span.start <= p.sf_span.start);
    }
    for (const DefinitionSite& s : find_definition_sites(d, 6)) {
      for (std::size_t k = 1; k <= 5; ++k) {
        const NBestList l = generate_nbest(d, s, k);
        CHECK(l.candidates.size() <= k);
        std::set<std::string> distinct;
        for (std::size_t r = 0; r < l.candidates.size(); ++r) {
          CHECK(l.candidates[r].rank == static_cast<int>(r));
          distinct.insert(l.candidates[r].lf);
        }
        CHECK(distinct.size() == l.candidates.size());
      }
    }
  }
}

}  // namespace
}  // namespace adi
