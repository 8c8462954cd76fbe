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

#include "adi/evaluator.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace adi {

namespace {

bool is_trailing_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'':
      return true;
    default:
      return false;
  }
}

std::string normalize_text(std::string_view s) {
  std::string out = collapse_whitespace(ascii_lower(s));
  while (!out.empty() && (is_trailing_punct(out.back()) || out.back() == ' '))
    out.pop_back();
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

std::string name_or_default(const std::string& benchmark) {
  return benchmark.empty() ? "gold" : benchmark;
}

}  // namespace

PairKey normalize_pair(std::string_view sf, std::string_view lf) {
  return {normalize_text(sf), normalize_text(lf)};
}

void GoldSet::add_document(const std::string& doc_id) { entries_[doc_id]; }

void GoldSet::add(const std::string& doc_id, std::string_view sf,
                  std::string_view lf) {
  entries_[doc_id].insert(normalize_pair(sf, lf));
}

bool GoldSet::has_document(const std::string& doc_id) const {
  return entries_.contains(doc_id);
}

bool GoldSet::contains(const std::string& doc_id, std::string_view sf,
                       std::string_view lf) const {
  auto it = entries_.find(doc_id);
  return it != entries_.end() && it->second.contains(normalize_pair(sf, lf));
}

std::size_t GoldSet::pair_count() const {
  std::size_t n = 0;
  for (const auto& [id, pairs] : entries_) n += pairs.size();
  return n;
}

UnknownDocumentError::UnknownDocumentError(std::vector<std::string> ids)
    : std::runtime_error("predictions reference documents missing from gold: " +
                         join(ids)),
      ids_(std::move(ids)) {}

EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn) {
  EvalReport r{tp, fp, fn, 0.0, 0.0, 0.0};
  if (tp + fp > 0) r.precision = double(tp) / double(tp + fp);
  if (tp + fn > 0) r.recall = double(tp) / double(tp + fn);
  if (r.precision + r.recall > 0)
    r.f1 = 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

EvalReport evaluate(const Predictions& predictions, const GoldSet& gold) {
  std::vector<std::string> unknown;
  for (const auto& [id, pairs] : predictions)
    if (!gold.has_document(id)) unknown.push_back(id);
  if (!unknown.empty()) throw UnknownDocumentError(std::move(unknown));

  std::size_t tp = 0, fp = 0, fn = 0;
  static const std::set<PairKey> kNone;
  for (const auto& [id, gold_pairs] : gold.entries()) {
    std::set<PairKey> predicted;
    if (auto it = predictions.find(id); it != predictions.end())
      for (const auto& [sf, lf] : it->second)
        predicted.insert(normalize_pair(sf, lf));
    for (const PairKey& p : predicted) {
      if (gold_pairs.contains(p))
        ++tp;
      else
        ++fp;
    }
    for (const PairKey& g : gold_pairs)
      if (!predicted.contains(g)) ++fn;
  }
  return make_report(tp, fp, fn);
}

std::size_t RankHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

RankHistogram rank_histogram(std::span<const NBestList> lists,
                             const GoldSet& gold, std::size_t k_max) {
  std::size_t bins = k_max;
  for (const NBestList& l : lists) bins = std::max(bins, l.candidates.size());
  RankHistogram h{std::vector<std::size_t>(bins, 0)};
  for (const NBestList& l : lists) {
    std::optional<int> best;
    for (const Candidate& c : l.candidates)
      if (gold.contains(l.doc_id, l.sf, c.lf) && (!best || c.rank < *best))
        best = c.rank;
    if (best) {
      if (static_cast<std::size_t>(*best) >= h.counts.size())
        h.counts.resize(static_cast<std::size_t>(*best) + 1, 0);
      ++h.counts[static_cast<std::size_t>(*best)];
    }
  }
  return h;
}

CharmatchReport charmatch_conditional(
    std::span<const CharmatchObservation> observations) {
  if (observations.empty())
    throw std::invalid_argument("charmatch report needs at least one observation");
  std::size_t correct_match = 0, correct_not = 0;
  CharmatchReport r;
  for (const CharmatchObservation& o : observations) {
    if (o.chosen.features.charmatch == 1) {
      ++r.support_charmatch;
      correct_match += o.correct ? 1 : 0;
    } else {
      ++r.support_not;
      correct_not += o.correct ? 1 : 0;
    }
  }
  if (r.support_charmatch > 0)
    r.p_correct_given_charmatch = double(correct_match) / double(r.support_charmatch);
  if (r.support_not > 0)
    r.p_correct_given_not = double(correct_not) / double(r.support_not);
  return r;
}

std::vector<CharmatchObservation> charmatch_observations(
    std::span<const RerankedList> reranked, const GoldSet& gold) {
  std::vector<CharmatchObservation> out;
  for (const RerankedList& r : reranked) {
    const ScoredCandidate* c = r.chosen();
    if (c == nullptr) continue;
    out.push_back({*c, r.source.sf,
                   gold.contains(r.source.doc_id, r.source.sf, c->candidate.lf)});
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw UndefinedMedianError();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ConfidenceReport confidence_summary(std::span<const RerankedList> reranked,
                                    const GoldSet& gold) {
  std::vector<double> probs;
  for (const RerankedList& r : reranked) {
    const ScoredCandidate* c = r.chosen();
    if (c != nullptr && gold.contains(r.source.doc_id, r.source.sf, c->candidate.lf))
      probs.push_back(c->prob);
  }
  ConfidenceReport report;
  report.n_correct = probs.size();
  report.median_prob_correct = median(std::move(probs));
  return report;
}

Predictions predictions_from(std::span<const RerankedList> reranked) {
  Predictions out;
  for (const RerankedList& r : reranked) {
    auto& pairs = out[r.source.doc_id];
    if (const ScoredCandidate* c = r.chosen())
      pairs.emplace_back(r.source.sf, c->candidate.lf);
  }
  return out;
}

std::string format_f1_table(const std::string& benchmark, const EvalReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "Benchmark" << " | " << std::right
     << std::setw(6) << "P" << std::setw(7) << "R" << std::setw(7) << "F"
     << std::setw(7) << "TP" << std::setw(7) << "FP" << std::setw(7) << "FN"
     << "\n"
     << std::string(12, '-') << "-+-" << std::string(41, '-') << "\n"
     << std::left << std::setw(12) << name_or_default(benchmark) << " | "
     << std::right << std::setw(6) << fixed3(r.precision) << std::setw(7)
     << fixed3(r.recall) << std::setw(7) << fixed3(r.f1) << std::setw(7) << r.tp
     << std::setw(7) << r.fp << std::setw(7) << r.fn << "\n";
  return os.str();
}

std::string format_rank_table(const std::string& benchmark,
                              const RankHistogram& h) {
  std::ostringstream os;
  const std::string name = name_or_default(benchmark);
  const int w = static_cast<int>(std::max<std::size_t>(name.size(), 7));
  os << std::setw(4) << "Rank" << " | " << std::setw(w) << name << "\n"
     << std::string(4, '-') << "-+-" << std::string(w, '-') << "\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    os << std::setw(4) << i << " | " << std::setw(w) << h.counts[i] << "\n";
  return os.str();
}

std::string format_charmatch_table(const std::string& benchmark,
                                   const CharmatchReport& r) {
  auto cell = [](const std::optional<double>& p) {
    return p ? fixed3(*p) : std::string("undef");
  };
  std::ostringstream os;
  os << std::left << std::setw(12) << "Benchmark" << " | " << std::right
     << std::setw(15) << "not charmatch" << std::setw(11) << "charmatch" << "\n"
     << std::string(12, '-') << "-+-" << std::string(26, '-') << "\n"
     << std::left << std::setw(12) << name_or_default(benchmark) << " | "
     << std::right << std::setw(15) << cell(r.p_correct_given_not)
     << std::setw(11) << cell(r.p_correct_given_charmatch) << "\n"
     << std::left << std::setw(12) << "(support)" << " | " << std::right
     << std::setw(15) << r.support_not << std::setw(11) << r.support_charmatch
     << "\n";
  return os.str();
}

std::string format_confidence_table(const std::string& benchmark,
                                    const ConfidenceReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "Benchmark" << " | " << std::right
     << std::setw(16) << "median sigma(z)" << std::setw(10) << "correct" << "\n"
     << std::string(12, '-') << "-+-" << std::string(26, '-') << "\n"
     << std::left << std::setw(12) << name_or_default(benchmark) << " | "
     << std::right << std::setw(16) << fixed3(r.median_prob_correct)
     << std::setw(10) << r.n_correct << "\n";
  return os.str();
}

}  // namespace adi
