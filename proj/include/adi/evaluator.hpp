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

#ifndef ADI_EVALUATOR_HPP_
#define ADI_EVALUATOR_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adi/extractor.hpp"
#include "adi/reranker.hpp"

namespace adi {

using PairKey = std::pair<std::string, std::string>;  // (sf, lf)

// Lowercases, collapses whitespace, trims, and drops trailing sentence
// punctuation from both strings.
PairKey normalize_pair(std::string_view sf, std::string_view lf);

class GoldSet {
 public:
  explicit GoldSet(std::string name = {}) : name_(std::move(name)) {}

  // Registers a document that may have no gold pairs.
  void add_document(const std::string& doc_id);
  void add(const std::string& doc_id, std::string_view sf, std::string_view lf);

  bool has_document(const std::string& doc_id) const;
  // True if (sf, lf) is a gold pair of doc_id after normalization.
  bool contains(const std::string& doc_id, std::string_view sf,
                std::string_view lf) const;

  const std::string& name() const { return name_; }
  const std::map<std::string, std::set<PairKey>>& entries() const {
    return entries_;
  }
  std::size_t pair_count() const;

 private:
  std::string name_;
  std::map<std::string, std::set<PairKey>> entries_;
};

using Predictions = std::map<std::string, std::vector<PairKey>>;

struct EvalReport {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

class UnknownDocumentError : public std::runtime_error {
 public:
  explicit UnknownDocumentError(std::vector<std::string> ids);
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn);

// Micro-averaged P/R/F over normalized, de-duplicated pairs.
EvalReport evaluate(const Predictions& predictions, const GoldSet& gold);

struct RankHistogram {
  std::vector<std::size_t> counts;
  std::size_t total() const;
};

// Lowest gold-matching rank per list. Bins cover max(k_max, longest list).
RankHistogram rank_histogram(std::span<const NBestList> lists,
                             const GoldSet& gold,
                             std::size_t k_max = kDefaultMaxCandidates);

struct CharmatchObservation {
  ScoredCandidate chosen;
  std::string sf;
  bool correct = false;
};

struct CharmatchReport {
  std::optional<double> p_correct_given_charmatch;
  std::optional<double> p_correct_given_not;
  std::size_t support_charmatch = 0;
  std::size_t support_not = 0;
};

// Throws std::invalid_argument when there are no observations.
CharmatchReport charmatch_conditional(
    std::span<const CharmatchObservation> observations);

// Observations for the chosen candidate of every non-empty reranked list.
std::vector<CharmatchObservation> charmatch_observations(
    std::span<const RerankedList> reranked, const GoldSet& gold);

struct ConfidenceReport {
  double median_prob_correct = 0.0;
  std::size_t n_correct = 0;
};

class UndefinedMedianError : public std::runtime_error {
 public:
  UndefinedMedianError()
      : std::runtime_error(
            "confidence median is undefined: no chosen candidate is correct") {}
};

double median(std::vector<double> values);

ConfidenceReport confidence_summary(std::span<const RerankedList> reranked,
                                    const GoldSet& gold);

// Chosen (sf, lf) per document; documents with empty lists appear with no
// pairs.
Predictions predictions_from(std::span<const RerankedList> reranked);

// Plain-text tables laid out like the published ones.
std::string format_f1_table(const std::string& benchmark, const EvalReport& r);
std::string format_rank_table(const std::string& benchmark,
                              const RankHistogram& h);
std::string format_charmatch_table(const std::string& benchmark,
                                   const CharmatchReport& r);
std::string format_confidence_table(const std::string& benchmark,
                                    const ConfidenceReport& r);

}  // namespace adi

#endif  // ADI_EVALUATOR_HPP_
