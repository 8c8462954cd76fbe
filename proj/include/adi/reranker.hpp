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

// Logistic-regression reranking of n-best long-form candidates.
//
// Each candidate gets three features: its n-best rank, whether its first
// letter matches the short form's (charmatch), and log(1 + freq) where freq
// is the corpus count of the string "LF (SF". The linear score is
//
//   z = b0 + b1 * rank + b2 * charmatch + b3 * log(1 + freq)
//
// and candidates are re-sorted by z. Twelve fitted coefficient sets are
// built in; `train` fits new ones.

#ifndef ADI_RERANKER_HPP_
#define ADI_RERANKER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adi/extractor.hpp"
#include "adi/suffix_index.hpp"

namespace adi {

enum class FeatureSet {
  kRank = 1,
  kRankCharmatch = 2,
  kRankCharmatchFreq = 3,
};

std::string_view feature_set_name(FeatureSet fs);
// Accepts the names above ("RANK_ONLY", ...) or "1", "2", "3".
FeatureSet parse_feature_set(std::string_view s);
// Number of coefficients including the intercept.
inline int active_coefficients(FeatureSet fs) { return static_cast<int>(fs) + 1; }

struct FeatureVector {
  int rank = 0;
  int charmatch = 0;
  double log1p_freq = 0.0;
};

struct ModelCoefficients {
  std::array<double, 4> beta{};  // intercept, rank, charmatch, log1p_freq
  FeatureSet feature_set = FeatureSet::kRankCharmatchFreq;
  // 1..12 for a built-in model, nullopt for a trained one.
  std::optional<int> preset_id;

  double beta0() const { return beta[0]; }
  double beta1() const { return beta[1]; }
  double beta2() const { return beta[2]; }
  double beta3() const { return beta[3]; }

  // Coefficients outside the feature set must be exactly zero.
  bool consistent() const;
  std::string source_name() const;

  friend bool operator==(const ModelCoefficients&,
                         const ModelCoefficients&) = default;
};

inline constexpr int kPresetCount = 12;

// Built-in model `id` (1..12). Models 1-4 use rank only, 5-8 add charmatch,
// 9-12 add log(1+freq). Throws std::out_of_range otherwise.
ModelCoefficients preset(int id);

struct ScoredCandidate {
  Candidate candidate;
  FeatureVector features;
  double z = 0.0;
  double prob = 0.5;
};

struct RerankedList {
  NBestList source;
  std::vector<ScoredCandidate> scored;  // z descending, ties by rank

  const ScoredCandidate* chosen() const {
    return scored.empty() ? nullptr : &scored.front();
  }
};

struct TrainingInstance {
  FeatureVector features;
  int label = 0;
};

double sigmoid(double z);

// 1 iff the first alphanumeric characters of sf and lf agree, ignoring case.
int charmatch(std::string_view sf, std::string_view lf);

// freq is looked up as "LF (SF" with whitespace in lf collapsed; without an
// index the frequency feature is 0.
FeatureVector featurize(const Candidate& candidate, std::string_view sf,
                        const SuffixIndex* index);

struct Score {
  double z;
  double prob;
};

Score score(const ModelCoefficients& coeffs, const FeatureVector& fv);

RerankedList rerank(const NBestList& nbest, const ModelCoefficients& coeffs,
                    const SuffixIndex* index);

struct TrainOptions {
  double l2 = 1e-6;
  double tol = 1e-8;
  int max_iter = 100;
};

struct TrainResult {
  ModelCoefficients model;
  int iterations = 0;
  double gradient_norm = 0.0;
};

class DegenerateDataError : public std::runtime_error {
 public:
  explicit DegenerateDataError(int only_label);
  int only_label() const { return only_label_; }

 private:
  int only_label_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const ModelCoefficients& last, double gradient_norm,
                   int iterations);
  const ModelCoefficients& last_iterate() const { return last_; }
  double gradient_norm() const { return gradient_norm_; }

 private:
  ModelCoefficients last_;
  double gradient_norm_;
};

// Maximizes the L2-penalized Bernoulli log-likelihood by Newton-Raphson
// (IRLS) with step halving. All active coefficients, including the
// intercept, are penalized. Deterministic.
TrainResult train(std::span<const TrainingInstance> data, FeatureSet fs,
                  const TrainOptions& options = {});

// Penalized log-likelihood and its gradient, over the active coefficients
// of `fs` (length active_coefficients(fs)). Exposed for gradient checks.
double penalized_log_likelihood(std::span<const TrainingInstance> data,
                                FeatureSet fs, std::span<const double> beta,
                                double l2);
std::vector<double> penalized_gradient(std::span<const TrainingInstance> data,
                                       FeatureSet fs,
                                       std::span<const double> beta, double l2);

}  // namespace adi

#endif  // ADI_RERANKER_HPP_
