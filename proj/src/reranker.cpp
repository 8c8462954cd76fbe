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

#include "adi/reranker.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adi {

namespace {

// Fitted coefficient table, one row per built-in model.
constexpr std::array<std::array<double, 4>, kPresetCount> kPresets = {{
    {1.6, -3.3, 0.0, 0.0},
    {0.7, -1.6, 0.0, 0.0},
    {1.9, -3.9, 0.0, 0.0},
    {1.4, -3.3, 0.0, 0.0},
    {-1.2, -3.2, 3.5, 0.0},
    {-2.5, -1.5, 3.8, 0.0},
    {-1.0, -4.0, 3.9, 0.0},
    {-1.9, -3.2, 4.1, 0.0},
    {-2.7, -2.9, 3.7, 0.3},
    {-5.2, -1.5, 5.2, 0.5},
    {-3.2, -3.8, 4.7, 0.4},
    {-3.1, -2.9, 4.3, 0.3},
}};

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

Vec design_row(const FeatureVector& fv, int dims) {
  Vec x(dims);
  const double all[4] = {1.0, static_cast<double>(fv.rank),
                         static_cast<double>(fv.charmatch), fv.log1p_freq};
  for (int j = 0; j < dims; ++j) x[j] = all[j];
  return x;
}

double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double objective(std::span<const TrainingInstance> data, const Vec& beta,
                 double l2) {
  const int dims = static_cast<int>(beta.size());
  double ll = 0.0;
  for (const TrainingInstance& t : data) {
    const double z = design_row(t.features, dims).dot(beta);
    ll += t.label * z - softplus(z);
  }
  return ll - 0.5 * l2 * beta.squaredNorm();
}

Vec gradient(std::span<const TrainingInstance> data, const Vec& beta,
             double l2) {
  const int dims = static_cast<int>(beta.size());
  Vec g = Vec::Zero(dims);
  for (const TrainingInstance& t : data) {
    const Vec x = design_row(t.features, dims);
    g += (t.label - sigmoid(x.dot(beta))) * x;
  }
  return g - l2 * beta;
}

ModelCoefficients to_model(const Vec& beta, FeatureSet fs) {
  ModelCoefficients m;
  m.feature_set = fs;
  for (int j = 0; j < beta.size(); ++j) m.beta[j] = beta[j];
  return m;
}

std::string describe(const ModelCoefficients& m) {
  std::ostringstream os;
  os << "(" << m.beta[0] << ", " << m.beta[1] << ", " << m.beta[2] << ", "
     << m.beta[3] << ")";
  return os.str();
}

}  // namespace

std::string_view feature_set_name(FeatureSet fs) {
  switch (fs) {
    case FeatureSet::kRank:
      return "RANK_ONLY";
    case FeatureSet::kRankCharmatch:
      return "RANK_CHARMATCH";
    case FeatureSet::kRankCharmatchFreq:
      return "RANK_CHARMATCH_FREQ";
  }
  return "?";
}

FeatureSet parse_feature_set(std::string_view s) {
  if (s == "1" || s == "RANK_ONLY") return FeatureSet::kRank;
  if (s == "2" || s == "RANK_CHARMATCH") return FeatureSet::kRankCharmatch;
  if (s == "3" || s == "RANK_CHARMATCH_FREQ")
    return FeatureSet::kRankCharmatchFreq;
  throw std::invalid_argument("unknown feature set: " + std::string(s));
}

bool ModelCoefficients::consistent() const {
  for (int j = active_coefficients(feature_set); j < 4; ++j)
    if (beta[j] != 0.0) return false;
  return std::all_of(beta.begin(), beta.end(),
                     [](double b) { return std::isfinite(b); });
}

std::string ModelCoefficients::source_name() const {
  return preset_id ? "PRESET(" + std::to_string(*preset_id) + ")" : "TRAINED";
}

ModelCoefficients preset(int id) {
  if (id < 1 || id > kPresetCount)
    throw std::out_of_range("preset model id must be in 1..12, got " +
                            std::to_string(id));
  ModelCoefficients m;
  m.beta = kPresets[id - 1];
  m.feature_set = id <= 4   ? FeatureSet::kRank
                  : id <= 8 ? FeatureSet::kRankCharmatch
                            : FeatureSet::kRankCharmatchFreq;
  m.preset_id = id;
  return m;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int charmatch(std::string_view sf, std::string_view lf) {
  auto first_alnum = [](std::string_view s) -> std::optional<char> {
    for (char c : s)
      if (is_alnum(c)) return to_lower(c);
    return std::nullopt;
  };
  const auto a = first_alnum(sf);
  const auto b = first_alnum(lf);
  return a && b && *a == *b ? 1 : 0;
}

FeatureVector featurize(const Candidate& candidate, std::string_view sf,
                        const SuffixIndex* index) {
  FeatureVector fv;
  fv.rank = candidate.rank;
  fv.charmatch = charmatch(sf, candidate.lf);
  if (index != nullptr) {
    const std::string lf = collapse_whitespace(candidate.lf);
    const std::string short_form(trim(sf));
    if (!lf.empty() && !short_form.empty())
      fv.log1p_freq =
          std::log1p(static_cast<double>(index->definition_freq(short_form, lf)));
  }
  return fv;
}

Score score(const ModelCoefficients& coeffs, const FeatureVector& fv) {
  const double z = coeffs.beta[0] + coeffs.beta[1] * fv.rank +
                   coeffs.beta[2] * fv.charmatch +
                   coeffs.beta[3] * fv.log1p_freq;
  return {z, sigmoid(z)};
}

RerankedList rerank(const NBestList& nbest, const ModelCoefficients& coeffs,
                    const SuffixIndex* index) {
  if (!coeffs.consistent())
    throw std::invalid_argument(
        "model coefficients are inconsistent with their feature set");
  RerankedList out{nbest, {}};
  out.scored.reserve(nbest.candidates.size());
  for (const Candidate& c : nbest.candidates) {
    ScoredCandidate sc{c, featurize(c, nbest.sf, index), 0.0, 0.5};
    const Score s = score(coeffs, sc.features);
    sc.z = s.z;
    sc.prob = s.prob;
    out.scored.push_back(std::move(sc));
  }
  std::stable_sort(out.scored.begin(), out.scored.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     if (a.z != b.z) return a.z > b.z;
                     return a.candidate.rank < b.candidate.rank;
                   });
  return out;
}

DegenerateDataError::DegenerateDataError(int only_label)
    : std::runtime_error("degenerate one-class training data: every label is " +
                         std::to_string(only_label) +
                         "; the unpenalized optimum does not exist (use l2 > 0)"),
      only_label_(only_label) {}

ConvergenceError::ConvergenceError(const ModelCoefficients& last,
                                   double gradient_norm, int iterations)
    : std::runtime_error("training did not converge after " +
                         std::to_string(iterations) +
                         " iterations; last iterate " + describe(last) +
                         ", gradient norm " + std::to_string(gradient_norm)),
      last_(last),
      gradient_norm_(gradient_norm) {}

double penalized_log_likelihood(std::span<const TrainingInstance> data,
                                FeatureSet fs, std::span<const double> beta,
                                double l2) {
  if (static_cast<int>(beta.size()) != active_coefficients(fs))
    throw std::invalid_argument("coefficient count does not match feature set");
  return objective(data, Eigen::Map<const Vec>(beta.data(), beta.size()), l2);
}

std::vector<double> penalized_gradient(std::span<const TrainingInstance> data,
                                       FeatureSet fs,
                                       std::span<const double> beta, double l2) {
  if (static_cast<int>(beta.size()) != active_coefficients(fs))
    throw std::invalid_argument("coefficient count does not match feature set");
  const Vec g = gradient(data, Eigen::Map<const Vec>(beta.data(), beta.size()), l2);
  return {g.data(), g.data() + g.size()};
}

TrainResult train(std::span<const TrainingInstance> data, FeatureSet fs,
                  const TrainOptions& options) {
  if (data.empty()) throw std::invalid_argument("no training instances");
  if (options.l2 < 0) throw std::invalid_argument("l2 must be >= 0");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  for (const TrainingInstance& t : data)
    if (t.label != 0 && t.label != 1)
      throw std::invalid_argument("training labels must be 0 or 1");
  const bool has_pos = std::any_of(data.begin(), data.end(),
                                   [](const TrainingInstance& t) { return t.label == 1; });
  const bool has_neg = std::any_of(data.begin(), data.end(),
                                   [](const TrainingInstance& t) { return t.label == 0; });
  if (options.l2 == 0.0 && !(has_pos && has_neg))
    throw DegenerateDataError(has_pos ? 1 : 0);

  const int dims = active_coefficients(fs);
  Vec beta = Vec::Zero(dims);
  double current = objective(data, beta, options.l2);
  Vec g = gradient(data, beta, options.l2);

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    Mat info = options.l2 * Mat::Identity(dims, dims);
    for (const TrainingInstance& t : data) {
      const Vec x = design_row(t.features, dims);
      const double p = sigmoid(x.dot(beta));
      info.noalias() += p * (1.0 - p) * x * x.transpose();
    }
    Vec step = info.ldlt().solve(g);
    if (!step.allFinite()) break;

    // Halve until the objective does not decrease.
    Vec next = beta + step;
    double value = objective(data, next, options.l2);
    for (int h = 0; h < 30 && !(value >= current); ++h) {
      step *= 0.5;
      next = beta + step;
      value = objective(data, next, options.l2);
    }
    beta = next;
    current = value;
    g = gradient(data, beta, options.l2);
    if (!beta.allFinite() || !g.allFinite()) break;

    if (step.cwiseAbs().maxCoeff() < options.tol || g.norm() < options.tol)
      return {to_model(beta, fs), iter, g.norm()};
  }
  throw ConvergenceError(to_model(beta, fs), g.norm(), options.max_iter);
}

}  // namespace adi
