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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

namespace adi {
namespace {

NBestList make_list(std::vector<std::string> lfs, std::string sf = "HSV") {
  NBestList l{"doc", std::move(sf), {}, {}};
  for (std::size_t i = 0; i < lfs.size(); ++i)
    l.candidates.push_back({lfs[i], static_cast<int>(i), {}});
  return l;
}

// Draws labeled instances from a known logistic model.
std::vector<TrainingInstance> sample_instances(const std::array<double, 4>& beta,
                                               std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rank(0, 4);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> freq(0, 1000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TrainingInstance> data;
  data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    TrainingInstance t;
    t.features.rank = rank(rng);
    t.features.charmatch = coin(rng) ? 1 : 0;
    t.features.log1p_freq = std::log1p(freq(rng));
    const double z = beta[0] + beta[1] * t.features.rank +
                     beta[2] * t.features.charmatch + beta[3] * t.features.log1p_freq;
    t.label = u(rng) < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0;
    data.push_back(t);
  }
  return data;
}

TEST_CASE("charmatch examples") {
  CHECK(charmatch("HC", "healthy controls") == 1);
  CHECK(charmatch("HSV", "Latent herpes simplex virus") == 0);
  CHECK(charmatch("x", "xylophone") == 1);
  CHECK(charmatch("[HC]", "(healthy controls") == 1);
  CHECK(charmatch("--", "x") == 0);
}

TEST_CASE("featurize") {
  // 6075 copies of the definition string reproduce the reported count.
  std::string corpus;
  for (int i = 0; i < 6075; ++i) corpus += "herpes simplex virus (HSV) ";
  const std::vector<Document> docs = {{"c", corpus}};
  const SuffixIndex idx = SuffixIndex::build(docs);
  FeatureVector fv = featurize({"herpes simplex virus", 0, {}}, "HSV", &idx);
  CHECK(fv.rank == 0);
  CHECK(fv.charmatch == 1);
  CHECK(fv.log1p_freq == doctest::Approx(std::log(6076.0)).epsilon(1e-12));
  CHECK(fv.log1p_freq == doctest::Approx(8.7122).epsilon(1e-4));

  // Whitespace runs in the candidate are collapsed before lookup.
  fv = featurize({"herpes  simplex\tvirus", 0, {}}, "HSV", &idx);
  CHECK(fv.log1p_freq == doctest::Approx(std::log(6076.0)));

  fv = featurize({"Latent herpes simplex virus", 2, {}}, "HSV", nullptr);
  CHECK(fv.rank == 2);
  CHECK(fv.charmatch == 0);
  CHECK(fv.log1p_freq == 0.0);

  fv = featurize({"never seen", 1, {}}, "HSV", &idx);
  CHECK(fv.log1p_freq == 0.0);
}

TEST_CASE("score examples") {
  const Score s9 = score(preset(9), {0, 1, std::log(6076.0)});
  CHECK(s9.z == doctest::Approx(3.6136305591).epsilon(1e-9));
  CHECK(s9.prob == doctest::Approx(0.9737).epsilon(1e-3));

  ModelCoefficients zero;
  const Score s0 = score(zero, {3, 1, 5.0});
  CHECK(s0.z == 0.0);
  CHECK(s0.prob == 0.5);

  const Score s1 = score(preset(1), {0, 0, 0.0});
  CHECK(s1.z == doctest::Approx(1.6));
  CHECK(s1.prob == doctest::Approx(0.832).epsilon(1e-3));
}

TEST_CASE("presets") {
  const ModelCoefficients m6 = preset(6);
  CHECK(m6.beta == std::array<double, 4>{-2.5, -1.5, 3.8, 0.0});
  CHECK(m6.feature_set == FeatureSet::kRankCharmatch);
  const ModelCoefficients m10 = preset(10);
  CHECK(m10.beta == std::array<double, 4>{-5.2, -1.5, 5.2, 0.5});
  CHECK(m10.feature_set == FeatureSet::kRankCharmatchFreq);
  CHECK(preset(1).feature_set == FeatureSet::kRank);
  CHECK(preset(4).source_name() == "PRESET(4)");
  CHECK_THROWS_AS(preset(13), std::out_of_range);
  CHECK_THROWS_AS(preset(0), std::out_of_range);
  for (int id = 1; id <= kPresetCount; ++id) CHECK(preset(id).consistent());
}

TEST_CASE("consistency of coefficients with the feature set") {
  ModelCoefficients m;
  m.feature_set = FeatureSet::kRank;
  m.beta = {1, -1, 0.5, 0};
  CHECK_FALSE(m.consistent());
  CHECK_THROWS_AS(rerank(make_list({"a"}), m, nullptr), std::invalid_argument);
}

TEST_CASE("rerank: charmatch overrides rank under model 5") {
  const NBestList l = make_list({"Latent herpes simplex virus", "herpes simplex virus"});
  const RerankedList r = rerank(l, preset(5), nullptr);
  REQUIRE(r.scored.size() == 2);
  CHECK(r.scored[0].candidate.rank == 1);
  CHECK(r.scored[0].z == doctest::Approx(-0.9));
  CHECK(r.scored[1].z == doctest::Approx(-1.2));
  REQUIRE(r.chosen() != nullptr);
  CHECK(r.chosen()->candidate.lf == "herpes simplex virus");
}

TEST_CASE("rerank edge cases") {
  const RerankedList empty = rerank(make_list({}), preset(9), nullptr);
  CHECK(empty.scored.empty());
  CHECK(empty.chosen() == nullptr);

  const RerankedList one = rerank(make_list({"xyz"}), preset(1), nullptr);
  REQUIRE(one.chosen() != nullptr);
  CHECK(one.chosen()->candidate.lf == "xyz");

  // Identical features: original order kept.
  ModelCoefficients flat;
  flat.feature_set = FeatureSet::kRankCharmatch;
  flat.beta = {0.3, 0.0, 1.0, 0.0};
  const RerankedList tie = rerank(make_list({"hot", "happy", "home"}, "H"), flat, nullptr);
  CHECK(tie.scored[0].candidate.lf == "hot");
  CHECK(tie.scored[1].candidate.lf == "happy");
  CHECK(tie.scored[2].candidate.lf == "home");
}

TEST_CASE("preset properties") {
  for (int id = 1; id <= kPresetCount; ++id) {
    const ModelCoefficients m = preset(id);
    CHECK(m.beta1() < 0);
    for (int cm = 0; cm <= 1; ++cm)
      for (double f : {0.0, 2.0, 8.0})
        for (int r = 0; r < 4; ++r)
          CHECK(score(m, {r + 1, cm, f}).z < score(m, {r, cm, f}).z);
    if (id >= 5 && m.beta1() + m.beta2() > 0)
      CHECK(score(m, {1, 1, 0.0}).z > score(m, {0, 0, 0.0}).z);
  }
}

TEST_CASE("sigmoid properties") {
  double prev = 0.0;
  for (double z = -30; z <= 30; z += 0.25) {
    const double s = sigmoid(z);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    CHECK(s > prev);
    CHECK(s + sigmoid(-z) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s == doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-14));
    prev = s;
  }
  CHECK(sigmoid(-800.0) >= 0.0);
  CHECK(sigmoid(800.0) <= 1.0);
  CHECK(std::isfinite(sigmoid(-800.0)));
}

TEST_CASE("rerank is a permutation and argmax is scale invariant") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> pool = {"heat", "hot air", "shock", "virus",
                                         "herpes", "a b", "simplex", "H2O"};
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::string> lfs = pool;
    std::shuffle(lfs.begin(), lfs.end(), rng);
    lfs.resize(1 + rng() % 5);
    const NBestList l = make_list(lfs, "HS");
    const ModelCoefficients m = preset(1 + static_cast<int>(rng() % kPresetCount));
    const RerankedList r = rerank(l, m, nullptr);
    std::vector<std::string> got;
    for (const auto& sc : r.scored) got.push_back(sc.candidate.lf);
    std::vector<std::string> want = lfs;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
    for (std::size_t i = 1; i < r.scored.size(); ++i)
      CHECK(r.scored[i - 1].z >= r.scored[i].z);

    ModelCoefficients scaled = m;
    for (double& b : scaled.beta) b *= 2.5;
    CHECK(rerank(l, scaled, nullptr).chosen()->candidate.lf ==
          r.chosen()->candidate.lf);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  const auto data = sample_instances({-1.0, -2.0, 3.0, 0.5}, 500, 99);
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int point = 0; point < 10; ++point) {
    std::vector<double> beta(4);
    for (double& b : beta) b = coef(rng);
    const double l2 = 0.1;
    const auto g = penalized_gradient(data, FeatureSet::kRankCharmatchFreq, beta, l2);
    for (int j = 0; j < 4; ++j) {
      const double h = 1e-5;
      auto plus = beta, minus = beta;
      plus[j] += h;
      minus[j] -= h;
      const double fd =
          (penalized_log_likelihood(data, FeatureSet::kRankCharmatchFreq, plus, l2) -
           penalized_log_likelihood(data, FeatureSet::kRankCharmatchFreq, minus, l2)) /
          (2 * h);
      CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
    }
  }
}

TEST_CASE("trainer recovers generating coefficients") {
  const std::array<double, 4> truth = {-1.0, -2.0, 3.0, 0.5};
  const auto data = sample_instances(truth, 100000, 42);
  const TrainResult r = train(data, FeatureSet::kRankCharmatchFreq);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(r.model.beta[j] - truth[j]) < 0.1);
  CHECK(r.model.feature_set == FeatureSet::kRankCharmatchFreq);
  CHECK_FALSE(r.model.preset_id);
  CHECK(r.iterations > 0);
  // Deterministic.
  CHECK(train(data, FeatureSet::kRankCharmatchFreq).model == r.model);
}

TEST_CASE("feature sets pin excluded coefficients") {
  const auto data = sample_instances({-1.0, -2.0, 3.0, 0.5}, 5000, 8);
  const TrainResult r1 = train(data, FeatureSet::kRank);
  CHECK(r1.model.beta2() == 0.0);
  CHECK(r1.model.beta3() == 0.0);
  const TrainResult r2 = train(data, FeatureSet::kRankCharmatch);
  CHECK(r2.model.beta3() == 0.0);
  CHECK(r2.model.beta2() > 0.0);
}

TEST_CASE("degenerate and non-convergent training") {
  std::vector<TrainingInstance> ones(10, TrainingInstance{{0, 1, 0.0}, 1});
  TrainOptions no_penalty;
  no_penalty.l2 = 0.0;
  CHECK_THROWS_AS(train(ones, FeatureSet::kRank, no_penalty), DegenerateDataError);
  try {
    train(ones, FeatureSet::kRank, no_penalty);
  } catch (const DegenerateDataError& e) {
    CHECK(e.only_label() == 1);
  }
  // A ridge makes the one-class problem well posed.
  TrainOptions ridge;
  ridge.l2 = 1.0;
  CHECK(train(ones, FeatureSet::kRank, ridge).model.beta0() > 0.0);

  CHECK_THROWS_AS(train({}, FeatureSet::kRank), std::invalid_argument);

  const auto data = sample_instances({-1.0, -2.0, 3.0, 0.5}, 2000, 9);
  TrainOptions tight;
  tight.max_iter = 1;
  tight.tol = 1e-300;
  try {
    train(data, FeatureSet::kRankCharmatchFreq, tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.gradient_norm() > 0.0);
    CHECK(e.last_iterate().beta0() != 0.0);
  }
}

TEST_CASE("separable data with a small ridge stays finite") {
  std::vector<TrainingInstance> data;
  for (int i = 0; i < 200; ++i) {
    const int cm = i % 2;
    data.push_back({{i % 5, cm, 0.0}, cm});
  }
  TrainOptions opt;
  opt.l2 = 0.01;
  const TrainResult r = train(data, FeatureSet::kRankCharmatch, opt);
  CHECK(r.model.beta2() > 0.0);
  CHECK(std::isfinite(r.model.beta2()));
}

}  // namespace
}  // namespace adi
