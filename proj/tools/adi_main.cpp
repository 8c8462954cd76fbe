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

// adi: abbreviation definition extraction, n-best reranking and evaluation.
//
//   adi extract  docs... [-o pairs.tsv] [--nbest lists.jsonl -k 5]
//   adi index    corpus -o corpus.idx [--case-fold]
//   adi rerank   lists.jsonl --model 9 [--index corpus.idx] [-o out.jsonl]
//   adi train    labeled.jsonl --features 3 [--gold gold.tsv] -o model.json
//   adi eval     predictions --gold gold.tsv [--reports all] [--json out.json]
//   adi presets  [--id N]
//
// Exit codes: 0 success, 1 bad input or failed computation, 2 missing or
// unreadable file (or bad usage).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "adi/evaluator.hpp"
#include "adi/extractor.hpp"
#include "adi/formats.hpp"
#include "adi/parallel.hpp"
#include "adi/reranker.hpp"
#include "adi/suffix_index.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingFile = 2;

// Stdout or a file, chosen by path ("" or "-" means stdout).
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw adi::FileError(path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

unsigned default_threads() {
  return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

void warn(const std::string& msg) { std::cerr << "adi: warning: " << msg << "\n"; }

std::optional<adi::SuffixIndex> load_index_opt(const std::string& path) {
  if (path.empty()) return std::nullopt;
  if (!fs::is_regular_file(path)) throw adi::FileError(path);
  return adi::SuffixIndex::load(path);
}

adi::ModelCoefficients resolve_model(const std::string& spec) {
  int id = 0;
  auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), id);
  if (ec == std::errc() && ptr == spec.data() + spec.size())
    return adi::preset(id);
  return adi::model_from_json(adi::Json::parse(adi::read_file(spec)));
}

adi::GoldSet read_gold(const std::string& path) {
  const std::string ext = adi::ascii_lower(fs::path(path).extension().string());
  if (ext == ".xml" || ext == ".bioc") {
    adi::BiocCollection c = adi::read_bioc_subset(path);
    for (const std::string& w : c.warnings) warn(w);
    std::cerr << "adi: bioc " << path << ": " << c.documents.size()
              << " documents, " << c.gold.pair_count() << " gold pairs, "
              << c.skipped_annotations << " annotations skipped\n";
    return std::move(c.gold);
  }
  return adi::read_gold_tsv(path);
}

// Non-empty JSONL lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, adi::Json>> read_jsonl(const std::string& path) {
  std::vector<std::pair<std::size_t, adi::Json>> out;
  const auto lines = adi::split_lines(adi::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = path + ":" + std::to_string(i + 1);
    try {
      out.emplace_back(i + 1, adi::Json::parse(lines[i]));
    } catch (const adi::Json::parse_error& e) {
      throw adi::FormatError(where, std::string("malformed JSON: ") + e.what());
    }
  }
  return out;
}

bool looks_like_jsonl(const std::string& path) {
  const std::string ext = adi::ascii_lower(fs::path(path).extension().string());
  if (ext == ".jsonl" || ext == ".json") return true;
  if (ext == ".tsv") return false;
  const std::string content = adi::read_file(path);
  const std::string_view t = adi::trim(content);
  return !t.empty() && t.front() == '{';
}

// extract ------------------------------------------------------------------

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::string output;
  std::string nbest_output;
  int k = static_cast<int>(adi::kDefaultMaxCandidates);
  int k_max = static_cast<int>(adi::kDefaultMaxCandidates);
  unsigned threads = default_threads();
};

int run_extract(const ExtractArgs& a) {
  if (a.k < 1 || a.k > a.k_max)
    throw std::invalid_argument("-k must be in 1.." + std::to_string(a.k_max));
  const adi::DocumentFormat format = adi::parse_document_format(a.format);
  std::vector<adi::Document> docs;
  std::set<std::string> ids;
  for (const std::string& in : a.inputs) {
    for (adi::Document& d : adi::read_documents(in, format)) {
      if (!ids.insert(d.id).second)
        throw adi::FormatError(in, "duplicate document id '" + d.id + "'");
      docs.push_back(std::move(d));
    }
  }
  std::sort(docs.begin(), docs.end(),
            [](const adi::Document& x, const adi::Document& y) { return x.id < y.id; });

  struct Result {
    std::vector<adi::SfLfPair> pairs;
    std::vector<adi::NBestList> lists;
  };
  const bool want_nbest = !a.nbest_output.empty();
  const auto results = adi::parallel_map(
      std::span<const adi::Document>(docs), a.threads, [&](const adi::Document& d) {
        Result r;
        r.pairs = adi::extract_pairs(d);
        if (want_nbest)
          r.lists = adi::generate_all_nbest(d, static_cast<std::size_t>(a.k),
                                             static_cast<std::size_t>(a.k_max));
        return r;
      });

  Output out(a.output);
  for (std::size_t i = 0; i < docs.size(); ++i)
    adi::write_pairs_tsv(out.stream(), docs[i].id, results[i].pairs);
  if (want_nbest) {
    Output nbest(a.nbest_output);
    for (const Result& r : results)
      for (const adi::NBestList& l : r.lists)
        nbest.stream() << adi::nbest_to_json(l).dump() << "\n";
  }
  return 0;
}

// index --------------------------------------------------------------------

struct IndexArgs {
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::string output;
  bool case_fold = false;
};

int run_index(const IndexArgs& a) {
  const adi::DocumentFormat format = adi::parse_document_format(a.format);
  std::vector<adi::Document> docs;
  for (const std::string& in : a.inputs)
    for (adi::Document& d : adi::read_documents(in, format)) docs.push_back(std::move(d));
  const adi::SuffixIndex index = adi::SuffixIndex::build(docs, a.case_fold);
  index.save(a.output);
  std::cout << "documents: " << index.doc_count() << "\n"
            << "corpus size: " << index.corpus_size() << "\n"
            << "suffixes: " << index.suffixes().size() << "\n"
            << "case folded: " << (index.case_folded() ? "yes" : "no") << "\n";
  return 0;
}

// rerank -------------------------------------------------------------------

struct RerankArgs {
  std::string input;
  std::string model = "9";
  std::string index;
  std::string output;
  unsigned threads = default_threads();
};

int run_rerank(const RerankArgs& a) {
  const adi::ModelCoefficients model = resolve_model(a.model);
  const std::optional<adi::SuffixIndex> index = load_index_opt(a.index);
  if (!index && model.beta3() != 0.0)
    warn("model " + model.source_name() +
         " uses the frequency feature but no --index was given; freq is 0");

  const auto lines = adi::split_lines(adi::read_file(a.input));
  std::vector<std::pair<std::size_t, std::string>> numbered;
  for (std::size_t i = 0; i < lines.size(); ++i) numbered.emplace_back(i + 1, lines[i]);

  const adi::SuffixIndex* idx = index ? &*index : nullptr;
  const auto rendered = adi::parallel_map(
      std::span<const std::pair<std::size_t, std::string>>(numbered), a.threads,
      [&](const std::pair<std::size_t, std::string>& line) {
        const std::string where = a.input + ":" + std::to_string(line.first);
        adi::Json j;
        try {
          j = adi::Json::parse(line.second);
        } catch (const adi::Json::parse_error& e) {
          throw adi::FormatError(where, std::string("malformed JSON: ") + e.what());
        }
        const adi::NBestList list = adi::nbest_from_json(j, where);
        return adi::reranked_to_json(j, adi::rerank(list, model, idx), model).dump();
      });

  Output out(a.output);
  for (const std::string& r : rendered) out.stream() << r << "\n";
  return 0;
}

// train --------------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string features = "3";
  std::string gold;
  std::string index;
  std::string output;
  adi::TrainOptions options;
};

adi::TrainingInstance instance_from_json(const adi::Json& j, const std::string& where) {
  adi::TrainingInstance t;
  try {
    t.features.rank = j.at("rank").get<int>();
    t.features.charmatch = j.at("charmatch").get<int>();
    if (j.contains("log1p_freq"))
      t.features.log1p_freq = j["log1p_freq"].get<double>();
    else
      t.features.log1p_freq = std::log1p(j.value("freq", 0.0));
    t.label = j.at("label").get<int>();
  } catch (const adi::Json::exception& e) {
    throw adi::FormatError(where, e.what());
  }
  if (t.features.rank < 0 || (t.features.charmatch != 0 && t.features.charmatch != 1) ||
      !(t.features.log1p_freq >= 0) || (t.label != 0 && t.label != 1))
    throw adi::FormatError(where, "feature or label out of range");
  return t;
}

int run_train(const TrainArgs& a) {
  const adi::FeatureSet fs = adi::parse_feature_set(a.features);
  std::optional<adi::GoldSet> gold;
  if (!a.gold.empty()) gold = read_gold(a.gold);
  const std::optional<adi::SuffixIndex> index = load_index_opt(a.index);

  std::vector<adi::TrainingInstance> data;
  for (const auto& [line, j] : read_jsonl(a.input)) {
    const std::string where = a.input + ":" + std::to_string(line);
    if (j.is_object() && j.contains("candidates")) {
      if (!gold)
        throw adi::FormatError(where, "n-best lines need --gold for labels");
      const adi::NBestList list = adi::nbest_from_json(j, where);
      for (const adi::Candidate& c : list.candidates)
        data.push_back({adi::featurize(c, list.sf, index ? &*index : nullptr),
                        gold->contains(list.doc_id, list.sf, c.lf) ? 1 : 0});
    } else {
      data.push_back(instance_from_json(j, where));
    }
  }
  const adi::TrainResult r = adi::train(data, fs, a.options);
  std::cerr << "trained " << adi::feature_set_name(fs) << " on " << data.size()
            << " instances in " << r.iterations << " iterations (gradient norm "
            << r.gradient_norm << ")\n";
  std::cerr << "beta0=" << r.model.beta0() << " beta1=" << r.model.beta1()
            << " beta2=" << r.model.beta2() << " beta3=" << r.model.beta3() << "\n";
  Output out(a.output);
  out.stream() << adi::model_to_json(r.model).dump(2) << "\n";
  return 0;
}

// eval ---------------------------------------------------------------------

struct EvalArgs {
  std::string input;
  std::string gold;
  std::string reports = "all";
  std::string json_output;
};

int run_eval(const EvalArgs& a) {
  std::set<std::string> wanted;
  {
    std::stringstream ss(a.reports);
    std::string r;
    while (std::getline(ss, r, ',')) {
      if (r == "all") {
        wanted.insert({"f1", "rank", "charmatch", "confidence"});
      } else if (r == "f1" || r == "rank" || r == "charmatch" || r == "confidence") {
        wanted.insert(r);
      } else {
        throw std::invalid_argument("unknown report '" + r + "'");
      }
    }
  }
  const bool all = a.reports == "all";
  const adi::GoldSet gold = read_gold(a.gold);
  const std::string bench = gold.name();

  adi::Predictions predictions;
  std::vector<adi::NBestList> lists;
  std::vector<adi::RerankedList> reranked;
  bool have_lists = false, have_scores = false;
  if (looks_like_jsonl(a.input)) {
    have_lists = have_scores = true;
    for (const auto& [line, j] : read_jsonl(a.input)) {
      const std::string where = a.input + ":" + std::to_string(line);
      if (j.is_object() && j.contains("order")) {
        reranked.push_back(adi::reranked_from_json(j, where));
        lists.push_back(reranked.back().source);
      } else {
        have_scores = false;
        lists.push_back(adi::nbest_from_json(j, where));
      }
    }
    for (const adi::NBestList& l : lists) {
      auto& pairs = predictions[l.doc_id];
      if (!have_scores && !l.candidates.empty())
        pairs.emplace_back(l.sf, l.candidates.front().lf);
    }
    if (have_scores) predictions = adi::predictions_from(reranked);
  } else {
    predictions = adi::read_predictions_tsv(a.input);
  }

  adi::Json report;
  report["predictions"] = a.input;
  report["gold"] = a.gold;
  report["benchmark"] = bench;
  std::ostringstream text;

  if (wanted.contains("f1")) {
    const adi::EvalReport r = adi::evaluate(predictions, gold);
    report["f1"] = {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn},
                    {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
    text << adi::format_f1_table(bench, r) << "\n";
  }
  auto require = [&](bool ok, const std::string& what) {
    if (ok) return true;
    if (!all)
      throw std::invalid_argument("report '" + what +
                                  "' needs " + (what == "rank" ? "n-best" : "reranked") +
                                  " JSONL input");
    warn("skipping report '" + what + "' for this input type");
    return false;
  };
  if (wanted.contains("rank") && require(have_lists, "rank")) {
    const adi::RankHistogram h = adi::rank_histogram(lists, gold);
    report["rank"] = {{"counts", h.counts}, {"lists", lists.size()}};
    text << adi::format_rank_table(bench, h) << "\n";
  }
  if (wanted.contains("charmatch") && require(have_scores, "charmatch")) {
    const auto obs = adi::charmatch_observations(reranked, gold);
    if (obs.empty()) {
      if (!all) throw std::invalid_argument("charmatch report needs at least one chosen candidate");
      warn("no chosen candidates; charmatch report skipped");
    } else {
      const adi::CharmatchReport r = adi::charmatch_conditional(obs);
      auto opt = [](const std::optional<double>& p) {
        return p ? adi::Json(*p) : adi::Json(nullptr);
      };
      report["charmatch"] = {{"p_correct_given_charmatch", opt(r.p_correct_given_charmatch)},
                             {"p_correct_given_not", opt(r.p_correct_given_not)},
                             {"support_charmatch", r.support_charmatch},
                             {"support_not", r.support_not}};
      text << adi::format_charmatch_table(bench, r) << "\n";
    }
  }
  if (wanted.contains("confidence") && require(have_scores, "confidence")) {
    try {
      const adi::ConfidenceReport r = adi::confidence_summary(reranked, gold);
      report["confidence"] = {{"median_prob_correct", r.median_prob_correct},
                              {"n_correct", r.n_correct}};
      text << adi::format_confidence_table(bench, r) << "\n";
    } catch (const adi::UndefinedMedianError& e) {
      if (!all) throw;
      warn(e.what());
      report["confidence"] = nullptr;
    }
  }

  std::cout << text.str();
  if (!a.json_output.empty()) {
    Output out(a.json_output);
    out.stream() << report.dump(2) << "\n";
  }
  return 0;
}

// presets ------------------------------------------------------------------

int run_presets(int id) {
  if (id != 0) {
    std::cout << adi::model_to_json(adi::preset(id)).dump(2) << "\n";
    return 0;
  }
  adi::Json all = adi::Json::array();
  for (int i = 1; i <= adi::kPresetCount; ++i) {
    adi::Json m = adi::model_to_json(adi::preset(i));
    all.push_back(std::move(m));
  }
  std::cout << all.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abbreviation definition extraction, reranking and evaluation"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract SF/LF pairs (TSV) and n-best lists");
  extract->add_option("inputs", ex.inputs, "Document files (text, id<TAB>text TSV, or BioC)")
      ->required();
  extract->add_option("--format", ex.format, "auto|text|tsv|bioc");
  extract->add_option("-o,--output", ex.output, "Pair TSV output (default stdout)");
  extract->add_option("--nbest", ex.nbest_output, "Also write n-best JSONL here");
  extract->add_option("-k", ex.k, "Candidates per n-best list");
  extract->add_option("--k-max", ex.k_max, "Upper bound for -k");
  extract->add_option("--threads", ex.threads, "Worker threads");

  IndexArgs ix;
  auto* index = app.add_subcommand("index", "Build a suffix-array index over a corpus");
  index->add_option("corpus", ix.inputs, "Corpus files")->required();
  index->add_option("-o,--output", ix.output, "Index file")->required();
  index->add_option("--format", ix.format, "auto|text|tsv|bioc");
  index->add_flag("--case-fold", ix.case_fold, "Lowercase corpus and queries");

  RerankArgs rr;
  auto* rerank = app.add_subcommand("rerank", "Rerank n-best JSONL with a logistic model");
  rerank->add_option("input", rr.input, "N-best JSONL")->required();
  rerank->add_option("-m,--model", rr.model, "Preset id 1..12 or model JSON path");
  rerank->add_option("--index", rr.index, "Suffix index for the freq feature");
  rerank->add_option("-o,--output", rr.output, "Output JSONL (default stdout)");
  rerank->add_option("--threads", rr.threads, "Worker threads");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Fit reranking coefficients");
  train->add_option("input", tr.input,
                    "JSONL of {rank, charmatch, freq|log1p_freq, label} or n-best lists")
      ->required();
  train->add_option("--features", tr.features, "1 (rank), 2 (+charmatch), 3 (+freq)");
  train->add_option("--gold", tr.gold, "Gold TSV/BioC for labeling n-best lines");
  train->add_option("--index", tr.index, "Suffix index for the freq feature");
  train->add_option("--l2", tr.options.l2, "L2 penalty");
  train->add_option("--tol", tr.options.tol, "Convergence tolerance");
  train->add_option("--max-iter", tr.options.max_iter, "Iteration limit");
  train->add_option("-o,--output", tr.output, "Model JSON (default stdout)");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("input", ev.input, "Pair TSV, n-best JSONL or reranked JSONL")->required();
  eval->add_option("--gold", ev.gold, "Gold TSV or BioC XML")->required();
  eval->add_option("--reports", ev.reports, "all or comma list of f1,rank,charmatch,confidence");
  eval->add_option("--json", ev.json_output, "Write the JSON report here ('-' for stdout)");

  int preset_id = 0;
  auto* presets = app.add_subcommand("presets", "Print the built-in models as JSON");
  presets->add_option("--id", preset_id, "Only this model (1..12)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitMissingFile;
  }

  try {
    if (*extract) return run_extract(ex);
    if (*index) return run_index(ix);
    if (*rerank) return run_rerank(rr);
    if (*train) return run_train(tr);
    if (*eval) return run_eval(ev);
    if (*presets) return run_presets(preset_id);
  } catch (const adi::FileError& e) {
    std::cerr << "adi: " << e.what() << "\n";
    return kExitMissingFile;
  } catch (const adi::IndexFormatError& e) {
    std::cerr << "adi: " << e.what() << "\n";
    return e.kind() == adi::IndexFormatError::Kind::kIo ? kExitMissingFile : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "adi: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
