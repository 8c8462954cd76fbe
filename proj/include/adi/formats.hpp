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

// On-disk formats shared by the command-line tools:
//
//   documents    plain text (one document per file, id = file stem) or
//                TSV "id<TAB>text"
//   pairs TSV    doc_id sf lf sf_start sf_end lf_start lf_end pattern
//   gold TSV     doc_id sf lf
//   n-best JSONL {doc_id, sf, sf_start, sf_end, candidates:[{lf, rank, score?}]}
//   model JSON   {beta0, beta1, beta2, beta3, feature_set, source}
//   BioC subset  collection/document/passage/annotation/relation
//
// TSV fields never contain tabs or newlines; writers reject them.

#ifndef ADI_FORMATS_HPP_
#define ADI_FORMATS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "adi/evaluator.hpp"
#include "adi/extractor.hpp"
#include "adi/reranker.hpp"
#include "adi/text.hpp"

namespace adi {

using Json = nlohmann::ordered_json;

// Malformed input. `where` is a human-readable location such as
// "file.jsonl:3" or "file.xml: byte 120".
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Missing or unreadable file.
class FileError : public std::runtime_error {
 public:
  explicit FileError(const std::filesystem::path& path)
      : std::runtime_error("cannot read file: " + path.string()),
        path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

// Splits on '\n'; a trailing newline does not produce an empty last line
// and a trailing '\r' is dropped.
std::vector<std::string> split_lines(std::string_view content);
std::vector<std::string> split_tabs(std::string_view line);

// Throws std::invalid_argument if a field contains a tab or newline.
void write_tsv_row(std::ostream& out, const std::vector<std::string>& fields);

enum class DocumentFormat { kAuto, kText, kTsv, kBioc };
DocumentFormat parse_document_format(std::string_view s);

// Reads a collection; duplicate ids are an error. kAuto picks by extension
// (.tsv, .xml/.bioc, otherwise plain text).
std::vector<Document> read_documents(const std::filesystem::path& path,
                                     DocumentFormat format = DocumentFormat::kAuto);

void write_pairs_tsv(std::ostream& out, const std::string& doc_id,
                     const std::vector<SfLfPair>& pairs);

GoldSet read_gold_tsv(const std::filesystem::path& path);

// Prediction rows: doc_id, sf, lf, then any further columns (so the
// extract output is accepted as is).
Predictions read_predictions_tsv(const std::filesystem::path& path);

Json nbest_to_json(const NBestList& list);
// `where` prefixes error messages.
NBestList nbest_from_json(const Json& j, const std::string& where);

// The input object with each candidate given features, z and prob, plus
// "order" (original ranks in reranked order), "model" and "chosen".
Json reranked_to_json(const Json& input, const RerankedList& reranked,
                      const ModelCoefficients& model);
// Inverse of reranked_to_json; requires the augmented fields.
RerankedList reranked_from_json(const Json& j, const std::string& where);

Json model_to_json(const ModelCoefficients& m);
ModelCoefficients model_from_json(const Json& j);

struct BiocCollection {
  std::vector<Document> documents;
  GoldSet gold;
  std::size_t skipped_annotations = 0;
  std::size_t skipped_pairs = 0;
  std::vector<std::string> warnings;
};

// Reads the BioC subset used by the abbreviation benchmarks. Passages are
// laid out at their offsets in the document text (gaps filled with spaces).
// Gold pairs come from relations with two nodes whose roles (or the
// annotations' "type" infon) are ShortForm and LongForm. Annotations whose
// location does not match the passage text are skipped with a warning.
BiocCollection parse_bioc_subset(std::string xml, const std::string& name);
BiocCollection read_bioc_subset(const std::filesystem::path& path);

}  // namespace adi

#endif  // ADI_FORMATS_HPP_
