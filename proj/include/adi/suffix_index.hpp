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

// Immutable suffix array over a document collection. Documents are joined
// with a sentinel byte so that no match can span two documents; counting a
// pattern is two binary searches over the sorted suffixes.

#ifndef ADI_SUFFIX_INDEX_HPP_
#define ADI_SUFFIX_INDEX_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adi/text.hpp"

namespace adi {

inline constexpr char kDocumentSentinel = '\0';

class SuffixIndex {
 public:
  // Throws std::invalid_argument on an empty collection, an empty document,
  // or a document containing the sentinel byte (message names the id).
  static SuffixIndex build(std::span<const Document> docs,
                           bool case_fold = false);

  // Number of (possibly overlapping) occurrences of `pattern`. Throws
  // std::invalid_argument on an empty pattern. Thread-safe.
  std::uint64_t count(std::string_view pattern) const;

  // Occurrences of `lf + " (" + sf`, i.e. how often the long form is seen
  // immediately followed by its parenthesized short form.
  std::uint64_t definition_freq(std::string_view sf, std::string_view lf) const;

  const std::string& text() const { return text_; }
  std::span<const std::uint64_t> suffixes() const { return sa_; }
  std::size_t doc_count() const { return doc_count_; }
  bool case_folded() const { return case_folded_; }
  // Corpus characters excluding sentinels.
  std::size_t corpus_size() const { return text_.size() - doc_count_; }

  void save(const std::filesystem::path& path) const;
  static SuffixIndex load(const std::filesystem::path& path);

  // Encoded bytes of the on-disk format; save() writes exactly these.
  std::string serialize() const;
  static SuffixIndex deserialize(std::string_view bytes);

  friend bool operator==(const SuffixIndex&, const SuffixIndex&) = default;

 private:
  SuffixIndex() = default;

  std::string text_;
  std::vector<std::uint64_t> sa_;
  std::size_t doc_count_ = 0;
  bool case_folded_ = false;
};

// Index file problems, each kind reported distinctly.
class IndexFormatError : public std::runtime_error {
 public:
  enum class Kind { kIo, kVersion, kTruncated, kChecksum, kCorrupt };

  IndexFormatError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Suffix array of `text` by prefix doubling with radix-sorted rank pairs,
// O(n log n). Exposed for testing.
std::vector<std::uint64_t> build_suffix_array(std::string_view text);

}  // namespace adi

#endif  // ADI_SUFFIX_INDEX_HPP_
