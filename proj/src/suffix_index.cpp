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

#include "adi/suffix_index.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace adi {

namespace {

constexpr std::string_view kMagic = "ADISA1";
constexpr std::string_view kMagicFamily = "ADISA";
constexpr std::uint32_t kFlagCaseFolded = 1u;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::string_view bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i)
    v |= std::uint64_t(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

std::uint32_t crc_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off),
                static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint64_t> build_suffix_array(std::string_view text) {
  const std::size_t n = text.size();
  std::vector<std::uint64_t> sa(n), tmp(n);
  if (n == 0) return sa;
  // rank[i] is the class of suffix i by its first k bytes.
  std::vector<std::size_t> rank(n), next_rank(n);
  for (std::size_t i = 0; i < n; ++i)
    rank[i] = static_cast<unsigned char>(text[i]);

  std::vector<std::size_t> bucket(std::max<std::size_t>(256, n) + 1);
  auto counting_sort = [&](std::size_t alphabet) {
    std::fill(bucket.begin(), bucket.begin() + alphabet + 1, 0);
    for (std::uint64_t i : tmp) ++bucket[rank[i] + 1];
    for (std::size_t c = 1; c <= alphabet; ++c) bucket[c] += bucket[c - 1];
    for (std::uint64_t i : tmp) sa[bucket[rank[i]]++] = i;
  };

  for (std::size_t i = 0; i < n; ++i) tmp[i] = i;
  counting_sort(256);
  std::size_t alphabet = 256;

  for (std::size_t k = 1;; k <<= 1) {
    // Order by second key rank[i + k] (past-the-end lowest), then stable
    // counting sort by first key.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(n, k); i < n; ++i) tmp[p++] = i;
    for (std::size_t j = 0; j < n; ++j)
      if (sa[j] >= k) tmp[p++] = sa[j] - k;
    counting_sort(alphabet);

    auto second = [&](std::uint64_t i) -> long long {
      return i + k < n ? static_cast<long long>(rank[i + k]) : -1;
    };
    std::size_t classes = 1;
    next_rank[sa[0]] = 0;
    for (std::size_t j = 1; j < n; ++j) {
      if (rank[sa[j]] != rank[sa[j - 1]] || second(sa[j]) != second(sa[j - 1]))
        ++classes;
      next_rank[sa[j]] = classes - 1;
    }
    rank.swap(next_rank);
    alphabet = classes;
    if (classes == n || k >= n) break;
  }
  return sa;
}

SuffixIndex SuffixIndex::build(std::span<const Document> docs,
                               bool case_fold) {
  if (docs.empty())
    throw std::invalid_argument("cannot index an empty document list");
  SuffixIndex index;
  index.case_folded_ = case_fold;
  std::size_t total = 0;
  for (const Document& d : docs) total += d.text.size() + 1;
  index.text_.reserve(total);
  for (const Document& d : docs) {
    if (d.text.empty())
      throw std::invalid_argument("empty document: " + d.id);
    if (d.text.find(kDocumentSentinel) != std::string::npos)
      throw std::invalid_argument("document contains the sentinel byte: " +
                                  d.id);
    index.text_ += case_fold ? ascii_lower(d.text) : d.text;
    index.text_.push_back(kDocumentSentinel);
  }
  index.doc_count_ = docs.size();
  index.sa_ = build_suffix_array(index.text_);
  return index;
}

std::uint64_t SuffixIndex::count(std::string_view pattern) const {
  if (pattern.empty())
    throw std::invalid_argument("count of an empty pattern is undefined");
  if (pattern.find(kDocumentSentinel) != std::string_view::npos)
    throw std::invalid_argument("pattern contains the sentinel byte");
  std::string folded;
  if (case_folded_) {
    folded = ascii_lower(pattern);
    pattern = folded;
  }
  const std::string_view text = text_;
  auto prefix = [&](std::uint64_t pos) {
    return text.substr(pos, pattern.size());
  };
  const auto lo = std::partition_point(
      sa_.begin(), sa_.end(),
      [&](std::uint64_t pos) { return prefix(pos) < pattern; });
  const auto hi = std::partition_point(
      lo, sa_.end(), [&](std::uint64_t pos) { return prefix(pos) == pattern; });
  return static_cast<std::uint64_t>(hi - lo);
}

std::uint64_t SuffixIndex::definition_freq(std::string_view sf,
                                           std::string_view lf) const {
  if (sf.empty() || lf.empty())
    throw std::invalid_argument("definition_freq needs non-empty sf and lf");
  std::string query;
  query.reserve(lf.size() + sf.size() + 2);
  query += lf;
  query += " (";
  query += sf;
  return count(query);
}

// Layout (little-endian): magic[6] | u64 text length | u32 flags |
// text bytes | u64 suffix offsets | u32 CRC-32 of everything before it.
std::string SuffixIndex::serialize() const {
  std::string out;
  out.reserve(kMagic.size() + 8 + 4 + text_.size() + 8 * sa_.size() + 4);
  out += kMagic;
  put_u64(out, text_.size());
  put_u32(out, case_folded_ ? kFlagCaseFolded : 0u);
  out += text_;
  for (std::uint64_t v : sa_) put_u64(out, v);
  put_u32(out, crc_of(out));
  return out;
}

SuffixIndex SuffixIndex::deserialize(std::string_view bytes) {
  using Kind = IndexFormatError::Kind;
  if (bytes.size() < kMagic.size()) {
    if (bytes.empty() || kMagic.starts_with(bytes))
      throw IndexFormatError(Kind::kTruncated, "index file is truncated");
    throw IndexFormatError(Kind::kVersion, "not an index file (bad magic)");
  }
  if (bytes.substr(0, kMagic.size()) != kMagic) {
    if (bytes.starts_with(kMagicFamily))
      throw IndexFormatError(
          Kind::kVersion, "unsupported index version '" +
                              std::string(bytes.substr(kMagicFamily.size(), 1)) +
                              "', expected '1'");
    throw IndexFormatError(Kind::kVersion, "not an index file (bad magic)");
  }
  constexpr std::size_t kHeader = kMagic.size() + 8 + 4;
  if (bytes.size() < kHeader)
    throw IndexFormatError(Kind::kTruncated, "index header is truncated");
  const std::uint64_t n = get_le(bytes, kMagic.size(), 8);
  const auto flags = static_cast<std::uint32_t>(get_le(bytes, kMagic.size() + 8, 4));
  // Guard the size arithmetic against absurd lengths from corrupt headers.
  if (n > bytes.size())
    throw IndexFormatError(Kind::kTruncated, "index body is truncated");
  const std::size_t expected = kHeader + n + 8 * n + 4;
  if (bytes.size() < expected)
    throw IndexFormatError(Kind::kTruncated, "index body is truncated");
  if (bytes.size() > expected)
    throw IndexFormatError(Kind::kCorrupt, "trailing bytes after index body");
  const auto stored = static_cast<std::uint32_t>(get_le(bytes, expected - 4, 4));
  if (stored != crc_of(bytes.substr(0, expected - 4)))
    throw IndexFormatError(Kind::kChecksum, "index checksum mismatch");
  if ((flags & ~kFlagCaseFolded) != 0)
    throw IndexFormatError(Kind::kCorrupt, "unknown index flags");

  SuffixIndex index;
  index.case_folded_ = (flags & kFlagCaseFolded) != 0;
  index.text_ = std::string(bytes.substr(kHeader, n));
  index.doc_count_ = static_cast<std::size_t>(
      std::count(index.text_.begin(), index.text_.end(), kDocumentSentinel));
  index.sa_.resize(n);
  std::vector<bool> seen(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t v = get_le(bytes, kHeader + n + 8 * i, 8);
    if (v >= n || seen[v])
      throw IndexFormatError(Kind::kCorrupt, "suffix offsets are not a permutation");
    seen[v] = true;
    index.sa_[i] = v;
  }
  if (n == 0 || index.text_.back() != kDocumentSentinel)
    throw IndexFormatError(Kind::kCorrupt, "index text is not sentinel-terminated");
  return index;
}

void SuffixIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IndexFormatError(IndexFormatError::Kind::kIo,
                           "cannot open for writing: " + path.string());
  const std::string bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IndexFormatError(IndexFormatError::Kind::kIo,
                           "write failed: " + path.string());
}

SuffixIndex SuffixIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IndexFormatError(IndexFormatError::Kind::kIo,
                           "cannot open index: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return deserialize(buf.str());
  } catch (const IndexFormatError& e) {
    throw IndexFormatError(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace adi
