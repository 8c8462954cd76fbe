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

#include "adi/formats.hpp"

#include <boost/property_tree/detail/rapidxml.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace adi {

namespace {

namespace rx = boost::property_tree::detail::rapidxml;

std::string line_ref(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::size_t parse_size(std::string_view s, const std::string& where,
                       std::string_view what) {
  s = trim(s);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError(where, "invalid " + std::string(what) + " '" +
                                 std::string(s) + "'");
  return v;
}

bool is_header(const std::vector<std::string>& fields) {
  return !fields.empty() && fields[0] == "doc_id";
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw FileError(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos
                                               ? std::string_view::npos
                                               : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

void write_tsv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (const std::string& f : fields)
    if (f.find_first_of("\t\n\r") != std::string::npos)
      throw std::invalid_argument("TSV field contains a tab or newline: '" +
                                  f + "'");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << '\t';
    out << fields[i];
  }
  out << '\n';
}

DocumentFormat parse_document_format(std::string_view s) {
  if (s == "auto") return DocumentFormat::kAuto;
  if (s == "text") return DocumentFormat::kText;
  if (s == "tsv") return DocumentFormat::kTsv;
  if (s == "bioc") return DocumentFormat::kBioc;
  throw std::invalid_argument("unknown document format: " + std::string(s));
}

std::vector<Document> read_documents(const std::filesystem::path& path,
                                     DocumentFormat format) {
  if (format == DocumentFormat::kAuto) {
    const std::string ext = ascii_lower(path.extension().string());
    format = ext == ".tsv"                      ? DocumentFormat::kTsv
             : (ext == ".xml" || ext == ".bioc") ? DocumentFormat::kBioc
                                                 : DocumentFormat::kText;
  }
  if (format == DocumentFormat::kBioc)
    return read_bioc_subset(path).documents;

  const std::string content = read_file(path);
  if (format == DocumentFormat::kText)
    return {Document{path.stem().string(), content}};

  std::vector<Document> docs;
  std::set<std::string> seen;
  const std::vector<std::string> lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2)
      throw FormatError(line_ref(path, i + 1),
                        "expected 2 tab-separated fields (id, text), got " +
                            std::to_string(fields.size()));
    if (fields[0].empty())
      throw FormatError(line_ref(path, i + 1), "empty document id");
    if (!seen.insert(fields[0]).second)
      throw FormatError(line_ref(path, i + 1),
                        "duplicate document id '" + fields[0] + "'");
    docs.push_back({fields[0], fields[1]});
  }
  return docs;
}

void write_pairs_tsv(std::ostream& out, const std::string& doc_id,
                     const std::vector<SfLfPair>& pairs) {
  for (const SfLfPair& p : pairs)
    write_tsv_row(out, {doc_id, p.sf, p.lf, std::to_string(p.sf_span.start),
                        std::to_string(p.sf_span.end),
                        std::to_string(p.lf_span.start),
                        std::to_string(p.lf_span.end),
                        std::string(pattern_name(p.pattern))});
}

GoldSet read_gold_tsv(const std::filesystem::path& path) {
  GoldSet gold(path.stem().string());
  const std::vector<std::string> lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_tabs(lines[i]);
    if (i == 0 && is_header(fields)) continue;
    if (fields.size() == 1 && !fields[0].empty()) {
      gold.add_document(fields[0]);
      continue;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty())
      throw FormatError(line_ref(path, i + 1),
                        "expected doc_id<TAB>sf<TAB>lf");
    gold.add(fields[0], fields[1], fields[2]);
  }
  return gold;
}

Predictions read_predictions_tsv(const std::filesystem::path& path) {
  Predictions out;
  const std::vector<std::string> lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_tabs(lines[i]);
    if (i == 0 && is_header(fields)) continue;
    if (fields.size() < 3 || fields[0].empty())
      throw FormatError(line_ref(path, i + 1),
                        "expected at least doc_id<TAB>sf<TAB>lf");
    out[fields[0]].emplace_back(fields[1], fields[2]);
  }
  return out;
}

Json nbest_to_json(const NBestList& list) {
  Json j;
  j["doc_id"] = list.doc_id;
  j["sf"] = list.sf;
  j["sf_start"] = list.sf_span.start;
  j["sf_end"] = list.sf_span.end;
  Json cands = Json::array();
  for (const Candidate& c : list.candidates) {
    Json cj;
    cj["lf"] = c.lf;
    cj["rank"] = c.rank;
    if (c.generator_score) cj["score"] = *c.generator_score;
    cands.push_back(std::move(cj));
  }
  j["candidates"] = std::move(cands);
  return j;
}

NBestList nbest_from_json(const Json& j, const std::string& where) {
  NBestList list;
  try {
    if (!j.is_object()) throw FormatError(where, "expected a JSON object");
    list.doc_id = j.at("doc_id").get<std::string>();
    list.sf = j.at("sf").get<std::string>();
    list.sf_span.start = j.at("sf_start").get<std::size_t>();
    list.sf_span.end = j.at("sf_end").get<std::size_t>();
    for (const Json& c : j.at("candidates")) {
      Candidate cand;
      cand.lf = c.at("lf").get<std::string>();
      cand.rank = c.at("rank").get<int>();
      if (c.contains("score") && !c["score"].is_null())
        cand.generator_score = c["score"].get<double>();
      list.candidates.push_back(std::move(cand));
    }
  } catch (const Json::exception& e) {
    throw FormatError(where, e.what());
  }
  if (list.doc_id.empty()) throw FormatError(where, "empty doc_id");
  if (list.sf.empty()) throw FormatError(where, "empty sf");
  std::stable_sort(list.candidates.begin(), list.candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.rank < b.rank;
                   });
  for (std::size_t i = 0; i < list.candidates.size(); ++i) {
    if (list.candidates[i].rank != static_cast<int>(i))
      throw FormatError(where, "candidate ranks must be 0..n-1 without gaps");
    if (list.candidates[i].lf.empty())
      throw FormatError(where, "empty candidate lf");
  }
  return list;
}

Json reranked_to_json(const Json& input, const RerankedList& reranked,
                      const ModelCoefficients& model) {
  Json out = input;
  std::map<int, const ScoredCandidate*> by_rank;
  for (const ScoredCandidate& sc : reranked.scored)
    by_rank[sc.candidate.rank] = &sc;
  for (Json& c : out["candidates"]) {
    const ScoredCandidate* sc = by_rank.at(c.at("rank").get<int>());
    Json features;
    features["rank"] = sc->features.rank;
    features["charmatch"] = sc->features.charmatch;
    features["log1p_freq"] = sc->features.log1p_freq;
    c["features"] = std::move(features);
    c["z"] = sc->z;
    c["prob"] = sc->prob;
  }
  Json order = Json::array();
  for (const ScoredCandidate& sc : reranked.scored)
    order.push_back(sc.candidate.rank);
  out["order"] = std::move(order);
  out["model"] = model.source_name();
  if (const ScoredCandidate* c = reranked.chosen()) {
    Json chosen;
    chosen["lf"] = c->candidate.lf;
    chosen["rank"] = c->candidate.rank;
    chosen["z"] = c->z;
    chosen["prob"] = c->prob;
    out["chosen"] = std::move(chosen);
  } else {
    out["chosen"] = nullptr;
  }
  return out;
}

RerankedList reranked_from_json(const Json& j, const std::string& where) {
  RerankedList out{nbest_from_json(j, where), {}};
  try {
    std::map<int, ScoredCandidate> by_rank;
    for (const Json& c : j.at("candidates")) {
      ScoredCandidate sc;
      sc.candidate.lf = c.at("lf").get<std::string>();
      sc.candidate.rank = c.at("rank").get<int>();
      if (c.contains("score") && !c["score"].is_null())
        sc.candidate.generator_score = c["score"].get<double>();
      const Json& f = c.at("features");
      sc.features.rank = f.at("rank").get<int>();
      sc.features.charmatch = f.at("charmatch").get<int>();
      sc.features.log1p_freq = f.at("log1p_freq").get<double>();
      sc.z = c.at("z").get<double>();
      sc.prob = c.at("prob").get<double>();
      by_rank[sc.candidate.rank] = std::move(sc);
    }
    for (const Json& r : j.at("order")) {
      auto it = by_rank.find(r.get<int>());
      if (it == by_rank.end())
        throw FormatError(where, "order references an unknown rank");
      out.scored.push_back(it->second);
    }
  } catch (const Json::exception& e) {
    throw FormatError(where, e.what());
  }
  if (out.scored.size() != out.source.candidates.size())
    throw FormatError(where, "order must list every candidate once");
  return out;
}

Json model_to_json(const ModelCoefficients& m) {
  Json j;
  j["beta0"] = m.beta[0];
  j["beta1"] = m.beta[1];
  j["beta2"] = m.beta[2];
  j["beta3"] = m.beta[3];
  j["feature_set"] = std::string(feature_set_name(m.feature_set));
  j["source"] = m.source_name();
  return j;
}

ModelCoefficients model_from_json(const Json& j) {
  ModelCoefficients m;
  try {
    m.beta = {j.at("beta0").get<double>(), j.at("beta1").get<double>(),
              j.at("beta2").get<double>(), j.at("beta3").get<double>()};
    m.feature_set = parse_feature_set(j.at("feature_set").get<std::string>());
    const std::string source = j.value("source", std::string("TRAINED"));
    if (source.starts_with("PRESET(") && source.ends_with(")")) {
      m.preset_id = static_cast<int>(
          parse_size(source.substr(7, source.size() - 8), "model", "preset id"));
    } else if (source != "TRAINED") {
      throw std::invalid_argument("unknown model source: " + source);
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("invalid model JSON: ") + e.what());
  }
  if (!m.consistent())
    throw std::invalid_argument(
        "model coefficients are inconsistent with feature_set " +
        std::string(feature_set_name(m.feature_set)));
  return m;
}

// BioC subset reader.

namespace {

using XmlNode = rx::xml_node<char>;

struct BiocAnnotation {
  std::string type;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string text;
  bool valid = false;
};

std::string child_value(const XmlNode* node, const char* name) {
  const XmlNode* c = node->first_node(name);
  return c ? std::string(c->value(), c->value_size()) : std::string();
}

std::string infon(const XmlNode* node, const char* key) {
  for (const XmlNode* i = node->first_node("infon"); i;
       i = i->next_sibling("infon")) {
    const auto* a = i->first_attribute("key");
    if (a && std::string_view(a->value(), a->value_size()) == key)
      return std::string(i->value(), i->value_size());
  }
  return {};
}

std::string attr(const XmlNode* node, const char* name) {
  const auto* a = node->first_attribute(name);
  return a ? std::string(a->value(), a->value_size()) : std::string();
}

bool role_is(std::string_view role, std::string_view kind) {
  const std::string r = ascii_lower(role);
  return r == kind || r == std::string(kind) + "form" ||
         r == std::string(kind) + "_form" || r == std::string(kind) + " form";
}

}  // namespace

BiocCollection parse_bioc_subset(std::string xml, const std::string& name) {
  BiocCollection out;
  out.gold = GoldSet(name);
  std::vector<char> buf(xml.begin(), xml.end());
  buf.push_back('\0');
  rx::xml_document<char> doc;
  try {
    doc.parse<rx::parse_validate_closing_tags>(buf.data());
  } catch (const rx::parse_error& e) {
    const auto offset = static_cast<std::size_t>(e.where<char>() - buf.data());
    throw FormatError(name + ": byte " + std::to_string(offset),
                      std::string("malformed BioC markup: ") + e.what());
  }
  const char* base = buf.data();
  auto where = [&](const XmlNode* n) {
    return name + ": byte " + std::to_string(static_cast<std::size_t>(n->name() - base));
  };

  const XmlNode* collection = doc.first_node("collection");
  if (collection == nullptr)
    throw FormatError(name + ": byte 0", "missing <collection> element");

  std::set<std::string> seen;
  for (const XmlNode* d = collection->first_node("document"); d;
       d = d->next_sibling("document")) {
    Document document;
    document.id = std::string(trim(child_value(d, "id")));
    if (document.id.empty()) throw FormatError(where(d), "document without <id>");
    if (!seen.insert(document.id).second)
      throw FormatError(where(d), "duplicate document id '" + document.id + "'");

    std::map<std::string, BiocAnnotation> annotations;
    std::vector<const XmlNode*> relations;

    auto read_annotations = [&](const XmlNode* parent, std::size_t passage_offset,
                                std::string_view passage_text) {
      for (const XmlNode* a = parent->first_node("annotation"); a;
           a = a->next_sibling("annotation")) {
        BiocAnnotation ann;
        ann.type = infon(a, "type");
        ann.text = child_value(a, "text");
        const std::string id = attr(a, "id");
        const XmlNode* loc = a->first_node("location");
        if (loc == nullptr) throw FormatError(where(a), "annotation without <location>");
        ann.offset = parse_size(attr(loc, "offset"), where(loc), "location offset");
        ann.length = parse_size(attr(loc, "length"), where(loc), "location length");
        ann.valid = ann.offset >= passage_offset &&
                    ann.offset - passage_offset + ann.length <= passage_text.size() &&
                    passage_text.substr(ann.offset - passage_offset, ann.length) ==
                        ann.text;
        if (!ann.valid) {
          ++out.skipped_annotations;
          out.warnings.push_back(where(a) + ": annotation '" + id + "' in document '" +
                                 document.id + "' does not match passage text; skipped");
        }
        annotations[id] = std::move(ann);
      }
      for (const XmlNode* r = parent->first_node("relation"); r;
           r = r->next_sibling("relation"))
        relations.push_back(r);
    };

    std::vector<std::pair<const XmlNode*, std::size_t>> passages;
    for (const XmlNode* p = d->first_node("passage"); p;
         p = p->next_sibling("passage")) {
      const XmlNode* off = p->first_node("offset");
      const std::size_t offset =
          off ? parse_size(std::string_view(off->value(), off->value_size()),
                           where(off), "passage offset")
              : document.text.size();
      if (offset < document.text.size())
        throw FormatError(where(p), "passage offset overlaps the previous passage");
      document.text.resize(offset, ' ');
      document.text += child_value(p, "text");
      passages.emplace_back(p, offset);
    }
    for (const auto& [p, offset] : passages)
      read_annotations(p, offset,
                       std::string_view(document.text).substr(
                           offset, child_value(p, "text").size()));
    read_annotations(d, 0, document.text);

    out.gold.add_document(document.id);
    for (const XmlNode* r : relations) {
      const BiocAnnotation* sf = nullptr;
      const BiocAnnotation* lf = nullptr;
      bool skipped = false;
      for (const XmlNode* n = r->first_node("node"); n; n = n->next_sibling("node")) {
        auto it = annotations.find(attr(n, "refid"));
        if (it == annotations.end())
          throw FormatError(where(n), "relation node references unknown annotation '" +
                                          attr(n, "refid") + "'");
        const std::string role = attr(n, "role");
        const std::string kind = role.empty() ? it->second.type : role;
        if (!it->second.valid) skipped = true;
        if (role_is(kind, "short"))
          sf = &it->second;
        else if (role_is(kind, "long"))
          lf = &it->second;
      }
      if (skipped) {
        ++out.skipped_pairs;
        continue;
      }
      if (sf == nullptr || lf == nullptr) continue;
      out.gold.add(document.id, sf->text, lf->text);
    }
    out.documents.push_back(std::move(document));
  }
  return out;
}

BiocCollection read_bioc_subset(const std::filesystem::path& path) {
  BiocCollection c = parse_bioc_subset(read_file(path), path.string());
  GoldSet named(path.stem().string());
  for (const auto& [id, pairs] : c.gold.entries()) {
    named.add_document(id);
    for (const auto& [sf, lf] : pairs) named.add(id, sf, lf);
  }
  c.gold = std::move(named);
  return c;
}

}  // namespace adi
