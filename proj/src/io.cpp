// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

#include "xdoc/errors.hpp"

namespace xdoc {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  return out;
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

json parse_line(const std::string& path, int line_no,
                const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    fail(path, line_no, e.what());
  }
}

const json& field(const std::string& path, int line_no, const json& j,
                  const char* name) {
  if (!j.is_object() || !j.contains(name))
    fail(path, line_no, std::string("missing field '") + name + "'");
  return j[name];
}

std::string str_field(const std::string& path, int line_no, const json& j,
                      const char* name) {
  const json& v = field(path, line_no, j, name);
  if (!v.is_string())
    fail(path, line_no, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<Span> spans_field(const std::string& path, int line_no,
                              const json& j, const char* name) {
  const json& v = field(path, line_no, j, name);
  if (!v.is_array())
    fail(path, line_no, std::string("field '") + name + "' must be an array");
  std::vector<Span> spans;
  spans.reserve(v.size());
  for (const json& s : v) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
        !s[1].is_number_integer())
      fail(path, line_no,
           std::string("field '") + name + "' must hold [start,end] pairs");
    const std::int64_t b = s[0].get<std::int64_t>();
    const std::int64_t e = s[1].get<std::int64_t>();
    if (b < 0 || e < 0)
      fail(path, line_no, std::string("field '") + name + "' has a negative offset");
    spans.push_back(
        Span{static_cast<std::size_t>(b), static_cast<std::size_t>(e)});
  }
  return spans;
}

json spans_json(const std::vector<Span>& spans) {
  json arr = json::array();
  for (const Span& s : spans) arr.push_back(json::array({s.begin, s.end}));
  return arr;
}

TokenCounts bag_field(const std::string& path, int line_no, const json& j,
                      const char* name) {
  const json& v = field(path, line_no, j, name);
  if (!v.is_object())
    fail(path, line_no, std::string("field '") + name + "' must be an object");
  TokenCounts bag;
  for (const auto& [tok, n] : v.items()) {
    if (!n.is_number_integer() || n.get<std::int64_t>() <= 0)
      fail(path, line_no,
           std::string("field '") + name + "' counts must be positive ints");
    bag.add(tok, n.get<std::int64_t>());
  }
  return bag;
}

json bag_json(const TokenCounts& bag) {
  const std::map<std::string, std::int64_t> sorted(bag.counts.begin(),
                                                   bag.counts.end());
  json obj = json::object();
  for (const auto& [tok, n] : sorted) obj[tok] = n;
  return obj;
}

}  // namespace

std::vector<Document> load_documents(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<Document> docs;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const json j = parse_line(path, line_no, line);
    Document doc;
    doc.doc_id = str_field(path, line_no, j, "doc_id");
    doc.text = str_field(path, line_no, j, "text");
    doc.person_spans = spans_field(path, line_no, j, "person_spans");
    if (!seen.insert(doc.doc_id).second)
      fail(path, line_no, "duplicate doc_id '" + doc.doc_id + "'");
    try {
      validate_document(doc);
    } catch (const DataError& e) {
      fail(path, line_no, e.what());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void write_documents(const std::string& path,
                     const std::vector<Document>& docs) {
  std::ofstream out = open_out(path);
  for (const Document& doc : docs) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["text"] = doc.text;
    j["person_spans"] = spans_json(doc.person_spans);
    out << j.dump() << '\n';
  }
  if (!out) throw DataError(path + ": write failed");
}

std::vector<Mention> load_mentions(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<Mention> mentions;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const json j = parse_line(path, line_no, line);
    Mention m;
    m.mention_id = str_field(path, line_no, j, "mention_id");
    m.doc_id = str_field(path, line_no, j, "doc_id");
    const std::vector<Span> spans = spans_field(path, line_no, j, "spans");
    const json& surfaces = field(path, line_no, j, "surfaces");
    if (!surfaces.is_array() || surfaces.size() != spans.size())
      fail(path, line_no, "'surfaces' must parallel 'spans'");
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (!surfaces[i].is_string())
        fail(path, line_no, "'surfaces' entries must be strings");
      m.sub_mentions.push_back(
          SubMention{m.doc_id, spans[i], surfaces[i].get<std::string>()});
    }
    m.canonical = str_field(path, line_no, j, "canonical");
    m.name_bag = bag_field(path, line_no, j, "name_bag");
    m.context_bag = bag_field(path, line_no, j, "context_bag");
    if (m.sub_mentions.empty())
      fail(path, line_no, "mention '" + m.mention_id + "' has no spans");
    if (!seen.insert(m.mention_id).second)
      fail(path, line_no, "duplicate mention_id '" + m.mention_id + "'");
    mentions.push_back(std::move(m));
  }
  return mentions;
}

void write_mentions(const std::string& path,
                    const std::vector<Mention>& mentions) {
  std::ofstream out = open_out(path);
  for (const Mention& m : mentions) {
    json j;
    j["mention_id"] = m.mention_id;
    j["doc_id"] = m.doc_id;
    std::vector<Span> spans;
    json surfaces = json::array();
    for (const SubMention& sm : m.sub_mentions) {
      spans.push_back(sm.span);
      surfaces.push_back(sm.surface);
    }
    j["spans"] = spans_json(spans);
    j["surfaces"] = surfaces;
    j["canonical"] = m.canonical;
    j["name_bag"] = bag_json(m.name_bag);
    j["context_bag"] = bag_json(m.context_bag);
    out << j.dump() << '\n';
  }
  if (!out) throw DataError(path + ": write failed");
}

std::map<std::string, std::string> read_pairs_tsv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos ||
        line.find('\t', tab + 1) != std::string::npos)
      fail(path, line_no, "expected 2 tab-separated fields");
    std::string key = line.substr(0, tab);
    if (key.empty()) fail(path, line_no, "empty mention_id");
    if (rows.contains(key))
      fail(path, line_no, "duplicate mention_id '" + key + "'");
    rows.emplace(std::move(key), line.substr(tab + 1));
  }
  return rows;
}

void write_pairs_tsv(const std::string& path,
                     const std::map<std::string, std::string>& rows) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : rows) out << key << '\t' << value << '\n';
  if (!out) throw DataError(path + ": write failed");
}

Clustering read_clustering(const std::string& path) {
  Clustering clustering;
  for (const auto& [mention_id, entity_id] : read_pairs_tsv(path)) {
    if (entity_id.empty())
      throw DataError(path + ": empty entity_id for '" + mention_id + "'");
    clustering.assign(mention_id, entity_id);
  }
  return clustering;
}

void write_clustering(const std::string& path, const Clustering& clustering) {
  std::map<std::string, std::string> rows(clustering.assignment().begin(),
                                          clustering.assignment().end());
  write_pairs_tsv(path, rows);
}

}  // namespace xdoc
