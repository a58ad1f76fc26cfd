// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/kb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "xdoc/errors.hpp"

namespace xdoc {

std::string normalize_title(std::string_view title) {
  std::string out;
  out.reserve(title.size());
  bool pending_space = false;
  for (const char ch : title) {
    const bool ws = ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' ||
                    ch == '\f' || ch == '\v';
    if (ws) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a')
                                         : ch);
  }
  return out;
}

void KbSnapshot::add_page(std::string_view title, std::string_view text) {
  add_page_tokens(title, count_tokens(tokenize(text)));
}

void KbSnapshot::add_page_tokens(std::string_view title, TokenCounts tokens) {
  const std::string key = normalize_title(title);
  if (key.empty()) {
    warnings_.push_back("page with empty title dropped");
    return;
  }
  if (pages_.contains(key)) {
    warnings_.push_back("duplicate page '" + key + "' dropped");
    return;
  }
  if (redirects_.erase(key) > 0)
    warnings_.push_back("'" + key + "' was a redirect, kept as page");
  if (disambiguations_.erase(key) > 0)
    warnings_.push_back("'" + key + "' was a disambiguation, kept as page");
  std::vector<std::string> distinct;
  distinct.reserve(tokens.counts.size());
  for (const auto& [tok, n] : tokens.counts) {
    (void)n;
    distinct.push_back(tok);
  }
  stats_.add_document_tokens(distinct);
  Page p;
  p.title = std::string(title.substr(0, title.size()));
  p.tokens = std::move(tokens);
  pages_.emplace(key, std::move(p));
}

void KbSnapshot::add_redirect(std::string_view source,
                              std::string_view target) {
  const std::string src = normalize_title(source);
  const std::string dst = normalize_title(target);
  if (src.empty() || dst.empty()) {
    warnings_.push_back("redirect with empty side dropped");
    return;
  }
  if (src == dst) {
    warnings_.push_back("self-redirect '" + src + "' dropped");
    return;
  }
  if (pages_.contains(src)) {
    warnings_.push_back("redirect source '" + src + "' is a page, dropped");
    return;
  }
  if (auto it = redirects_.find(src); it != redirects_.end()) {
    if (it->second != dst)
      warnings_.push_back("conflicting redirect for '" + src +
                          "', first kept");
    return;
  }
  if (disambiguations_.contains(src)) {
    warnings_.push_back("'" + src +
                        "' is both redirect and disambiguation, redirect "
                        "kept");
    disambiguations_.erase(src);
  }
  redirects_.emplace(src, dst);
}

void KbSnapshot::add_disambiguation(std::string_view title,
                                    const std::vector<std::string>& members) {
  const std::string key = normalize_title(title);
  if (key.empty()) {
    warnings_.push_back("disambiguation with empty title dropped");
    return;
  }
  if (pages_.contains(key)) {
    warnings_.push_back("disambiguation '" + key + "' is a page, dropped");
    return;
  }
  if (redirects_.contains(key)) {
    warnings_.push_back("disambiguation '" + key + "' is a redirect, dropped");
    return;
  }
  if (disambiguations_.contains(key)) {
    warnings_.push_back("duplicate disambiguation '" + key + "' dropped");
    return;
  }
  std::vector<std::string> keys;
  keys.reserve(members.size());
  for (const auto& m : members) {
    std::string k = normalize_title(m);
    if (!k.empty()) keys.push_back(std::move(k));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  disambiguations_.emplace(key, std::move(keys));
}

void KbSnapshot::for_each_page(
    const std::function<void(const Page&)>& fn) const {
  for (const auto& [key, page] : pages_) fn(page);
}

const KbSnapshot::Page* KbSnapshot::page(std::string_view title) const {
  return page_by_key(normalize_title(title));
}

const KbSnapshot::Page* KbSnapshot::page_by_key(const std::string& key) const {
  auto it = pages_.find(key);
  return it == pages_.end() ? nullptr : &it->second;
}

const std::string* KbSnapshot::redirect_target(const std::string& key) const {
  auto it = redirects_.find(key);
  return it == redirects_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* KbSnapshot::disambiguation_members(
    const std::string& key) const {
  auto it = disambiguations_.find(key);
  return it == disambiguations_.end() ? nullptr : &it->second;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  return in;
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

KbSnapshot load_kb(const std::string& redirects_path,
                   const std::string& disambig_path,
                   const std::string& pages_path) {
  KbSnapshot kb;
  std::string line;
  int line_no = 0;

  // Pages first: the precedence rule needs them in place.
  {
    std::ifstream in = open_or_throw(pages_path);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      chomp(line);
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(pages_path + ":" + std::to_string(line_no) + ": " +
                        e.what());
      }
      if (!j.is_object() || !j.contains("title") || !j.contains("text") ||
          !j["title"].is_string() || !j["text"].is_string())
        throw DataError(pages_path + ":" + std::to_string(line_no) +
                        ": expected {\"title\": str, \"text\": str}");
      kb.add_page(j["title"].get<std::string>(), j["text"].get<std::string>());
    }
  }
  {
    std::ifstream in = open_or_throw(redirects_path);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      chomp(line);
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
        throw DataError(redirects_path + ":" + std::to_string(line_no) +
                        ": expected 2 tab-separated fields");
      kb.add_redirect(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  {
    std::ifstream in = open_or_throw(disambig_path);
    line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      chomp(line);
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw DataError(disambig_path + ":" + std::to_string(line_no) +
                        ": expected 2 tab-separated fields");
      std::vector<std::string> members;
      const std::string rest = line.substr(tab + 1);
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        const auto bar = rest.find('|', pos);
        const auto end = bar == std::string::npos ? rest.size() : bar;
        if (end > pos) members.push_back(rest.substr(pos, end - pos));
        if (bar == std::string::npos) break;
        pos = bar + 1;
      }
      kb.add_disambiguation(line.substr(0, tab), members);
    }
  }
  return kb;
}

std::vector<std::string> candidate_set(std::string_view mention_string,
                                       const KbSnapshot& kb) {
  std::unordered_set<std::string> visited;
  std::deque<std::string> frontier;
  std::set<std::string> result;  // display titles, sorted
  const std::string start = normalize_title(mention_string);
  if (start.empty()) return {};
  frontier.push_back(start);
  visited.insert(start);
  while (!frontier.empty()) {
    const std::string key = std::move(frontier.front());
    frontier.pop_front();
    if (const KbSnapshot::Page* p = kb.page_by_key(key)) {
      result.insert(p->title);
      continue;
    }
    if (const std::string* target = kb.redirect_target(key)) {
      if (visited.insert(*target).second) frontier.push_back(*target);
      continue;
    }
    if (const auto* members = kb.disambiguation_members(key)) {
      for (const std::string& m : *members)
        if (visited.insert(m).second) frontier.push_back(m);
    }
    // absent titles drop out
  }
  return {result.begin(), result.end()};
}

double idf(std::string_view token, const CorpusStats& stats) {
  if (stats.doc_count <= 0) throw UsageError("idf: empty corpus stats");
  const auto it = stats.doc_freq.find(std::string(token));
  const std::int64_t df = it == stats.doc_freq.end() ? 0 : it->second;
  if (df <= 0) return std::log(static_cast<double>(stats.doc_count));
  return std::log(static_cast<double>(stats.doc_count) /
                  static_cast<double>(df));
}

}  // namespace xdoc
