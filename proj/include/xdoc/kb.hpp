// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xdoc/corpus.hpp"

namespace xdoc {

// Trim, collapse internal whitespace runs to one space, lowercase ASCII.
// All knowledge-base lookups go through this key.
std::string normalize_title(std::string_view title);

// Immutable-after-load snapshot of the knowledge base: redirect edges,
// disambiguation expansions and content-page token statistics. A normalized
// title is exactly one of content page, redirect or disambiguation;
// conflicts resolve with precedence page > redirect > disambiguation and are
// recorded as warnings.
class KbSnapshot {
 public:
  struct Page {
    std::string title;  // display form, as first seen
    TokenCounts tokens;
  };

  // Builders normalize titles and enforce the precedence rule.
  void add_page(std::string_view title, std::string_view text);
  void add_page_tokens(std::string_view title, TokenCounts tokens);
  void add_redirect(std::string_view source, std::string_view target);
  void add_disambiguation(std::string_view title,
                          const std::vector<std::string>& members);

  const Page* page(std::string_view title) const;          // normalizes
  const Page* page_by_key(const std::string& key) const;   // pre-normalized
  const std::string* redirect_target(const std::string& key) const;
  const std::vector<std::string>* disambiguation_members(
      const std::string& key) const;

  // Visits every content page; iteration order is unspecified.
  void for_each_page(const std::function<void(const Page&)>& fn) const;

  std::size_t page_count() const { return pages_.size(); }
  std::size_t redirect_count() const { return redirects_.size(); }
  std::size_t disambiguation_count() const { return disambiguations_.size(); }

  // idf statistics over content pages.
  const CorpusStats& stats() const { return stats_; }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::unordered_map<std::string, Page> pages_;
  std::unordered_map<std::string, std::string> redirects_;  // key -> key
  std::unordered_map<std::string, std::vector<std::string>> disambiguations_;
  CorpusStats stats_;
  std::vector<std::string> warnings_;
};

// Loads the three on-disk tables:
//   redirects: "source<TAB>target" per line
//   disambig:  "title<TAB>member1|member2|..." per line
//   pages:     JSONL with {"title": ..., "text": ...}
// Pages are loaded first so the precedence rule applies. Throws DataError
// with file:line on malformed records.
KbSnapshot load_kb(const std::string& redirects_path,
                   const std::string& disambig_path,
                   const std::string& pages_path);

// Content pages reachable from the mention string by following redirects
// and expanding disambiguation pages. Each title is processed at most once,
// so redirect cycles terminate. Returns sorted display titles; unresolvable
// input gives an empty set.
std::vector<std::string> candidate_set(std::string_view mention_string,
                                       const KbSnapshot& kb);

// ln(doc_count / doc_freq) for recorded tokens, ln(doc_count) for unseen
// ones. Throws UsageError when stats are empty.
double idf(std::string_view token, const CorpusStats& stats);

}  // namespace xdoc
