// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace xdoc {

// Half-open character range. All offsets in this codebase are Unicode code
// points, not bytes.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

// A raw input article with pre-annotated person-name spans.
struct Document {
  std::string doc_id;
  std::string text;
  std::vector<Span> person_spans;  // in-bounds, non-empty, sorted, disjoint
};

// Throws DataError if the spans violate the Document invariants.
void validate_document(const Document& doc);

// One name occurrence inside a document.
struct SubMention {
  std::string doc_id;
  Span span;
  std::string surface;  // equals the document slice at span

  friend bool operator==(const SubMention&, const SubMention&) = default;
};

// Token multiset.
struct TokenCounts {
  std::unordered_map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  void add(const std::string& token, std::int64_t n = 1) {
    counts[token] += n;
    total += n;
  }
  bool empty() const { return counts.empty(); }

  friend bool operator==(const TokenCounts& a, const TokenCounts& b) {
    return a.total == b.total && a.counts == b.counts;
  }
};

TokenCounts count_tokens(const std::vector<std::string>& tokens);

// A within-document entity: the unit of cross-document coreference.
struct Mention {
  std::string mention_id;
  std::string doc_id;
  std::vector<SubMention> sub_mentions;  // non-empty
  std::string canonical;                 // longest surface, lex tie-break
  TokenCounts name_bag;
  TokenCounts context_bag;
};

// Document counts for idf computation. doc_freq counts the number of
// documents containing each token at least once.
struct CorpusStats {
  std::int64_t doc_count = 0;
  std::unordered_map<std::string, std::int64_t> doc_freq;

  void add_document_tokens(const std::vector<std::string>& tokens);
};

// A partition of mentions into entities. The two views are kept mutually
// consistent by construction: every mention belongs to exactly one entity
// and no empty entity is retained.
class Clustering {
 public:
  // Inserts or moves a mention. Empty ids are rejected.
  void assign(const std::string& mention_id, const std::string& entity_id);

  // nullptr when the mention is unknown.
  const std::string* entity_of(const std::string& mention_id) const;

  const std::map<std::string, std::string>& assignment() const {
    return assignment_;
  }
  const std::map<std::string, std::set<std::string>>& entities() const {
    return entities_;
  }

  std::size_t mention_count() const { return assignment_.size(); }
  std::size_t entity_count() const { return entities_.size(); }
  bool empty() const { return assignment_.empty(); }

  friend bool operator==(const Clustering& a, const Clustering& b) {
    return a.assignment_ == b.assignment_;
  }

 private:
  std::map<std::string, std::string> assignment_;
  std::map<std::string, std::set<std::string>> entities_;
};

// --- UTF-8 helpers -------------------------------------------------------

// Number of code points in text. Invalid bytes count as one code point each.
std::size_t cp_length(std::string_view text);

// Byte slice covering code points [begin, end). Throws UsageError when the
// range is out of bounds or inverted.
std::string_view cp_slice(std::string_view text, std::size_t begin,
                          std::size_t end);

// --- Tokenization --------------------------------------------------------

// Maximal runs of word characters, in order. ASCII alphanumerics are
// lowercased; code points >= U+0080 pass through unchanged. Everything else
// separates tokens.
std::vector<std::string> tokenize(std::string_view text);

struct TokenSpan {
  std::string text;
  Span span;  // code-point range in the source string
};

std::vector<TokenSpan> tokenize_spans(std::string_view text);

// --- Bag construction ----------------------------------------------------

// name_bag: token counts over all sub-mention surfaces.
// context_bag: the `window` tokens on each side of every sub-mention,
// accumulated across sub-mentions; tokens overlapping a sub-mention span are
// never context. Throws DataError (naming the mention) on an out-of-bounds
// span.
std::pair<TokenCounts, TokenCounts> build_bags(const Mention& mention,
                                               const Document& doc,
                                               std::size_t window);

// Same, reusing a pre-tokenized document.
std::pair<TokenCounts, TokenCounts> build_bags(
    const Mention& mention, const Document& doc,
    const std::vector<TokenSpan>& doc_tokens, std::size_t window);

// Assembles a Mention from spans of `doc`: slices surfaces, picks the
// canonical string (longest by code points, lexicographically smallest on
// ties) and fills both bags.
Mention make_mention(const Document& doc,
                     const std::vector<TokenSpan>& doc_tokens,
                     std::string mention_id, const std::vector<Span>& spans,
                     std::size_t window);

}  // namespace xdoc
