// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/corpus.hpp"

#include <algorithm>

#include "xdoc/errors.hpp"

namespace xdoc {

namespace {

// Decodes the code point starting at byte `pos`; returns the number of bytes
// consumed (at least 1). Invalid sequences consume a single byte and yield
// the byte value itself.
std::size_t decode_cp(std::string_view text, std::size_t pos,
                      char32_t* out_cp) {
  const auto byte = static_cast<unsigned char>(text[pos]);
  std::size_t len = 1;
  char32_t cp = byte;
  if (byte >= 0xF0) {
    len = 4;
    cp = byte & 0x07u;
  } else if (byte >= 0xE0) {
    len = 3;
    cp = byte & 0x0Fu;
  } else if (byte >= 0xC0) {
    len = 2;
    cp = byte & 0x1Fu;
  }
  if (pos + len > text.size()) len = 1, cp = byte;
  for (std::size_t i = 1; i < len; ++i) {
    const auto cont = static_cast<unsigned char>(text[pos + i]);
    if ((cont & 0xC0u) != 0x80u) {  // not a continuation byte, resync
      len = 1;
      cp = byte;
      break;
    }
    cp = (cp << 6) | (cont & 0x3Fu);
  }
  if (out_cp != nullptr) *out_cp = cp;
  return len;
}

bool is_ascii_alnum(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
         (cp >= 'A' && cp <= 'Z');
}

bool is_word_cp(char32_t cp) { return is_ascii_alnum(cp) || cp >= 0x80; }

}  // namespace

std::size_t cp_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    pos += decode_cp(text, pos, nullptr);
    ++n;
  }
  return n;
}

std::string_view cp_slice(std::string_view text, std::size_t begin,
                          std::size_t end) {
  if (begin > end) throw UsageError("cp_slice: inverted range");
  std::size_t cp = 0;
  std::size_t byte_begin = text.size();
  std::size_t pos = 0;
  if (begin == 0) byte_begin = 0;
  while (pos < text.size() && cp < end) {
    pos += decode_cp(text, pos, nullptr);
    ++cp;
    if (cp == begin) byte_begin = pos;
  }
  if (cp < end) throw UsageError("cp_slice: range past end of text");
  return text.substr(byte_begin, pos - byte_begin);
}

void validate_document(const Document& doc) {
  const std::size_t len = cp_length(doc.text);
  std::size_t prev_end = 0;
  bool first = true;
  for (const Span& s : doc.person_spans) {
    if (s.begin >= s.end)
      throw DataError("document '" + doc.doc_id + "': empty or inverted span");
    if (s.end > len)
      throw DataError("document '" + doc.doc_id + "': span out of bounds");
    if (!first && s.begin < prev_end)
      throw DataError("document '" + doc.doc_id +
                      "': spans overlap or are unsorted");
    prev_end = s.end;
    first = false;
  }
}

TokenCounts count_tokens(const std::vector<std::string>& tokens) {
  TokenCounts bag;
  for (const auto& t : tokens) bag.add(t);
  return bag;
}

void CorpusStats::add_document_tokens(const std::vector<std::string>& tokens) {
  ++doc_count;
  // count each distinct token once per document
  std::vector<std::string> uniq = tokens;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  for (const auto& t : uniq) ++doc_freq[t];
}

void Clustering::assign(const std::string& mention_id,
                        const std::string& entity_id) {
  if (mention_id.empty() || entity_id.empty())
    throw UsageError("Clustering::assign: empty id");
  auto it = assignment_.find(mention_id);
  if (it != assignment_.end()) {
    if (it->second == entity_id) return;
    auto& old_members = entities_[it->second];
    old_members.erase(mention_id);
    if (old_members.empty()) entities_.erase(it->second);
    it->second = entity_id;
  } else {
    assignment_.emplace(mention_id, entity_id);
  }
  entities_[entity_id].insert(mention_id);
}

const std::string* Clustering::entity_of(const std::string& mention_id) const {
  auto it = assignment_.find(mention_id);
  return it == assignment_.end() ? nullptr : &it->second;
}

std::vector<TokenSpan> tokenize_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  std::string current;
  std::size_t token_begin = 0;
  std::size_t cp_index = 0;
  for (std::size_t pos = 0; pos < text.size(); ++cp_index) {
    char32_t cp = 0;
    const std::size_t len = decode_cp(text, pos, &cp);
    if (is_word_cp(cp)) {
      if (current.empty()) token_begin = cp_index;
      if (cp < 0x80) {
        char c = static_cast<char>(cp);
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        current.push_back(c);
      } else {
        current.append(text.substr(pos, len));
      }
    } else if (!current.empty()) {
      out.push_back({std::move(current), {token_begin, cp_index}});
      current.clear();
    }
    pos += len;
  }
  if (!current.empty())
    out.push_back({std::move(current), {token_begin, cp_index}});
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& ts : tokenize_spans(text)) out.push_back(std::move(ts.text));
  return out;
}

std::pair<TokenCounts, TokenCounts> build_bags(
    const Mention& mention, const Document& doc,
    const std::vector<TokenSpan>& doc_tokens, std::size_t window) {
  const std::size_t doc_len = cp_length(doc.text);
  TokenCounts name_bag;
  TokenCounts context_bag;
  // Tokens overlapping any sub-mention span are never context and do not
  // consume window budget.
  const auto overlaps_mention = [&mention](const TokenSpan& ts) {
    for (const SubMention& sm : mention.sub_mentions)
      if (ts.span.begin < sm.span.end && sm.span.begin < ts.span.end)
        return true;
    return false;
  };
  for (const SubMention& sm : mention.sub_mentions) {
    if (sm.span.begin >= sm.span.end || sm.span.end > doc_len)
      throw DataError("mention '" + mention.mention_id +
                      "': span out of bounds in document '" + doc.doc_id +
                      "'");
    for (const auto& t : tokenize(sm.surface)) name_bag.add(t);
    if (window == 0) continue;
    // First doc token starting at or after the span end.
    auto right = std::lower_bound(
        doc_tokens.begin(), doc_tokens.end(), sm.span.end,
        [](const TokenSpan& ts, std::size_t v) { return ts.span.begin < v; });
    auto left = right;
    std::size_t taken = 0;
    while (left != doc_tokens.begin() && taken < window) {
      --left;
      if (overlaps_mention(*left)) continue;
      context_bag.add(left->text);
      ++taken;
    }
    taken = 0;
    for (auto it = right; it != doc_tokens.end() && taken < window; ++it) {
      if (overlaps_mention(*it)) continue;
      context_bag.add(it->text);
      ++taken;
    }
  }
  return {std::move(name_bag), std::move(context_bag)};
}

std::pair<TokenCounts, TokenCounts> build_bags(const Mention& mention,
                                               const Document& doc,
                                               std::size_t window) {
  return build_bags(mention, doc, tokenize_spans(doc.text), window);
}

Mention make_mention(const Document& doc,
                     const std::vector<TokenSpan>& doc_tokens,
                     std::string mention_id, const std::vector<Span>& spans,
                     std::size_t window) {
  if (spans.empty()) throw UsageError("make_mention: no spans");
  Mention m;
  m.mention_id = std::move(mention_id);
  m.doc_id = doc.doc_id;
  for (const Span& s : spans) {
    SubMention sm;
    sm.doc_id = doc.doc_id;
    sm.span = s;
    sm.surface = std::string(cp_slice(doc.text, s.begin, s.end));
    m.sub_mentions.push_back(std::move(sm));
  }
  // Canonical: longest surface by code points, lexicographically smallest
  // among equals.
  const SubMention* best = &m.sub_mentions.front();
  std::size_t best_len = cp_length(best->surface);
  for (const SubMention& sm : m.sub_mentions) {
    const std::size_t len = cp_length(sm.surface);
    if (len > best_len || (len == best_len && sm.surface < best->surface)) {
      best = &sm;
      best_len = len;
    }
  }
  m.canonical = best->surface;
  auto bags = build_bags(m, doc, doc_tokens, window);
  m.name_bag = std::move(bags.first);
  m.context_bag = std::move(bags.second);
  return m;
}

}  // namespace xdoc
