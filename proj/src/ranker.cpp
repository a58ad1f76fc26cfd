// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <json.hpp>

#include "xdoc/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xdoc {

void validate_ranker_params(const RankerParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw UsageError("ranker: alpha must be in (0,1)");
  if (!(p.lambda > 0.0 && p.lambda < 1.0))
    throw UsageError("ranker: lambda must be in (0,1)");
}

IdfWeights make_idf(const CorpusStats& stats) {
  if (stats.doc_count <= 0) throw UsageError("make_idf: empty corpus stats");
  IdfWeights idf;
  idf.fallback = std::log(static_cast<double>(stats.doc_count));
  for (const auto& [token, df] : stats.doc_freq)
    idf.values[token] = std::log(static_cast<double>(stats.doc_count) /
                                 static_cast<double>(df));
  return idf;
}

double WeightedDoc::weight_of(const std::string& token) const {
  const auto it = std::lower_bound(
      weights.begin(), weights.end(), token,
      [](const auto& entry, const std::string& t) { return entry.first < t; });
  return it != weights.end() && it->first == token ? it->second : 0.0;
}

WeightedDoc token_weights(const TokenCounts& counts, const IdfWeights& idf) {
  if (counts.counts.empty()) throw UsageError("token_weights: empty counts");
  const std::map<std::string, std::int64_t> sorted(counts.counts.begin(),
                                                   counts.counts.end());
  WeightedDoc doc;
  doc.weights.reserve(sorted.size());
  double normalizer = 0.0;
  for (const auto& [token, n] : sorted) {
    const double raw = static_cast<double>(n) * idf.of(token);
    doc.weights.emplace_back(token, raw);
    normalizer += raw;
  }
  if (normalizer > 0.0) {
    for (auto& [token, w] : doc.weights) w /= normalizer;
  } else {
    double total = 0.0;
    for (const auto& [token, n] : sorted) total += static_cast<double>(n);
    auto out = doc.weights.begin();
    for (const auto& [token, n] : sorted)
      (out++)->second = static_cast<double>(n) / total;
  }
  return doc;
}

WeightedDoc token_weights(const TokenCounts& counts,
                          const CorpusStats& stats) {
  return token_weights(counts, make_idf(stats));
}

double log_score(const WeightedDoc& candidate, const WeightedDoc& article,
                 const RankerParams& p) {
  if (candidate.empty()) throw UsageError("log_score: empty candidate");
  const double floor_prob = (1.0 - p.lambda) * p.alpha;
  double score = 0.0;
  for (const auto& [token, w_c] : candidate.weights) {
    const double w_a = article.weight_of(token);
    score += w_c * std::log(p.lambda * w_a + floor_prob);
  }
  return score;
}

std::optional<std::string> select_entity(
    const std::vector<std::string>& candidates, const WeightedDoc& article,
    const std::function<const WeightedDoc*(const std::string&)>& page_weights,
    const RankerParams& p) {
  std::optional<std::string> best;
  double best_score = 0.0;
  for (const std::string& title : candidates) {
    const WeightedDoc* page = page_weights(title);
    if (page == nullptr || page->empty()) continue;
    const double score = log_score(*page, article, p);
    if (!best || score > best_score ||
        (score == best_score && title < *best)) {
      best = title;
      best_score = score;
    }
  }
  if (best && best_score >= p.log_beta) return best;
  return std::nullopt;
}

namespace {

const char* size_bucket(std::int64_t n) {
  if (n <= 1) return "1";
  if (n <= 9) return "2-9";
  if (n <= 99) return "10-99";
  if (n <= 999) return "100-999";
  if (n <= 9999) return "1000-9999";
  return "10000+";
}

constexpr const char* kBuckets[] = {"1",       "2-9",       "10-99",
                                    "100-999", "1000-9999", "10000+"};

}  // namespace

std::string LabelStats::to_json() const {
  nlohmann::json j;
  j["candidates"] = {{"zero", zero_candidates},
                     {"one", one_candidate},
                     {"multiple", multiple_candidates}};
  j["decisions"] = {{"accepted", accepted}, {"rejected", rejected}};
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& [bucket, count] : entity_sizes)
    sizes.push_back({{"bucket", bucket}, {"count", count}});
  j["entity_sizes"] = sizes;
  return j.dump(2) + "\n";
}

DistantLabeler::DistantLabeler(const KbSnapshot& kb,
                               const std::vector<Document>& docs,
                               RankerParams params)
    : kb_(kb), params_(params) {
  validate_ranker_params(params_);
  CorpusStats article_stats;
  for (const Document& doc : docs) {
    std::vector<std::string> tokens = tokenize(doc.text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    article_stats.add_document_tokens(tokens);
  }
  if (article_stats.doc_count == 0)
    throw UsageError("DistantLabeler: no documents");
  article_idf_ = make_idf(article_stats);
  kb_idf_ = make_idf(kb.stats());
  build(docs);
}

DistantLabeler::DistantLabeler(const KbSnapshot& kb,
                               const std::vector<Document>& docs,
                               RankerParams params, IdfWeights article_idf,
                               IdfWeights kb_idf)
    : kb_(kb),
      params_(params),
      article_idf_(std::move(article_idf)),
      kb_idf_(std::move(kb_idf)) {
  validate_ranker_params(params_);
  build(docs);
}

void DistantLabeler::build(const std::vector<Document>& docs) {
  for (const Document& doc : docs) {
    if (article_weights_.contains(doc.doc_id))
      throw DataError("label: duplicate doc_id '" + doc.doc_id + "'");
    const TokenCounts counts = count_tokens(tokenize(doc.text));
    article_weights_.emplace(doc.doc_id,
                             counts.counts.empty()
                                 ? WeightedDoc{}
                                 : token_weights(counts, article_idf_));
  }
  kb_.for_each_page([this](const KbSnapshot::Page& page) {
    if (!page.tokens.counts.empty())
      page_weights_.emplace(page.title, token_weights(page.tokens, kb_idf_));
  });
}

DistantLabeler::Outcome DistantLabeler::label_mention(
    const Mention& mention) const {
  const auto ait = article_weights_.find(mention.doc_id);
  if (ait == article_weights_.end())
    throw DataError("label: mention '" + mention.mention_id +
                    "' references unknown doc_id '" + mention.doc_id + "'");
  Outcome out;
  const std::vector<std::string> candidates =
      candidate_set(mention.canonical, kb_);
  out.candidate_count = candidates.size();
  out.selected = select_entity(
      candidates, ait->second,
      [this](const std::string& title) -> const WeightedDoc* {
        const auto it = page_weights_.find(title);
        return it == page_weights_.end() ? nullptr : &it->second;
      },
      params_);
  return out;
}

namespace {

LabelResult reduce_outcomes(const std::vector<Mention>& mentions,
                            const std::vector<DistantLabeler::Outcome>& outs) {
  LabelResult result;
  LabelStats& stats = result.stats;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const DistantLabeler::Outcome& out = outs[i];
    if (out.candidate_count == 0)
      ++stats.zero_candidates;
    else if (out.candidate_count == 1)
      ++stats.one_candidate;
    else
      ++stats.multiple_candidates;
    if (out.selected) {
      ++stats.accepted;
      result.labels.assign(mentions[i].mention_id, *out.selected);
    } else if (out.candidate_count > 0) {
      ++stats.rejected;
    }
  }
  std::map<std::string, std::int64_t> histogram;
  for (const char* bucket : kBuckets) histogram[bucket] = 0;
  for (const auto& [entity, members] : result.labels.entities())
    ++histogram[size_bucket(static_cast<std::int64_t>(members.size()))];
  for (const char* bucket : kBuckets)
    stats.entity_sizes.emplace_back(bucket, histogram[bucket]);
  return result;
}

}  // namespace

LabelResult DistantLabeler::label_all_serial(
    const std::vector<Mention>& mentions) const {
  std::vector<Outcome> outs(mentions.size());
  for (std::size_t i = 0; i < mentions.size(); ++i)
    outs[i] = label_mention(mentions[i]);
  return reduce_outcomes(mentions, outs);
}

LabelResult DistantLabeler::label_all(const std::vector<Mention>& mentions,
                                      [[maybe_unused]] int threads) const {
  std::vector<Outcome> outs(mentions.size());
  std::exception_ptr failure;
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(mentions.size());
       ++i) {
    try {
      outs[static_cast<std::size_t>(i)] =
          label_mention(mentions[static_cast<std::size_t>(i)]);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(xdoc_label_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return reduce_outcomes(mentions, outs);
}

LabelResult distant_label_corpus(const std::vector<Document>& docs,
                                 const std::vector<Mention>& mentions,
                                 const KbSnapshot& kb, const RankerParams& p,
                                 int threads) {
  const DistantLabeler labeler(kb, docs, p);
  return labeler.label_all(mentions, threads);
}

}  // namespace xdoc
