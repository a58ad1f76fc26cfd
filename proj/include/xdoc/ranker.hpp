// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xdoc/corpus.hpp"
#include "xdoc/kb.hpp"

namespace xdoc {

struct RankerParams {
  double alpha = 1e-4;
  double lambda = 1.0 - 1e-4;
  double log_beta = -18.0;
};

// Throws UsageError unless 0 < alpha < 1 and 0 < lambda < 1.
void validate_ranker_params(const RankerParams& p);

// Materialized idf table. Keeping the values explicit (rather than computing
// from CorpusStats on the fly) lets callers rescale them wholesale, which
// must not change any ranking.
struct IdfWeights {
  std::map<std::string, double> values;
  double fallback = 0.0;  // idf of unseen tokens

  double of(const std::string& token) const {
    const auto it = values.find(token);
    return it == values.end() ? fallback : it->second;
  }
};

IdfWeights make_idf(const CorpusStats& stats);

// Normalized token weights of one document or page: weight(t) sums to 1.
struct WeightedDoc {
  std::vector<std::pair<std::string, double>> weights;  // sorted by token

  double weight_of(const std::string& token) const;
  bool empty() const { return weights.empty(); }
};

// weight(t) = n_t * idf(t) / sum_u n_u * idf(u); count-proportional when the
// normalizer vanishes. Throws UsageError on empty counts.
WeightedDoc token_weights(const TokenCounts& counts, const IdfWeights& idf);
WeightedDoc token_weights(const TokenCounts& counts, const CorpusStats& stats);

// sum_t w_c(t) * ln(lambda * w_a(t) + (1 - lambda) * alpha), the log of the
// smoothed multinomial likelihood of the candidate under the article model.
// Throws UsageError on an empty candidate.
double log_score(const WeightedDoc& candidate, const WeightedDoc& article,
                 const RankerParams& p);

// Highest-scoring candidate if its score clears p.log_beta, otherwise none.
// Ties break toward the lexicographically smallest title; candidates without
// weights (unknown or empty pages) are skipped.
std::optional<std::string> select_entity(
    const std::vector<std::string>& candidates, const WeightedDoc& article,
    const std::function<const WeightedDoc*(const std::string&)>& page_weights,
    const RankerParams& p);

struct LabelStats {
  std::int64_t zero_candidates = 0;
  std::int64_t one_candidate = 0;
  std::int64_t multiple_candidates = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;  // had candidates, none cleared the threshold
  // Entity-size buckets in display order: 1, 2-9, 10-99, 100-999, 1000-9999,
  // 10000+.
  std::vector<std::pair<std::string, std::int64_t>> entity_sizes;

  std::string to_json() const;
};

struct LabelResult {
  Clustering labels;  // mention_id -> selected page title; accepted only
  LabelStats stats;
};

// Precomputes weighted documents for every article and KB page, then labels
// mentions independently. Immutable after construction; label_mention is
// safe to call concurrently.
class DistantLabeler {
 public:
  DistantLabeler(const KbSnapshot& kb, const std::vector<Document>& docs,
                 RankerParams params);
  DistantLabeler(const KbSnapshot& kb, const std::vector<Document>& docs,
                 RankerParams params, IdfWeights article_idf,
                 IdfWeights kb_idf);

  struct Outcome {
    std::size_t candidate_count = 0;
    std::optional<std::string> selected;
  };

  // candidate_set on the canonical string, then select_entity against the
  // mention's article. Throws DataError on an unknown doc_id.
  Outcome label_mention(const Mention& mention) const;

  LabelResult label_all(const std::vector<Mention>& mentions,
                        int threads = 0) const;
  LabelResult label_all_serial(const std::vector<Mention>& mentions) const;

  const IdfWeights& article_idf() const { return article_idf_; }
  const IdfWeights& kb_idf() const { return kb_idf_; }

 private:
  void build(const std::vector<Document>& docs);

  const KbSnapshot& kb_;
  RankerParams params_;
  IdfWeights article_idf_;
  IdfWeights kb_idf_;
  std::unordered_map<std::string, WeightedDoc> article_weights_;  // by doc_id
  std::unordered_map<std::string, WeightedDoc> page_weights_;  // by title
};

// One-shot corpus labeling.
LabelResult distant_label_corpus(const std::vector<Document>& docs,
                                 const std::vector<Mention>& mentions,
                                 const KbSnapshot& kb, const RankerParams& p,
                                 int threads = 0);

}  // namespace xdoc
