// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <span>
#include <string>
#include <vector>

#include "xdoc/corpus.hpp"

namespace xdoc {

// Hand-tuned distance weights for within-document agglomeration. A feature
// that fires adds its weight; the pair distance is
//   max(0, base + sum of fired weights)
// and two clusters merge while their distance stays below merge_threshold.
// Negative weights are string-match evidence, gender_conflict is a veto.
struct WdFeatureWeights {
  double exact_match = 0.0;
  double first_name_match = -1.0;
  double last_name_match = -1.0;
  double token_subset = -1.0;
  double gender_conflict = 100.0;
  double base = 2.0;
  double merge_threshold = 1.0;
};

// Throws UsageError unless a gender-conflicted pair is unmergeable no matter
// which other features fire.
void validate_wd_weights(const WdFeatureWeights& w);

// Reads a key=value file with the WdFeatureWeights field names
// (exact_match, first_name_match, last_name_match, token_subset,
// gender_conflict, base, merge_threshold). Missing keys keep defaults.
WdFeatureWeights load_wd_weights(const std::string& path);

// Symmetric non-negative distance between two sub-mention clusters of the
// same document. Throws UsageError on empty clusters or mixed documents.
double pair_distance(const std::vector<SubMention>& cluster_a,
                     const std::vector<SubMention>& cluster_b,
                     const WdFeatureWeights& w);

// Greedy agglomerative clustering over the document's person spans,
// producing one Mention per surviving cluster. Deterministic: the closest
// pair merges first, ties resolved by the smallest (i, j) span-index pair.
// Output mention ids are "<doc_id>#m<k>" with k in order of first span.
std::vector<Mention> within_doc_coref(const Document& doc,
                                      const WdFeatureWeights& w,
                                      std::size_t window);

// Whole-corpus variants. The parallel kernel processes documents with
// OpenMP; the serial one is the reference implementation and must produce
// identical output.
std::vector<Mention> within_doc_coref_all_serial(std::span<const Document> docs,
                                                 const WdFeatureWeights& w,
                                                 std::size_t window);
std::vector<Mention> within_doc_coref_all(std::span<const Document> docs,
                                          const WdFeatureWeights& w,
                                          std::size_t window, int threads);

}  // namespace xdoc
