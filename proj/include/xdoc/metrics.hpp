// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstdint>
#include <vector>

#include "xdoc/corpus.hpp"

namespace xdoc {

struct PairwiseScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t true_positives = 0;
  std::int64_t predicted_pairs = 0;
  std::int64_t gold_pairs = 0;
};

// Precision, recall and F1 over unordered coreferent mention pairs, counted
// through per-cluster intersections rather than pair enumeration.
// Conventions: precision 1 with no predicted pairs, recall 1 with no gold
// pairs, f1 0 when precision + recall is 0. Throws UsageError when the two
// clusterings cover different mention sets.
PairwiseScores pairwise_prf(const Clustering& pred, const Clustering& gold);

// One entity per distinct lowercased canonical string.
Clustering baseline_unique_name(const std::vector<Mention>& mentions);

// One entity per extracted last name.
Clustering baseline_last_name(const std::vector<Mention>& mentions);

}  // namespace xdoc
