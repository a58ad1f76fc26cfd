// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "xdoc/coref_model.hpp"
#include "xdoc/metrics.hpp"
#include "xdoc/rng.hpp"
#include "xdoc/sampler.hpp"

namespace xdoc {

struct TrainConfig {
  int iterations = 10;
  std::int64_t steps_per_iteration = 100'000;
  double learning_rate = 1.0;
  std::uint64_t seed = 1;
};

// Pairwise F1 of y against gold; the training objective.
double objective(const Clustering& y, const Clustering& gold);

// Incrementally tracked pairwise statistics of a CorefState against a fixed
// gold clustering. Supports exact, overflow-safe comparison of the objective
// before and after a candidate move.
class ObjectiveTracker {
 public:
  // Throws UsageError when gold does not cover the table's mentions.
  ObjectiveTracker(const MentionTable& table, const CorefState& state,
                   const Clustering& gold);

  struct Peek {
    std::int64_t true_positives = 0;
    std::int64_t predicted_pairs = 0;
  };

  Peek peek_move(const CorefState& state, std::size_t m, int dst) const;
  // Sign of objective(after) - objective(before), exact.
  int delta_sign(const Peek& peek) const;
  void apply(const Peek& peek);

  double f1() const;
  std::int64_t gold_pairs() const { return gold_pairs_; }

 private:
  std::vector<std::int32_t> gold_of_;
  std::int64_t true_positives_ = 0;
  std::int64_t predicted_pairs_ = 0;
  std::int64_t gold_pairs_ = 0;
};

struct SampleRankOutcome {
  Move move;
  bool updated = false;
  bool accepted = false;
};

// One SampleRank step: propose as in inference; when the model's ranking of
// the proposed pair disagrees with the objective's (or the model is
// indifferent while the objective is not), take a perceptron step toward the
// objectively better state; then accept or reject by the post-update model.
SampleRankOutcome samplerank_step(CorefState& state, WeightVector& w,
                                  const std::vector<Canopy>& canopies,
                                  ObjectiveTracker& tracker,
                                  PairFeatureCache& cache, double eta,
                                  Rng& rng);

struct TrainResult {
  WeightVector averaged;       // mean of the weights after each update
  WeightVector final_weights;  // weights when the chain stopped
  std::int64_t updates = 0;
  double train_f1 = 0.0;  // objective of the chain's final state
};

// SampleRank training from an all-singletons state, persisting across
// iterations. Weights start at zero unless init is given. The log stream,
// when set, receives `iteration<TAB>updates<TAB>train_pairwise_f1` rows.
TrainResult train(const MentionTable& table, const Clustering& gold,
                  const std::vector<Canopy>& canopies, const TrainConfig& cfg,
                  std::ostream* log = nullptr,
                  const WeightVector* init = nullptr);

}  // namespace xdoc
