// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "xdoc/coref_model.hpp"
#include "xdoc/rng.hpp"

namespace xdoc {

// An overlapping grouping of mentions: a set of mention sets. Mentions may
// appear in many sets; transitivity is not enforced.
struct Canopy {
  std::string name;
  std::vector<std::vector<std::size_t>> sets;  // each sorted ascending
};

// Canopy 1 groups by lowercased canonical string, canopy 2 by extracted
// last name. Sets are ordered by their grouping key, so the layout is
// deterministic.
std::vector<Canopy> build_canopies(const MentionTable& table);

struct Move {
  std::size_t mention = 0;
  int destination = CorefState::kNewEntity;
  bool noop = false;
};

// One proposal draw. With probability 0.8: uniform canopy, uniform set,
// uniform m_a and m_b from it, moving m_a to m_b's entity. Otherwise:
// uniform mention, destination uniform over existing entities plus one
// fresh. Proposals landing on the current entity come back as no-ops.
// Throws UsageError when the state has no mentions.
Move propose(const CorefState& state, const std::vector<Canopy>& canopies,
             Rng& rng);

struct MhOutcome {
  Move move;
  bool accepted = false;
  double delta = 0.0;
};

// Metropolis-Hastings step: propose, accept with min(1, exp(delta)), apply
// on acceptance. No-ops are counted as rejected and consume no extra draws.
MhOutcome mh_step(CorefState& state, const WeightVector& w,
                  const std::vector<Canopy>& canopies, PairFeatureCache& cache,
                  Rng& rng);

struct InferOptions {
  std::int64_t steps = 1'000'000;
  std::uint64_t seed = 1;
  std::int64_t report_every = 10'000;
  std::ostream* trace = nullptr;  // step<TAB>score<TAB>acceptance_rate rows
};

struct InferResult {
  Clustering clustering;
  double best_score = 0.0;
  std::int64_t accepted = 0;
  std::int64_t steps = 0;
};

// MAP inference: starts from all singletons, runs opt.steps MH steps and
// returns the best-scoring state visited. The returned score is an exact
// rescore of that state, not the incrementally tracked value.
InferResult infer(const MentionTable& table, const WeightVector& w,
                  const InferOptions& opt);

// Independent chains seeded opt.seed, opt.seed + 1, ... Chains run in
// parallel; the best score wins, ties going to the lowest chain index. Only
// chain 0 writes trace rows.
InferResult infer_chains(const MentionTable& table, const WeightVector& w,
                         const InferOptions& opt, int chains, int threads = 0);

}  // namespace xdoc
