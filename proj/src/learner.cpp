// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/learner.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>

#include "xdoc/errors.hpp"

namespace xdoc {

double objective(const Clustering& y, const Clustering& gold) {
  return pairwise_prf(y, gold).f1;
}

namespace {

std::int64_t pairs_of(std::int64_t n) { return n * (n - 1) / 2; }

int sign_of(__int128 v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

}  // namespace

ObjectiveTracker::ObjectiveTracker(const MentionTable& table,
                                   const CorefState& state,
                                   const Clustering& gold) {
  if (state.mention_count() != table.size())
    throw UsageError("ObjectiveTracker: state does not cover the table");
  gold_of_.resize(table.size());
  std::unordered_map<std::string, std::int32_t> slot_of;
  std::unordered_map<std::int32_t, std::int64_t> gold_sizes;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string* entity = gold.entity_of(table.row(i).mention_id);
    if (entity == nullptr)
      throw UsageError("ObjectiveTracker: gold misses mention '" +
                       table.row(i).mention_id + "'");
    const auto [it, inserted] =
        slot_of.emplace(*entity, static_cast<std::int32_t>(slot_of.size()));
    (void)inserted;
    gold_of_[i] = it->second;
    ++gold_sizes[it->second];
  }
  for (const auto& [slot, size] : gold_sizes) gold_pairs_ += pairs_of(size);
  for (const int e : state.active_entities()) {
    const std::vector<std::size_t>& members = state.members(e);
    predicted_pairs_ += pairs_of(static_cast<std::int64_t>(members.size()));
    std::unordered_map<std::int32_t, std::int64_t> cell;
    for (const std::size_t m : members) ++cell[gold_of_[m]];
    for (const auto& [slot, n] : cell) true_positives_ += pairs_of(n);
  }
}

ObjectiveTracker::Peek ObjectiveTracker::peek_move(const CorefState& state,
                                                   std::size_t m,
                                                   int dst) const {
  const int src = state.entity_of(m);
  const std::vector<std::size_t>& src_members = state.members(src);
  std::int64_t same_src = 0;
  for (const std::size_t u : src_members)
    if (u != m && gold_of_[u] == gold_of_[m]) ++same_src;
  std::int64_t dst_size = 0;
  std::int64_t same_dst = 0;
  if (dst != CorefState::kNewEntity) {
    const std::vector<std::size_t>& dst_members = state.members(dst);
    dst_size = static_cast<std::int64_t>(dst_members.size());
    for (const std::size_t v : dst_members)
      if (gold_of_[v] == gold_of_[m]) ++same_dst;
  }
  Peek peek;
  peek.true_positives = true_positives_ - same_src + same_dst;
  peek.predicted_pairs = predicted_pairs_ -
                         (static_cast<std::int64_t>(src_members.size()) - 1) +
                         dst_size;
  return peek;
}

int ObjectiveTracker::delta_sign(const Peek& peek) const {
  // F1 = 2tp / (pred + gold) when the denominator is positive, else 1.
  const std::int64_t before_den = predicted_pairs_ + gold_pairs_;
  const std::int64_t after_den = peek.predicted_pairs + gold_pairs_;
  if (after_den == 0 && before_den == 0) return 0;
  if (after_den == 0) return sign_of(static_cast<__int128>(before_den) -
                                     2 * static_cast<__int128>(
                                             true_positives_));
  if (before_den == 0)
    return sign_of(2 * static_cast<__int128>(peek.true_positives) -
                   static_cast<__int128>(after_den));
  return sign_of(static_cast<__int128>(peek.true_positives) * before_den -
                 static_cast<__int128>(true_positives_) * after_den);
}

void ObjectiveTracker::apply(const Peek& peek) {
  true_positives_ = peek.true_positives;
  predicted_pairs_ = peek.predicted_pairs;
}

double ObjectiveTracker::f1() const {
  const std::int64_t den = predicted_pairs_ + gold_pairs_;
  if (den == 0) return 1.0;
  return 2.0 * static_cast<double>(true_positives_) /
         static_cast<double>(den);
}

namespace {

void axpy(WeightVector& w, double a, const FeatureDelta& d) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(kPairFeatureCount);
       ++i) {
    w.plus[i] += a * d.plus[i];
    w.minus[i] += a * d.minus[i];
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(kEntityFeatureCount);
       ++i)
    w.entity[i] += a * d.entity[i];
}

void accumulate(WeightVector& sum, const WeightVector& w) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(kPairFeatureCount);
       ++i) {
    sum.plus[i] += w.plus[i];
    sum.minus[i] += w.minus[i];
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(kEntityFeatureCount);
       ++i)
    sum.entity[i] += w.entity[i];
}

}  // namespace

SampleRankOutcome samplerank_step(CorefState& state, WeightVector& w,
                                  const std::vector<Canopy>& canopies,
                                  ObjectiveTracker& tracker,
                                  PairFeatureCache& cache, double eta,
                                  Rng& rng) {
  if (eta <= 0.0) throw UsageError("samplerank: learning rate must be > 0");
  SampleRankOutcome out;
  out.move = propose(state, canopies, rng);
  if (out.move.noop) return out;

  const FeatureDelta fd =
      move_feature_delta(state, out.move.mention, out.move.destination, cache);
  const ObjectiveTracker::Peek peek =
      tracker.peek_move(state, out.move.mention, out.move.destination);
  const int obj_sign = tracker.delta_sign(peek);
  const double model_delta = fd.dot(w);

  const bool disagree =
      obj_sign != 0 && ((obj_sign > 0 && model_delta <= 0.0) ||
                        (obj_sign < 0 && model_delta >= 0.0));
  if (disagree) {
    axpy(w, eta * obj_sign, fd);
    out.updated = true;
  }

  const double post_delta = out.updated ? fd.dot(w) : model_delta;
  out.accepted = post_delta >= 0.0 || rng.uniform() < std::exp(post_delta);
  if (out.accepted) {
    state.apply_move(out.move.mention, out.move.destination);
    tracker.apply(peek);
  }
  return out;
}

TrainResult train(const MentionTable& table, const Clustering& gold,
                  const std::vector<Canopy>& canopies, const TrainConfig& cfg,
                  std::ostream* log, const WeightVector* init) {
  if (cfg.iterations < 0 || cfg.steps_per_iteration < 0)
    throw UsageError("train: iterations and steps must be >= 0");
  TrainResult result;
  WeightVector w = init != nullptr ? *init : WeightVector{};
  CorefState state = CorefState::singletons(table.size());
  PairFeatureCache cache(table);
  ObjectiveTracker tracker(table, state, gold);
  Rng rng(cfg.seed);
  WeightVector sum{};

  for (int iteration = 1; iteration <= cfg.iterations; ++iteration) {
    std::int64_t iteration_updates = 0;
    if (table.size() > 0) {
      for (std::int64_t step = 0; step < cfg.steps_per_iteration; ++step) {
        const SampleRankOutcome out = samplerank_step(
            state, w, canopies, tracker, cache, cfg.learning_rate, rng);
        if (out.updated) {
          ++iteration_updates;
          accumulate(sum, w);
        }
      }
    }
    result.updates += iteration_updates;
    if (log != nullptr) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%d\t%lld\t%.6f", iteration,
                    static_cast<long long>(iteration_updates), tracker.f1());
      *log << buf << '\n';
    }
  }

  result.final_weights = w;
  result.train_f1 = tracker.f1();
  if (result.updates == 0) {
    result.averaged = w;
  } else {
    result.averaged = sum;
    const double inv = 1.0 / static_cast<double>(result.updates);
    for (auto& v : result.averaged.plus) v *= inv;
    for (auto& v : result.averaged.minus) v *= inv;
    for (auto& v : result.averaged.entity) v *= inv;
  }
  return result;
}

}  // namespace xdoc
