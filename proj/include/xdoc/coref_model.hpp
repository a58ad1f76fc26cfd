// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xdoc/corpus.hpp"

namespace xdoc {

// Pair features: canonical (mis)match, last-name (mis)match, and one of ten
// quantized cosine bins for each of the name and context bags. Exactly four
// indicators fire per pair.
inline constexpr int kPairFeatureCount = 24;
// Entity features: thresholded cluster sizes =1, >1, >2, >4.
inline constexpr int kEntityFeatureCount = 4;

std::string_view pair_feature_name(int id);
std::string_view entity_feature_name(int id);
int pair_feature_id(std::string_view name);    // -1 when unknown
int entity_feature_id(std::string_view name);  // -1 when unknown

struct PairFeatures {
  bool canonical_match = false;
  bool last_name_match = false;
  int name_cos_bin = 0;
  int ctx_cos_bin = 0;

  // Ids of the four active indicators.
  std::array<int, 4> active() const;
};

struct WeightVector {
  std::array<double, kPairFeatureCount> plus{};
  std::array<double, kPairFeatureCount> minus{};
  std::array<double, kEntityFeatureCount> entity{};

  // theta+ . phi  (same_entity) or theta- . phi  (cross-entity).
  double pair_score(const PairFeatures& f, bool same_entity) const;
  // theta_e . entity_features(size).
  double entity_score(std::size_t size) const;

  bool operator==(const WeightVector&) const = default;
};

// weights.tsv rows: factor_class<TAB>feature_name<TAB>value with
// factor_class one of plus, minus, entity. Unlisted features are zero;
// unknown names or classes raise DataError.
void write_weights(const std::string& path, const WeightVector& w);
WeightVector read_weights(const std::string& path);

// Indicators by feature id for a cluster of the given size.
std::array<double, kEntityFeatureCount> entity_features(std::size_t size);

// Mentions flattened for scoring: interned bags, case-folded canonicals,
// extracted last names. Immutable and index-addressed.
class MentionTable {
 public:
  explicit MentionTable(const std::vector<Mention>& mentions);

  struct Bag {
    std::vector<std::pair<std::int32_t, double>> entries;  // sorted by id
    double norm = 0.0;
  };

  struct Row {
    std::string mention_id;
    std::string canonical_lower;
    std::string last_name;
    Bag name_bag;
    Bag context_bag;
  };

  std::size_t size() const { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t index_of(const std::string& mention_id) const;

 private:
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Symmetric in i and j. Cosine of an empty bag is 0; bins are
// min(9, floor(10 * cos)).
PairFeatures pair_features(const MentionTable& table, std::size_t i,
                           std::size_t j);

// Memo of pair features keyed by unordered index pair. One cache per chain;
// not thread-safe.
class PairFeatureCache {
 public:
  explicit PairFeatureCache(const MentionTable& table) : table_(table) {}
  const PairFeatures& get(std::size_t i, std::size_t j);
  std::size_t size() const { return memo_.size(); }

 private:
  const MentionTable& table_;
  std::unordered_map<std::uint64_t, PairFeatures> memo_;
};

// A clustering over table indices with O(1) membership updates. Entity ids
// are dense int slots, recycled through a free list.
class CorefState {
 public:
  static constexpr int kNewEntity = -1;

  static CorefState singletons(std::size_t n);
  static CorefState from_clustering(const MentionTable& table,
                                    const Clustering& clustering);
  // Entity ids in the output are the smallest member mention_id.
  Clustering to_clustering(const MentionTable& table) const;

  std::size_t mention_count() const { return entity_of_.size(); }
  int entity_of(std::size_t m) const { return entity_of_[m]; }
  const std::vector<std::size_t>& members(int e) const;
  const std::vector<int>& active_entities() const { return active_; }

  // Moves mention m to dst (kNewEntity allocates a fresh entity); returns
  // the destination slot. Emptied source entities are recycled. Throws
  // UsageError when dst is the current entity or ids are out of range.
  int apply_move(std::size_t m, int dst);

  bool check_consistent() const;

 private:
  std::vector<int> entity_of_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<int> active_;
  std::vector<std::size_t> active_pos_;
  std::vector<int> free_;
};

// Aggregate feature-count change of a move; dot with a WeightVector gives
// the score delta, and it is the update direction for learning.
struct FeatureDelta {
  std::array<double, kPairFeatureCount> plus{};
  std::array<double, kPairFeatureCount> minus{};
  std::array<double, kEntityFeatureCount> entity{};

  double dot(const WeightVector& w) const;
  double norm2() const;
};

// Feature-count change of moving mention m to dst.
FeatureDelta move_feature_delta(const CorefState& state, std::size_t m,
                                int dst, PairFeatureCache& cache);

// Score change of moving mention m to dst, computed from the flipped pair
// factors and the two touched entity factors only.
double move_delta(const CorefState& state, std::size_t m, int dst,
                  const WeightVector& w, PairFeatureCache& cache);

// Full unnormalized log-density: entity factors plus theta+ factors inside
// entities and theta- factors across. Quadratic; meant for small instances
// and as the delta oracle.
double model_log_score(const MentionTable& table, const CorefState& state,
                       const WeightVector& w);
double model_log_score(const MentionTable& table, const Clustering& clustering,
                       const WeightVector& w);

}  // namespace xdoc
