// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "test_util.hpp"
#include "xdoc/coref_model.hpp"
#include "xdoc/errors.hpp"
#include "xdoc/rng.hpp"

using namespace xdoc;

namespace {

Mention bag_mention(const std::string& id, const std::string& canonical,
                    std::vector<std::pair<std::string, std::int64_t>> name,
                    std::vector<std::pair<std::string, std::int64_t>> ctx = {}) {
  Mention m;
  m.mention_id = id;
  m.doc_id = "d-" + id;
  m.canonical = canonical;
  SubMention sm;
  sm.doc_id = m.doc_id;
  sm.span = {0, cp_length(canonical)};
  sm.surface = canonical;
  m.sub_mentions = {sm};
  for (const auto& [t, n] : name) m.name_bag.add(t, n);
  for (const auto& [t, n] : ctx) m.context_bag.add(t, n);
  return m;
}

bool same_features(const PairFeatures& a, const PairFeatures& b) {
  return a.canonical_match == b.canonical_match &&
         a.last_name_match == b.last_name_match &&
         a.name_cos_bin == b.name_cos_bin && a.ctx_cos_bin == b.ctx_cos_bin;
}

MentionTable three_mention_table() {
  std::vector<Mention> ms;
  ms.push_back(bag_mention("m1", "john smith", {{"john", 1}, {"smith", 1}}));
  ms.push_back(bag_mention("m2", "john smith", {{"john", 1}, {"smith", 1}}));
  ms.push_back(bag_mention("m3", "jane doe", {{"jane", 1}, {"doe", 1}}));
  return MentionTable(ms);
}

WeightVector random_weights(Rng& rng) {
  WeightVector w;
  for (auto& v : w.plus) v = 2.0 * rng.uniform() - 1.0;
  for (auto& v : w.minus) v = 2.0 * rng.uniform() - 1.0;
  for (auto& v : w.entity) v = 2.0 * rng.uniform() - 1.0;
  return w;
}

// Random state over n mentions produced by random valid moves.
CorefState random_state(std::size_t n, Rng& rng, int churn = 60) {
  CorefState state = CorefState::singletons(n);
  for (int step = 0; step < churn; ++step) {
    const std::size_t m = rng.uniform_index(n);
    const auto& active = state.active_entities();
    const int cur = state.entity_of(m);
    std::vector<int> options;
    for (const int e : active)
      if (e != cur) options.push_back(e);
    options.push_back(CorefState::kNewEntity);
    state.apply_move(m, options[rng.uniform_index(options.size())]);
  }
  return state;
}

}  // namespace

TEST_CASE("feature names and ids round-trip") {
  for (int id = 0; id < kPairFeatureCount; ++id) {
    const auto name = pair_feature_name(id);
    CHECK(pair_feature_id(name) == id);
  }
  for (int id = 0; id < kEntityFeatureCount; ++id) {
    const auto name = entity_feature_name(id);
    CHECK(entity_feature_id(name) == id);
  }
  CHECK(pair_feature_id("no_such_feature") == -1);
  CHECK(entity_feature_id("no_such_feature") == -1);
  CHECK(pair_feature_name(0) == "canonical_match");
  CHECK(pair_feature_name(1) == "canonical_mismatch");
  CHECK(pair_feature_name(2) == "last_name_match");
  CHECK(pair_feature_name(3) == "last_name_mismatch");
}

TEST_CASE("pair features fold case for canonical matches") {
  std::vector<Mention> ms;
  ms.push_back(bag_mention("m1", "John Smith", {{"john", 1}, {"smith", 1}}));
  ms.push_back(bag_mention("m2", "john smith", {{"john", 1}, {"smith", 1}}));
  ms.push_back(
      bag_mention("m3", "John F. Smith", {{"john", 1}, {"f", 1}, {"smith", 1}}));
  const MentionTable table(ms);

  const PairFeatures f01 = pair_features(table, 0, 1);
  CHECK(f01.canonical_match);
  CHECK(f01.last_name_match);
  CHECK(f01.name_cos_bin == 9);  // identical bags

  const PairFeatures f02 = pair_features(table, 0, 2);
  CHECK_FALSE(f02.canonical_match);
  CHECK(f02.last_name_match);
}

TEST_CASE("pair features quantize cosine into ten bins") {
  std::vector<Mention> ms;
  ms.push_back(bag_mention("m1", "a b", {{"a", 1}, {"b", 1}}));
  ms.push_back(bag_mention("m2", "a", {{"a", 1}}));
  ms.push_back(bag_mention("m3", "c", {{"c", 1}}));
  const MentionTable table(ms);

  // cos = 1/sqrt(2) ~ 0.7071 -> bin 7.
  CHECK(pair_features(table, 0, 1).name_cos_bin == 7);
  // Disjoint bags -> bin 0; empty context bags -> cos 0 -> bin 0.
  CHECK(pair_features(table, 0, 2).name_cos_bin == 0);
  CHECK(pair_features(table, 0, 1).ctx_cos_bin == 0);
}

TEST_CASE("pair features are symmetric") {
  const MentionTable table = three_mention_table();
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = i + 1; j < table.size(); ++j)
      CHECK(same_features(pair_features(table, i, j),
                          pair_features(table, j, i)));
}

TEST_CASE("active pair feature ids cover all four groups") {
  const MentionTable table = three_mention_table();
  const PairFeatures f = pair_features(table, 0, 1);
  const auto ids = f.active();
  CHECK(ids[0] == pair_feature_id("canonical_match"));
  CHECK(ids[1] == pair_feature_id("last_name_match"));
  CHECK(ids[2] == pair_feature_id("name_cosine_bin_9"));
  CHECK(ids[3] == pair_feature_id("context_cosine_bin_0"));

  const PairFeatures g = pair_features(table, 0, 2);
  const auto gids = g.active();
  CHECK(gids[0] == pair_feature_id("canonical_mismatch"));
  CHECK(gids[1] == pair_feature_id("last_name_mismatch"));
}

TEST_CASE("entity features follow the size thresholds") {
  CHECK(entity_features(1) == std::array<double, 4>{1, 0, 0, 0});
  CHECK(entity_features(2) == std::array<double, 4>{0, 1, 0, 0});
  CHECK(entity_features(3) == std::array<double, 4>{0, 1, 1, 0});
  CHECK(entity_features(5) == std::array<double, 4>{0, 1, 1, 1});
}

TEST_CASE("entity feature implications hold across sizes") {
  for (std::size_t size = 1; size <= 1000000;
       size = (size < 100 ? size + 1 : size * 10)) {
    const auto f = entity_features(size);
    if (f[3] != 0.0) CHECK(f[2] != 0.0);
    if (f[2] != 0.0) CHECK(f[1] != 0.0);
    if (f[0] != 0.0) {
      CHECK(size == 1);
      CHECK(f[1] == 0.0);
      CHECK(f[2] == 0.0);
      CHECK(f[3] == 0.0);
    }
  }
}

TEST_CASE("model_log_score evaluates single factors") {
  const MentionTable table = three_mention_table();

  Clustering merged;
  merged.assign("m1", "e1");
  merged.assign("m2", "e1");
  Clustering split;
  split.assign("m1", "e1");
  split.assign("m2", "e2");

  // Restrict the table to the two john smith mentions.
  std::vector<Mention> two;
  two.push_back(bag_mention("m1", "john smith", {{"john", 1}, {"smith", 1}}));
  two.push_back(bag_mention("m2", "john smith", {{"john", 1}, {"smith", 1}}));
  const MentionTable pair_table(two);

  WeightVector zero;
  CHECK(model_log_score(pair_table, merged, zero) == 0.0);
  CHECK(model_log_score(pair_table, split, zero) == 0.0);

  WeightVector plus2;
  plus2.plus[pair_feature_id("canonical_match")] = 2.0;
  CHECK(model_log_score(pair_table, merged, plus2) == doctest::Approx(2.0));

  WeightVector minus1;
  minus1.minus[pair_feature_id("canonical_match")] = -1.0;
  CHECK(model_log_score(pair_table, split, minus1) == doctest::Approx(-1.0));

  // Incomplete clustering is rejected.
  Clustering partial;
  partial.assign("m1", "e1");
  CHECK_THROWS_AS(model_log_score(pair_table, partial, zero), UsageError);
}

TEST_CASE("move_delta of relabeling a singleton is zero") {
  const MentionTable table = three_mention_table();
  CorefState state = CorefState::singletons(table.size());
  PairFeatureCache cache(table);
  Rng rng(3);
  const WeightVector w = random_weights(rng);
  CHECK(move_delta(state, 0, CorefState::kNewEntity, w, cache) ==
        doctest::Approx(0.0));
}

TEST_CASE("move_delta reproduces the three-mention fixture") {
  const MentionTable table = three_mention_table();
  WeightVector w;
  w.plus[pair_feature_id("canonical_match")] = 2.0;
  w.minus[pair_feature_id("canonical_match")] = -1.0;

  CorefState state = CorefState::singletons(3);
  PairFeatureCache cache(table);
  // Move m2 (index 1) into m1's entity (slot 0): delta = 2 - (-1) = 3.
  CHECK(move_delta(state, 1, state.entity_of(0), w, cache) ==
        doctest::Approx(3.0));
}

TEST_CASE("a move and its inverse cancel") {
  const MentionTable table = three_mention_table();
  Rng rng(11);
  WeightVector w = random_weights(rng);
  CorefState state = CorefState::singletons(3);
  PairFeatureCache cache(table);

  const int dst = state.entity_of(0);
  const double there = move_delta(state, 1, dst, w, cache);
  state.apply_move(1, dst);
  // Mention 1 came from a singleton entity, so the inverse move is a
  // fresh-entity move; the score depends only on the partition.
  const double back = move_delta(state, 1, CorefState::kNewEntity, w, cache);
  CHECK(there + back == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("move_delta matches full rescoring on random states") {
  Rng rng(29);
  const std::vector<std::string> names = {"ann hill", "ann ross", "bo hill",
                                          "cy vale", "bo vale"};
  std::vector<Mention> ms;
  for (int i = 0; i < 30; ++i) {
    const auto& name = names[rng.uniform_index(names.size())];
    std::vector<std::pair<std::string, std::int64_t>> bag, ctx;
    bag.push_back({"t" + std::to_string(rng.uniform_index(6)),
                   1 + static_cast<std::int64_t>(rng.uniform_index(3))});
    if (rng.bernoulli(0.7))
      bag.push_back({"u" + std::to_string(rng.uniform_index(6)), 1});
    if (rng.bernoulli(0.5))
      ctx.push_back({"c" + std::to_string(rng.uniform_index(4)), 1});
    ms.push_back(bag_mention("m" + std::to_string(i), name, bag, ctx));
  }
  const MentionTable table(ms);
  PairFeatureCache cache(table);

  for (int trial = 0; trial < 300; ++trial) {
    const WeightVector w = random_weights(rng);
    CorefState state = random_state(table.size(), rng);
    const std::size_t m = rng.uniform_index(table.size());
    std::vector<int> options;
    for (const int e : state.active_entities())
      if (e != state.entity_of(m)) options.push_back(e);
    options.push_back(CorefState::kNewEntity);
    const int dst = options[rng.uniform_index(options.size())];

    const double before = model_log_score(table, state, w);
    const double delta = move_delta(state, m, dst, w, cache);
    const FeatureDelta fd = move_feature_delta(state, m, dst, cache);
    CHECK(fd.dot(w) == doctest::Approx(delta).epsilon(1e-9));
    CHECK(fd.norm2() >= 0.0);
    state.apply_move(m, dst);
    const double after = model_log_score(table, state, w);
    CHECK(delta == doctest::Approx(after - before).epsilon(1e-6));
    CHECK(state.check_consistent());
  }
}

TEST_CASE("weights round-trip through tsv exactly") {
  testutil::TempDir tmp("weights");
  Rng rng(41);
  const WeightVector w = random_weights(rng);
  const auto path = tmp.path("weights.tsv");
  write_weights(path, w);
  const WeightVector back = read_weights(path);
  CHECK(back == w);

  // Unlisted rows stay zero.
  testutil::write_file(path, "plus\tcanonical_match\t1.5\n");
  const WeightVector sparse = read_weights(path);
  CHECK(sparse.plus[pair_feature_id("canonical_match")] == 1.5);
  CHECK(sparse.plus[pair_feature_id("last_name_match")] == 0.0);
  CHECK(sparse.minus[pair_feature_id("canonical_match")] == 0.0);
}

TEST_CASE("weights reader rejects malformed tables") {
  testutil::TempDir tmp("weights-bad");
  const auto path = tmp.path("weights.tsv");

  testutil::write_file(path, "plus\tno_such_feature\t1.0\n");
  CHECK_THROWS_AS(read_weights(path), DataError);

  testutil::write_file(path, "sideways\tcanonical_match\t1.0\n");
  CHECK_THROWS_AS(read_weights(path), DataError);

  testutil::write_file(path, "plus\tcanonical_match\tnot-a-number\n");
  CHECK_THROWS_AS(read_weights(path), DataError);

  testutil::write_file(path,
                       "plus\tcanonical_match\t1.0\n"
                       "plus\tcanonical_match\t2.0\n");
  CHECK_THROWS_WITH_AS(read_weights(path), doctest::Contains("duplicate"),
                       DataError);

  testutil::write_file(path, "entity\tsize_eq_1\t0.25\n");
  CHECK(read_weights(path).entity[entity_feature_id("size_eq_1")] == 0.25);
}

TEST_CASE("coref state conversions preserve the partition") {
  const MentionTable table = three_mention_table();

  Clustering c;
  c.assign("m1", "anything");
  c.assign("m2", "anything");
  c.assign("m3", "other");
  const CorefState state = CorefState::from_clustering(table, c);
  CHECK(state.mention_count() == 3);
  CHECK(state.entity_of(0) == state.entity_of(1));
  CHECK(state.entity_of(0) != state.entity_of(2));

  // Round trip renames entities to the smallest member mention id.
  const Clustering back = state.to_clustering(table);
  REQUIRE(back.entity_of("m1") != nullptr);
  CHECK(*back.entity_of("m1") == "m1");
  CHECK(*back.entity_of("m2") == "m1");
  CHECK(*back.entity_of("m3") == "m3");
}

TEST_CASE("coref state rejects invalid moves") {
  CorefState state = CorefState::singletons(3);
  CHECK_THROWS_AS(state.apply_move(0, state.entity_of(0)), UsageError);
  CHECK_THROWS_AS(state.apply_move(9, CorefState::kNewEntity), UsageError);
  CHECK_THROWS_AS(state.apply_move(0, 999), UsageError);
}

TEST_CASE("pair feature cache returns the uncached values") {
  const MentionTable table = three_mention_table();
  PairFeatureCache cache(table);
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < table.size(); ++j) {
      if (i == j) continue;
      CHECK(same_features(cache.get(i, j), pair_features(table, i, j)));
    }
  // Unordered pairs are memoized once.
  CHECK(cache.size() == 3);
}

TEST_CASE("mention table rejects duplicates and unknown lookups") {
  std::vector<Mention> ms;
  ms.push_back(bag_mention("m1", "a b", {{"a", 1}}));
  ms.push_back(bag_mention("m1", "a b", {{"a", 1}}));
  CHECK_THROWS_AS(MentionTable{ms}, UsageError);

  const MentionTable table = three_mention_table();
  CHECK(table.index_of("m3") == 2);
  CHECK_THROWS_AS(table.index_of("absent"), UsageError);
}
