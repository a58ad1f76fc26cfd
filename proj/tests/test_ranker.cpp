// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "xdoc/errors.hpp"
#include "xdoc/kb.hpp"
#include "xdoc/ranker.hpp"
#include "xdoc/rng.hpp"

using namespace xdoc;

namespace {

Mention mention_of(const std::string& id, const std::string& doc_id,
                   const std::string& canonical) {
  Mention m;
  m.mention_id = id;
  m.doc_id = doc_id;
  m.canonical = canonical;
  SubMention sm;
  sm.doc_id = doc_id;
  sm.span = {0, cp_length(canonical)};
  sm.surface = canonical;
  m.sub_mentions = {sm};
  return m;
}

Document doc_of(const std::string& id, const std::string& text) {
  Document d;
  d.doc_id = id;
  d.text = text;
  return d;
}

}  // namespace

TEST_CASE("ranker params validate their ranges") {
  CHECK_NOTHROW(validate_ranker_params(RankerParams{}));
  CHECK_THROWS_AS(validate_ranker_params(RankerParams{0.0, 0.5, -18}),
                  UsageError);
  CHECK_THROWS_AS(validate_ranker_params(RankerParams{1e-4, 1.0, -18}),
                  UsageError);
  const RankerParams p;
  CHECK(p.alpha == 1e-4);
  CHECK(p.lambda == 1.0 - 1e-4);
  CHECK(p.log_beta == -18.0);
}

TEST_CASE("token_weights mixes counts with idf") {
  TokenCounts counts;
  counts.add("obama", 2);
  counts.add("the", 2);
  IdfWeights idf;
  idf.values = {{"obama", 4.0}, {"the", 0.5}};
  const WeightedDoc w = token_weights(counts, idf);
  CHECK(w.weight_of("obama") == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(w.weight_of("the") == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(w.weight_of("absent") == 0.0);
}

TEST_CASE("token_weights normalizes a single token to one") {
  TokenCounts counts;
  counts.add("solo", 7);
  IdfWeights idf;
  idf.values = {{"solo", 2.5}};
  CHECK(token_weights(counts, idf).weight_of("solo") == doctest::Approx(1.0));
}

TEST_CASE("token_weights falls back to count proportions on zero idf") {
  TokenCounts counts;
  counts.add("a", 3);
  counts.add("b", 1);
  IdfWeights idf;  // every idf 0
  const WeightedDoc w = token_weights(counts, idf);
  CHECK(w.weight_of("a") == doctest::Approx(0.75));
  CHECK(w.weight_of("b") == doctest::Approx(0.25));
}

TEST_CASE("token_weights rejects empty counts") {
  CHECK_THROWS_AS(token_weights(TokenCounts{}, IdfWeights{}), UsageError);
}

TEST_CASE("token_weights always sums to one") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    TokenCounts counts;
    IdfWeights idf;
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    for (int i = 0; i < n; ++i) {
      counts.add("t" + std::to_string(i),
                 1 + static_cast<std::int64_t>(rng.uniform_index(5)));
      idf.values["t" + std::to_string(i)] = 5.0 * rng.uniform();
    }
    const WeightedDoc w = token_weights(counts, idf);
    double sum = 0.0;
    for (const auto& [tok, wt] : w.weights) {
      CHECK(wt >= 0.0);
      sum += wt;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("make_idf materializes ln(N/df) with the unseen fallback") {
  CorpusStats stats;
  stats.doc_count = 100;
  stats.doc_freq["rare"] = 1;
  stats.doc_freq["common"] = 100;
  const IdfWeights idf = make_idf(stats);
  CHECK(idf.of("rare") == doctest::Approx(std::log(100.0)));
  CHECK(idf.of("common") == doctest::Approx(0.0));
  CHECK(idf.fallback == doctest::Approx(std::log(100.0)));
}

TEST_CASE("log_score evaluates the smoothed multinomial in log space") {
  const RankerParams p;
  WeightedDoc article;
  article.weights = {{"coach", 0.5}, {"football", 0.5}};
  WeightedDoc candidate;
  candidate.weights = {{"football", 1.0}};

  const double got = log_score(candidate, article, p);
  const double expect = std::log(p.lambda * 0.5 + (1.0 - p.lambda) * p.alpha);
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  CHECK(got == doctest::Approx(-0.6932).epsilon(2e-4));
}

TEST_CASE("log_score floors at the smoothing constant on zero overlap") {
  const RankerParams p;
  WeightedDoc article;
  article.weights = {{"football", 1.0}};
  WeightedDoc candidate;
  candidate.weights = {{"cricket", 1.0}};
  const double got = log_score(candidate, article, p);
  CHECK(got == doctest::Approx(std::log(1e-8)).epsilon(1e-9));
  CHECK(got == doctest::Approx(-18.4207).epsilon(1e-4));
}

TEST_CASE("log_score approaches zero for a perfectly matching candidate") {
  const RankerParams p;
  WeightedDoc both;
  both.weights = {{"t", 1.0}};
  const double got = log_score(both, both, p);
  CHECK(got == doctest::Approx(std::log(p.lambda + (1.0 - p.lambda) * p.alpha))
                   .epsilon(1e-12));
  CHECK(got < 0.0);
  CHECK(got > -2e-4);
}

TEST_CASE("log_score stays inside its bounds on random inputs") {
  const RankerParams p;
  const double floor = std::log((1.0 - p.lambda) * p.alpha);
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    TokenCounts ca, cc;
    IdfWeights idf;
    idf.fallback = 1.0;
    for (int i = 0; i < 6; ++i) {
      if (rng.bernoulli(0.6))
        ca.add("t" + std::to_string(rng.uniform_index(10)),
               1 + static_cast<std::int64_t>(rng.uniform_index(4)));
      if (rng.bernoulli(0.6))
        cc.add("t" + std::to_string(rng.uniform_index(10)),
               1 + static_cast<std::int64_t>(rng.uniform_index(4)));
    }
    if (ca.empty()) ca.add("fill");
    if (cc.empty()) cc.add("fill");
    const double s =
        log_score(token_weights(cc, idf), token_weights(ca, idf), p);
    CHECK(s >= floor - 1e-9);
    CHECK(s < 0.0);
  }
}

TEST_CASE("select_entity keeps the argmax iff it clears the threshold") {
  const RankerParams p;
  WeightedDoc article;
  article.weights = {{"quantum", 0.8}, {"talk", 0.2}};
  WeightedDoc physicist;
  physicist.weights = {{"quantum", 1.0}};
  WeightedDoc farmer;
  farmer.weights = {{"harvest", 1.0}};
  const auto pages = [&](const std::string& title) -> const WeightedDoc* {
    if (title == "The Physicist") return &physicist;
    if (title == "The Farmer") return &farmer;
    return nullptr;
  };

  // Empty candidate list: nothing to select.
  CHECK_FALSE(select_entity({}, article, pages, p).has_value());

  // Zero-overlap single candidate: floor score loses to the threshold.
  CHECK_FALSE(select_entity({"The Farmer"}, article, pages, p).has_value());

  // The candidate sharing the article's dominant token wins.
  const auto got =
      select_entity({"The Farmer", "The Physicist"}, article, pages, p);
  REQUIRE(got.has_value());
  CHECK(*got == "The Physicist");
  // Brute force: its score strictly exceeds the alternative's.
  CHECK(log_score(physicist, article, p) > log_score(farmer, article, p));

  // Unknown titles are skipped entirely.
  CHECK_FALSE(select_entity({"No Such Page"}, article, pages, p).has_value());
}

TEST_CASE("select_entity breaks exact ties lexicographically") {
  const RankerParams p;
  WeightedDoc article;
  article.weights = {{"shared", 1.0}};
  WeightedDoc page;
  page.weights = {{"shared", 1.0}};
  const auto pages = [&](const std::string&) { return &page; };
  const auto got = select_entity({"B Page", "A Page"}, article, pages, p);
  REQUIRE(got.has_value());
  CHECK(*got == "A Page");
}

TEST_CASE("distant labeling resolves the Nixon fixture to one entity") {
  std::vector<Document> docs = {doc_of("d1", "Dick Nixon watergate"),
                                doc_of("d2", "Richard Nixon resignation")};
  KbSnapshot kb;
  kb.add_page("Richard Nixon", "watergate resignation");
  kb.add_redirect("Dick Nixon", "Richard Nixon");

  std::vector<Mention> mentions = {mention_of("d1#m0", "d1", "Dick Nixon"),
                                   mention_of("d2#m0", "d2", "Richard Nixon")};
  const LabelResult res =
      distant_label_corpus(docs, mentions, kb, RankerParams{});

  REQUIRE(res.labels.mention_count() == 2);
  REQUIRE(res.labels.entity_of("d1#m0") != nullptr);
  CHECK(*res.labels.entity_of("d1#m0") == "Richard Nixon");
  CHECK(*res.labels.entity_of("d2#m0") == "Richard Nixon");
  CHECK(res.labels.entity_count() == 1);

  CHECK(res.stats.zero_candidates == 0);
  CHECK(res.stats.one_candidate == 2);
  CHECK(res.stats.multiple_candidates == 0);
  CHECK(res.stats.accepted == 2);
  CHECK(res.stats.rejected == 0);
  // One entity of size 2 lands in the 2-9 bucket.
  REQUIRE(res.stats.entity_sizes.size() == 6);
  CHECK(res.stats.entity_sizes[0] == std::pair<std::string, std::int64_t>{"1", 0});
  CHECK(res.stats.entity_sizes[1] ==
        std::pair<std::string, std::int64_t>{"2-9", 1});
}

TEST_CASE("distant labeling drops mentions that clear no threshold") {
  std::vector<Document> docs = {doc_of("d1", "Ann Bell gardening prize"),
                                doc_of("d2", "Cole Dorr spoke quietly")};
  KbSnapshot kb;
  kb.add_page("Ann Bell", "gardening prize flowers");
  kb.add_page("Cole Dorr", "unrelated submarine tokens");

  std::vector<Mention> mentions = {mention_of("d1#m0", "d1", "Ann Bell"),
                                   mention_of("d2#m0", "d2", "Cole Dorr"),
                                   mention_of("d2#m1", "d2", "Nobody Known")};
  const LabelResult res =
      distant_label_corpus(docs, mentions, kb, RankerParams{});

  // d2#m0's only candidate has zero token overlap with d2: rejected.
  // "Nobody Known" has no candidates at all.
  CHECK(res.labels.mention_count() == 1);
  CHECK(res.labels.entity_of("d1#m0") != nullptr);
  CHECK(res.labels.entity_of("d2#m0") == nullptr);
  CHECK(res.stats.accepted == 1);
  CHECK(res.stats.rejected == 1);
  CHECK(res.stats.zero_candidates == 1);
  CHECK(res.stats.one_candidate == 2);
  // Every resolved mention on its own page: size-1 bucket counts entities.
  CHECK(res.stats.entity_sizes[0] ==
        std::pair<std::string, std::int64_t>{"1", 1});
}

TEST_CASE("label stats serialize to well-formed json") {
  LabelStats stats;
  stats.zero_candidates = 1;
  stats.one_candidate = 2;
  stats.multiple_candidates = 3;
  stats.accepted = 4;
  stats.rejected = 1;
  stats.entity_sizes = {{"1", 2}, {"2-9", 1}, {"10-99", 0},
                        {"100-999", 0}, {"1000-9999", 0}, {"10000+", 0}};
  const auto parsed = nlohmann::json::parse(stats.to_json());
  CHECK(parsed["candidates"]["zero"] == 1);
  CHECK(parsed["candidates"]["one"] == 2);
  CHECK(parsed["candidates"]["multiple"] == 3);
  CHECK(parsed["decisions"]["accepted"] == 4);
  CHECK(parsed["decisions"]["rejected"] == 1);
  REQUIRE(parsed["entity_sizes"].is_array());
  CHECK(parsed["entity_sizes"].size() == 6);
  CHECK(parsed["entity_sizes"][1]["bucket"] == "2-9");
  CHECK(parsed["entity_sizes"][1]["count"] == 1);
}

TEST_CASE("idf rescaling changes no labeling outcome") {
  std::vector<Document> docs = {doc_of("d1", "Dick Nixon watergate hearings"),
                                doc_of("d2", "Richard Nixon resignation"),
                                doc_of("d3", "Ann Bell gardening prize")};
  KbSnapshot kb;
  kb.add_page("Richard Nixon", "watergate resignation hearings");
  kb.add_page("Ann Bell", "gardening prize flowers");
  kb.add_redirect("Dick Nixon", "Richard Nixon");

  std::vector<Mention> mentions = {mention_of("d1#m0", "d1", "Dick Nixon"),
                                   mention_of("d2#m0", "d2", "Richard Nixon"),
                                   mention_of("d3#m0", "d3", "Ann Bell")};

  const DistantLabeler base(kb, docs, RankerParams{});
  for (const double k : {0.1, 3.0, 100.0}) {
    IdfWeights scaled_a = base.article_idf();
    for (auto& [tok, v] : scaled_a.values) v *= k;
    scaled_a.fallback *= k;
    const DistantLabeler scaled(kb, docs, RankerParams{}, scaled_a,
                                base.kb_idf());
    for (const auto& m : mentions) {
      const auto lhs = base.label_mention(m);
      const auto rhs = scaled.label_mention(m);
      CHECK(lhs.selected == rhs.selected);
      CHECK(lhs.candidate_count == rhs.candidate_count);
    }
  }
}

TEST_CASE("parallel labeling matches the serial reference") {
  std::vector<Document> docs;
  std::vector<Mention> mentions;
  KbSnapshot kb;
  for (int i = 0; i < 40; ++i) {
    const std::string name = "Person P" + std::to_string(i);
    const std::string tokens = "topic" + std::to_string(i) + " detail";
    docs.push_back(
        doc_of("d" + std::to_string(i), name + " " + tokens));
    kb.add_page(name, tokens + " biography");
    mentions.push_back(
        mention_of("d" + std::to_string(i) + "#m0", "d" + std::to_string(i),
                   name));
  }
  const DistantLabeler labeler(kb, docs, RankerParams{});
  const LabelResult serial = labeler.label_all_serial(mentions);
  const LabelResult parallel = labeler.label_all(mentions, 2);
  CHECK(serial.labels == parallel.labels);
  CHECK(serial.stats.accepted == parallel.stats.accepted);
  CHECK(serial.stats.rejected == parallel.stats.rejected);
  CHECK(serial.stats.entity_sizes == parallel.stats.entity_sizes);
}
