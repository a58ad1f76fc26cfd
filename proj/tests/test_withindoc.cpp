// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include <cstddef>
#include <string>
#include <vector>

#include <doctest.h>

#include "test_util.hpp"
#include "xdoc/corpus.hpp"
#include "xdoc/errors.hpp"
#include "xdoc/names.hpp"
#include "xdoc/withindoc.hpp"

using namespace xdoc;

namespace {

SubMention sub(const std::string& doc_id, const std::string& surface) {
  SubMention sm;
  sm.doc_id = doc_id;
  sm.span = {0, cp_length(surface)};
  sm.surface = surface;
  return sm;
}

std::vector<SubMention> cluster(const std::string& doc_id,
                                std::vector<std::string> surfaces) {
  std::vector<SubMention> out;
  for (auto& s : surfaces) out.push_back(sub(doc_id, s));
  return out;
}

// Builds a document whose text is the given surfaces joined by " and ",
// with one person span per surface.
Document doc_of(std::vector<std::string> surfaces) {
  Document d;
  d.doc_id = "d1";
  std::size_t cp = 0;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    if (i > 0) {
      d.text += " and ";
      cp += 5;
    }
    d.person_spans.push_back({cp, cp + cp_length(surfaces[i])});
    d.text += surfaces[i];
    cp += cp_length(surfaces[i]);
  }
  validate_document(d);
  return d;
}

}  // namespace

TEST_CASE("name helpers strip honorifics and extract last names") {
  CHECK(is_honorific("mr"));
  CHECK(is_honorific("mrs"));
  CHECK(is_honorific("ms"));
  CHECK(is_honorific("miss"));
  CHECK_FALSE(is_honorific("smith"));
  CHECK(honorific_gender("mr") == HonorificGender::kMale);
  CHECK(honorific_gender("mrs") == HonorificGender::kFemale);
  CHECK(name_tokens("Mr. John Smith") ==
        std::vector<std::string>{"john", "smith"});
  CHECK(last_name_of("Mr. Smith") == "smith");
  CHECK(last_name_of("John Smith") == "smith");
  CHECK(last_name_of("Mrs.") == "");
  CHECK(ascii_lower("John SMITH") == "john smith");
}

TEST_CASE("pair_distance matches the shipped default weights") {
  const WdFeatureWeights w;
  validate_wd_weights(w);

  // Gender conflict forces the pair far above the merge threshold.
  CHECK(pair_distance(cluster("d1", {"Mr. Smith"}),
                      cluster("d1", {"Mrs. Smith"}), w) >= w.merge_threshold);
  // Identical strings are distance zero.
  CHECK(pair_distance(cluster("d1", {"John Smith"}),
                      cluster("d1", {"John Smith"}), w) == 0.0);
  // First-name conflict with shared last name stays at the threshold.
  CHECK(pair_distance(cluster("d1", {"John Smith"}),
                      cluster("d1", {"Jane Smith"}), w) >= w.merge_threshold);
  // Last name + token subset is strong enough to merge.
  CHECK(pair_distance(cluster("d1", {"John Smith"}), cluster("d1", {"Smith"}),
                      w) < w.merge_threshold);

  // Symmetry.
  const auto a = cluster("d1", {"John Smith", "Smith"});
  const auto b = cluster("d1", {"Mr. Smith"});
  CHECK(pair_distance(a, b, w) == pair_distance(b, a, w));
  // Non-negative even when every negative feature fires.
  CHECK(pair_distance(a, a, w) >= 0.0);
}

TEST_CASE("pair_distance rejects bad cluster arguments") {
  const WdFeatureWeights w;
  CHECK_THROWS_AS(pair_distance({}, cluster("d1", {"X Y"}), w), UsageError);
  CHECK_THROWS_AS(pair_distance(cluster("d1", {"X Y"}),
                                cluster("d2", {"X Y"}), w),
                  UsageError);
}

TEST_CASE("validate_wd_weights rejects a breakable gender veto") {
  WdFeatureWeights w;
  w.gender_conflict = 1.0;  // 2 + 1 - 3 = 0 < threshold 1: veto breakable
  CHECK_THROWS_AS(validate_wd_weights(w), UsageError);
}

TEST_CASE("within_doc_coref merges compatible name variants") {
  const WdFeatureWeights w;
  const auto mentions =
      within_doc_coref(doc_of({"John Smith", "Smith", "Mr. Smith"}), w, 2);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].canonical == "John Smith");
  CHECK(mentions[0].sub_mentions.size() == 3);
  CHECK(mentions[0].mention_id == "d1#m0");
  CHECK(mentions[0].name_bag.counts.at("smith") == 3);
}

TEST_CASE("within_doc_coref keeps conflicting names apart") {
  const WdFeatureWeights w;
  const auto mentions =
      within_doc_coref(doc_of({"John Smith", "Jane Smith"}), w, 2);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].canonical == "John Smith");
  CHECK(mentions[1].canonical == "Jane Smith");
  CHECK(mentions[0].mention_id == "d1#m0");
  CHECK(mentions[1].mention_id == "d1#m1");
}

TEST_CASE("within_doc_coref on a single span yields one mention") {
  const WdFeatureWeights w;
  const auto mentions = within_doc_coref(doc_of({"John Smith"}), w, 2);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].canonical == "John Smith");
}

TEST_CASE("within_doc_coref output partitions the input spans") {
  const WdFeatureWeights w;
  const auto doc = doc_of({"John Smith", "Smith", "Jane Smith", "Mr. Smith",
                           "Robert Jones", "Jones"});
  const auto mentions = within_doc_coref(doc, w, 2);
  std::vector<Span> covered;
  for (const auto& m : mentions)
    for (const auto& sm : m.sub_mentions) covered.push_back(sm.span);
  std::sort(covered.begin(), covered.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  REQUIRE(covered.size() == doc.person_spans.size());
  CHECK(covered == doc.person_spans);
}

TEST_CASE("no merged mention mixes male and female honorifics") {
  const WdFeatureWeights w;
  const auto doc = doc_of({"Mr. Smith", "Smith", "Mrs. Smith"});
  const auto mentions = within_doc_coref(doc, w, 2);
  for (const auto& m : mentions) {
    bool male = false, female = false;
    for (const auto& sm : m.sub_mentions)
      for (const auto& t : tokenize(sm.surface)) {
        male |= honorific_gender(t) == HonorificGender::kMale;
        female |= honorific_gender(t) == HonorificGender::kFemale;
      }
    CHECK_FALSE((male && female));
  }
}

TEST_CASE("raising the merge threshold never reduces merges") {
  WdFeatureWeights lo;
  lo.merge_threshold = 0.5;
  WdFeatureWeights mid;
  mid.merge_threshold = 1.5;
  WdFeatureWeights hi;
  hi.merge_threshold = 2.5;
  const auto doc = doc_of({"John Smith", "Smith", "Jane Smith", "J. Smith",
                           "John", "Robert Jones", "Bob Jones", "Jones"});
  const auto n_lo = within_doc_coref(doc, lo, 2).size();
  const auto n_mid = within_doc_coref(doc, mid, 2).size();
  const auto n_hi = within_doc_coref(doc, hi, 2).size();
  CHECK(n_mid <= n_lo);
  CHECK(n_hi <= n_mid);
}

TEST_CASE("corpus kernels match the serial reference") {
  const WdFeatureWeights w;
  std::vector<Document> docs;
  docs.push_back(doc_of({"John Smith", "Smith"}));
  docs.back().doc_id = "a";
  docs.push_back(doc_of({"Jane Roe", "Mrs. Roe", "Roe"}));
  docs.back().doc_id = "b";
  docs.push_back(doc_of({"Al Gray"}));
  docs.back().doc_id = "c";

  const auto serial = within_doc_coref_all_serial(docs, w, 3);
  const auto parallel = within_doc_coref_all(docs, w, 3, 2);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].mention_id == parallel[i].mention_id);
    CHECK(serial[i].canonical == parallel[i].canonical);
    CHECK(serial[i].name_bag == parallel[i].name_bag);
    CHECK(serial[i].context_bag == parallel[i].context_bag);
  }
}

TEST_CASE("wd weights load from key=value files") {
  testutil::TempDir tmp("wd-weights");
  const auto path = tmp.path("wd.cfg");
  testutil::write_file(path,
                       "# comment\n"
                       "merge_threshold=2.0\n"
                       "last_name_match=-1.5\n");
  const auto w = load_wd_weights(path);
  CHECK(w.merge_threshold == 2.0);
  CHECK(w.last_name_match == -1.5);
  CHECK(w.base == 2.0);  // untouched default

  testutil::write_file(path, "no_such_key=1\n");
  CHECK_THROWS_AS(load_wd_weights(path), DataError);
}
