// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/withindoc.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <limits>

#include "xdoc/errors.hpp"
#include "xdoc/names.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xdoc {

namespace {

struct NameView {
  std::vector<std::string> tokens;         // honorifics stripped
  std::vector<std::string> sorted_tokens;  // for multiset containment
  bool male = false;
  bool female = false;
};

NameView make_view(const std::string& surface) {
  NameView v;
  for (const auto& t : tokenize(surface)) {
    switch (honorific_gender(t)) {
      case HonorificGender::kMale:
        v.male = true;
        break;
      case HonorificGender::kFemale:
        v.female = true;
        break;
      case HonorificGender::kNone:
        break;
    }
  }
  v.tokens = name_tokens(surface);
  v.sorted_tokens = v.tokens;
  std::sort(v.sorted_tokens.begin(), v.sorted_tokens.end());
  return v;
}

bool multiset_subset(const std::vector<std::string>& small,
                     const std::vector<std::string>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

struct FiredFeatures {
  bool exact = false;
  bool first = false;
  bool last = false;
  bool subset = false;
  bool gender = false;
};

// A feature fires when any cross pair of surfaces satisfies it.
FiredFeatures fired_features(const std::vector<NameView>& a,
                             const std::vector<NameView>& b) {
  FiredFeatures f;
  bool a_male = false, a_female = false, b_male = false, b_female = false;
  for (const auto& v : a) {
    a_male |= v.male;
    a_female |= v.female;
  }
  for (const auto& v : b) {
    b_male |= v.male;
    b_female |= v.female;
  }
  f.gender = (a_male && b_female) || (a_female && b_male);
  for (const auto& va : a) {
    if (va.tokens.empty()) continue;
    for (const auto& vb : b) {
      if (vb.tokens.empty()) continue;
      f.exact |= va.tokens == vb.tokens;
      f.first |= va.tokens.size() >= 2 && vb.tokens.size() >= 2 &&
                 va.tokens.front() == vb.tokens.front();
      f.last |= va.tokens.back() == vb.tokens.back();
      f.subset |= multiset_subset(va.sorted_tokens, vb.sorted_tokens) ||
                  multiset_subset(vb.sorted_tokens, va.sorted_tokens);
    }
  }
  return f;
}

double distance_of(const FiredFeatures& f, const WdFeatureWeights& w) {
  double d = w.base;
  if (f.exact) d += w.exact_match;
  if (f.first) d += w.first_name_match;
  if (f.last) d += w.last_name_match;
  if (f.subset) d += w.token_subset;
  if (f.gender) d += w.gender_conflict;
  return std::max(0.0, d);
}

}  // namespace

void validate_wd_weights(const WdFeatureWeights& w) {
  // Worst case for a conflicted pair: every match feature fires too.
  double floor = w.base + w.gender_conflict;
  floor += std::min(0.0, w.exact_match);
  floor += std::min(0.0, w.first_name_match);
  floor += std::min(0.0, w.last_name_match);
  floor += std::min(0.0, w.token_subset);
  if (std::max(0.0, floor) < w.merge_threshold)
    throw UsageError(
        "wd weights: gender_conflict too small, a conflicted pair could "
        "merge");
}

WdFeatureWeights load_wd_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  WdFeatureWeights w;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    double parsed = 0;
    try {
      std::size_t used = 0;
      parsed = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": bad numeric value '" + value + "'");
    }
    if (key == "exact_match")
      w.exact_match = parsed;
    else if (key == "first_name_match")
      w.first_name_match = parsed;
    else if (key == "last_name_match")
      w.last_name_match = parsed;
    else if (key == "token_subset")
      w.token_subset = parsed;
    else if (key == "gender_conflict")
      w.gender_conflict = parsed;
    else if (key == "base")
      w.base = parsed;
    else if (key == "merge_threshold")
      w.merge_threshold = parsed;
    else
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": unknown key '" + key + "'");
  }
  validate_wd_weights(w);
  return w;
}

double pair_distance(const std::vector<SubMention>& cluster_a,
                     const std::vector<SubMention>& cluster_b,
                     const WdFeatureWeights& w) {
  if (cluster_a.empty() || cluster_b.empty())
    throw UsageError("pair_distance: empty cluster");
  const std::string& doc = cluster_a.front().doc_id;
  for (const auto& sm : cluster_a)
    if (sm.doc_id != doc)
      throw UsageError("pair_distance: clusters span documents");
  for (const auto& sm : cluster_b)
    if (sm.doc_id != doc)
      throw UsageError("pair_distance: clusters span documents");
  std::vector<NameView> a, b;
  a.reserve(cluster_a.size());
  b.reserve(cluster_b.size());
  for (const auto& sm : cluster_a) a.push_back(make_view(sm.surface));
  for (const auto& sm : cluster_b) b.push_back(make_view(sm.surface));
  return distance_of(fired_features(a, b), w);
}

std::vector<Mention> within_doc_coref(const Document& doc,
                                      const WdFeatureWeights& w,
                                      std::size_t window) {
  validate_document(doc);
  validate_wd_weights(w);
  const std::size_t n = doc.person_spans.size();
  std::vector<Mention> out;
  if (n == 0) return out;

  struct Cluster {
    std::size_t min_index;           // smallest original span index
    std::vector<std::size_t> spans;  // original span indices
    std::vector<NameView> views;
  };
  std::vector<Cluster> clusters;
  clusters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Span s = doc.person_spans[i];
    Cluster c;
    c.min_index = i;
    c.spans = {i};
    c.views = {make_view(std::string(cp_slice(doc.text, s.begin, s.end)))};
    clusters.push_back(std::move(c));
  }

  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i + 1 < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d =
            distance_of(fired_features(clusters[i].views, clusters[j].views),
                        w);
        // clusters stay ordered by min_index, so the first strict minimum
        // is also the smallest (i, j) tie-break
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (!(best < w.merge_threshold)) break;
    Cluster& dst = clusters[bi];
    Cluster& src = clusters[bj];
    dst.spans.insert(dst.spans.end(), src.spans.begin(), src.spans.end());
    dst.views.insert(dst.views.end(),
                     std::make_move_iterator(src.views.begin()),
                     std::make_move_iterator(src.views.end()));
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  // Already ordered by min_index (merges keep the lower index in place).
  const std::vector<TokenSpan> doc_tokens = tokenize_spans(doc.text);
  out.reserve(clusters.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    Cluster& c = clusters[k];
    std::sort(c.spans.begin(), c.spans.end());
    std::vector<Span> spans;
    spans.reserve(c.spans.size());
    for (const std::size_t idx : c.spans) spans.push_back(doc.person_spans[idx]);
    out.push_back(make_mention(doc, doc_tokens,
                               doc.doc_id + "#m" + std::to_string(k), spans,
                               window));
  }
  return out;
}

std::vector<Mention> within_doc_coref_all_serial(
    std::span<const Document> docs, const WdFeatureWeights& w,
    std::size_t window) {
  std::vector<Mention> out;
  for (const Document& doc : docs) {
    auto mentions = within_doc_coref(doc, w, window);
    out.insert(out.end(), std::make_move_iterator(mentions.begin()),
               std::make_move_iterator(mentions.end()));
  }
  return out;
}

std::vector<Mention> within_doc_coref_all(std::span<const Document> docs,
                                          const WdFeatureWeights& w,
                                          std::size_t window,
                                          [[maybe_unused]] int threads) {
  const std::int64_t n = static_cast<std::int64_t>(docs.size());
  std::vector<std::vector<Mention>> per_doc(docs.size());
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      per_doc[static_cast<std::size_t>(i)] =
          within_doc_coref(docs[static_cast<std::size_t>(i)], w, window);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(xdoc_withindoc_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Mention> out;
  for (auto& mentions : per_doc)
    out.insert(out.end(), std::make_move_iterator(mentions.begin()),
               std::make_move_iterator(mentions.end()));
  return out;
}

}  // namespace xdoc
