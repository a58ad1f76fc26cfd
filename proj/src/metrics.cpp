// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/metrics.hpp"

#include <map>
#include <string>
#include <utility>

#include "xdoc/errors.hpp"
#include "xdoc/names.hpp"

namespace xdoc {

namespace {

std::int64_t pairs_of(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace

PairwiseScores pairwise_prf(const Clustering& pred, const Clustering& gold) {
  const auto& pa = pred.assignment();
  const auto& ga = gold.assignment();
  if (pa.size() != ga.size())
    throw UsageError("pairwise_prf: clusterings cover different mention sets");
  std::map<std::pair<std::string, std::string>, std::int64_t> cell;
  for (auto pit = pa.begin(), git = ga.begin(); pit != pa.end();
       ++pit, ++git) {
    if (pit->first != git->first)
      throw UsageError(
          "pairwise_prf: clusterings cover different mention sets");
    ++cell[{pit->second, git->second}];
  }

  PairwiseScores s;
  for (const auto& [entity, members] : pred.entities())
    s.predicted_pairs += pairs_of(static_cast<std::int64_t>(members.size()));
  for (const auto& [entity, members] : gold.entities())
    s.gold_pairs += pairs_of(static_cast<std::int64_t>(members.size()));
  for (const auto& [key, n] : cell) s.true_positives += pairs_of(n);

  s.precision = s.predicted_pairs == 0
                    ? 1.0
                    : static_cast<double>(s.true_positives) /
                          static_cast<double>(s.predicted_pairs);
  s.recall = s.gold_pairs == 0 ? 1.0
                               : static_cast<double>(s.true_positives) /
                                     static_cast<double>(s.gold_pairs);
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

Clustering baseline_unique_name(const std::vector<Mention>& mentions) {
  Clustering c;
  for (const Mention& m : mentions)
    c.assign(m.mention_id, "cn:" + ascii_lower(m.canonical));
  return c;
}

Clustering baseline_last_name(const std::vector<Mention>& mentions) {
  Clustering c;
  for (const Mention& m : mentions)
    c.assign(m.mention_id, "ln:" + last_name_of(m.canonical));
  return c;
}

}  // namespace xdoc
