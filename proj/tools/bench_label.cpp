// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

// Benchmark of the OpenMP kernels against their serial reference
// implementations: within-document resolution and distant labeling.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "xdoc/kb.hpp"
#include "xdoc/ranker.hpp"
#include "xdoc/synth.hpp"
#include "xdoc/withindoc.hpp"

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void report(const char* stage, double serial_ms, double parallel_ms,
            bool match) {
  std::printf("%-10s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n",
              stage, serial_ms, parallel_ms, serial_ms / parallel_ms,
              match ? "outputs match" : "OUTPUT MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel kernel benchmark"};
  int entities = 500;
  int mentions = 5000;
  std::uint64_t seed = 7;
  int threads = 0;
  std::size_t window = 10;
  app.add_option("--entities", entities, "distinct persons");
  app.add_option("--mentions", mentions, "documents");
  app.add_option("--seed", seed, "corpus seed");
  app.add_option("--threads", threads, "worker threads (0 = default)");
  app.add_option("--window", window, "context window");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  xdoc::SynthConfig cfg;
  cfg.entities = entities;
  cfg.mentions = mentions;
  cfg.seed = seed;
  cfg.id_prefix = "bench";
  const xdoc::SynthCorpus corpus = xdoc::make_synth_corpus(cfg);
  std::printf("corpus: %d documents, %d entities\n", mentions, entities);

  const xdoc::WdFeatureWeights wd;
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<xdoc::Mention> serial_mentions =
      xdoc::within_doc_coref_all_serial(corpus.documents, wd, window);
  const double mentions_serial_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  const std::vector<xdoc::Mention> parallel_mentions =
      xdoc::within_doc_coref_all(corpus.documents, wd, window, threads);
  const double mentions_parallel_ms = ms_since(t0);

  bool mentions_match = serial_mentions.size() == parallel_mentions.size();
  for (std::size_t i = 0; mentions_match && i < serial_mentions.size(); ++i)
    mentions_match = serial_mentions[i].mention_id ==
                         parallel_mentions[i].mention_id &&
                     serial_mentions[i].sub_mentions ==
                         parallel_mentions[i].sub_mentions &&
                     serial_mentions[i].name_bag ==
                         parallel_mentions[i].name_bag &&
                     serial_mentions[i].context_bag ==
                         parallel_mentions[i].context_bag;
  report("mentions", mentions_serial_ms, mentions_parallel_ms, mentions_match);

  xdoc::KbSnapshot kb;
  for (const auto& [title, text] : corpus.pages) kb.add_page(title, text);
  for (const auto& [source, target] : corpus.redirects)
    kb.add_redirect(source, target);
  for (const auto& [title, members] : corpus.disambigs)
    kb.add_disambiguation(title, members);
  const xdoc::DistantLabeler labeler(kb, corpus.documents,
                                     xdoc::RankerParams{});

  t0 = std::chrono::steady_clock::now();
  const xdoc::LabelResult serial_labels =
      labeler.label_all_serial(serial_mentions);
  const double label_serial_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  const xdoc::LabelResult parallel_labels =
      labeler.label_all(serial_mentions, threads);
  const double label_parallel_ms = ms_since(t0);

  const bool labels_match = serial_labels.labels == parallel_labels.labels;
  report("label", label_serial_ms, label_parallel_ms, labels_match);

  return mentions_match && labels_match ? 0 : 1;
}
