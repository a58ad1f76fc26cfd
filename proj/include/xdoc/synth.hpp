// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xdoc/corpus.hpp"

namespace xdoc {

// Synthetic person-mention corpus with two injected ambiguities: entities
// referred to by alternate first names (splitting naive name clustering)
// and distinct entities sharing a full name (merging it). Every document
// covers exactly one entity with one surface form, so within-document
// resolution yields one mention per document.
struct SynthConfig {
  int entities = 50;
  int mentions = 500;  // one document, hence one mention, each
  std::uint64_t seed = 1;
  std::string id_prefix = "tr";
  double same_name_fraction = 0.2;  // entities sharing a canonical name
  double variant_fraction = 0.4;    // entities with an alternate first name
  double variant_use_prob = 0.5;    // per-document chance of the alternate
  int signature_words = 8;          // entity-specific vocabulary size
  int context_words = 6;            // signature tokens per occurrence
  int noise_words = 2;              // shared tokens per occurrence
  int entity_index_offset = 0;      // keeps splits' vocabularies disjoint
};

struct SynthCorpus {
  std::vector<Document> documents;
  Clustering gold;  // "<doc_id>#m0" -> "e<entity index>"
  std::vector<std::pair<std::string, std::string>> redirects;
  std::vector<std::pair<std::string, std::vector<std::string>>> disambigs;
  std::vector<std::pair<std::string, std::string>> pages;  // title, text
};

SynthCorpus make_synth_corpus(const SynthConfig& cfg);

// Writes documents.jsonl, gold.tsv and the three knowledge-base tables.
void write_synth_corpus(const SynthCorpus& corpus,
                        const std::string& documents_path,
                        const std::string& gold_path,
                        const std::string& redirects_path,
                        const std::string& disambig_path,
                        const std::string& pages_path);

}  // namespace xdoc
