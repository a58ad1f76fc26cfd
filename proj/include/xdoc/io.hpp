// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <string>
#include <vector>

#include "xdoc/corpus.hpp"

namespace xdoc {

// documents.jsonl: {"doc_id": str, "text": str, "person_spans": [[s,e],...]}
// per line. Loaded documents are validated; duplicate ids and malformed
// records raise DataError with file:line.
std::vector<Document> load_documents(const std::string& path);
void write_documents(const std::string& path,
                     const std::vector<Document>& docs);

// mentions.jsonl: {"mention_id", "doc_id", "spans", "surfaces", "canonical",
// "name_bag", "context_bag"} per line. Bags are token -> count objects with
// sorted keys, so output is byte-stable.
std::vector<Mention> load_mentions(const std::string& path);
void write_mentions(const std::string& path,
                    const std::vector<Mention>& mentions);

// Two-column TSV `mention_id<TAB>value`, used both for clustering.tsv
// (value = entity_id) and labels.tsv (value = page title). Rows are written
// sorted by mention_id; duplicates on read raise DataError.
std::map<std::string, std::string> read_pairs_tsv(const std::string& path);
void write_pairs_tsv(const std::string& path,
                     const std::map<std::string, std::string>& rows);

Clustering read_clustering(const std::string& path);
void write_clustering(const std::string& path, const Clustering& clustering);

}  // namespace xdoc
