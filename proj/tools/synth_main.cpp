// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "xdoc/errors.hpp"
#include "xdoc/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic ambiguity-injected corpus generator"};
  xdoc::SynthConfig cfg;
  std::string out_dir = ".";
  app.add_option("--entities", cfg.entities, "distinct persons");
  app.add_option("--mentions", cfg.mentions, "documents (one mention each)");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--prefix", cfg.id_prefix, "doc id prefix");
  app.add_option("--same-name-fraction", cfg.same_name_fraction,
                 "entities sharing a canonical name");
  app.add_option("--variant-fraction", cfg.variant_fraction,
                 "entities with an alternate first name");
  app.add_option("--variant-use-prob", cfg.variant_use_prob,
                 "per-document chance of the alternate form");
  app.add_option("--offset", cfg.entity_index_offset,
                 "entity index offset (keeps splits disjoint)");
  app.add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
    std::cerr << "seed\t" << cfg.seed << '\n';
    std::filesystem::create_directories(out_dir);
    const xdoc::SynthCorpus corpus = xdoc::make_synth_corpus(cfg);
    const std::filesystem::path dir(out_dir);
    write_synth_corpus(corpus, (dir / "documents.jsonl").string(),
                       (dir / "gold.tsv").string(),
                       (dir / "kb_redirects.tsv").string(),
                       (dir / "kb_disambig.tsv").string(),
                       (dir / "kb_pages.jsonl").string());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const xdoc::UsageError& e) {
    std::cerr << "xdoc-synth: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "xdoc-synth: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
