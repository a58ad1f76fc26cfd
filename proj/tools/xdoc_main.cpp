// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xdoc/coref_model.hpp"
#include "xdoc/corpus.hpp"
#include "xdoc/errors.hpp"
#include "xdoc/io.hpp"
#include "xdoc/kb.hpp"
#include "xdoc/learner.hpp"
#include "xdoc/metrics.hpp"
#include "xdoc/ranker.hpp"
#include "xdoc/sampler.hpp"
#include "xdoc/withindoc.hpp"

namespace {

using namespace xdoc;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  return out;
}

void print_metric(std::ostream& os, const std::string& name, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  os << name << '\t' << buf << '\n';
}

void echo_seed(std::uint64_t seed) {
  std::cerr << "seed\t" << seed << '\n';
}

// Keeps only mentions whose ids appear in `keep`, preserving order.
std::vector<Mention> filter_mentions(std::vector<Mention> mentions,
                                     const std::map<std::string, std::string>&
                                         keep) {
  std::vector<Mention> out;
  out.reserve(keep.size());
  for (Mention& m : mentions)
    if (keep.contains(m.mention_id)) out.push_back(std::move(m));
  if (out.size() != keep.size())
    throw DataError("labels reference mentions missing from mentions file");
  return out;
}

struct MentionsArgs {
  std::string documents;
  std::string out;
  std::string weights;
  std::size_t window = 50;
  bool serial = false;
  int threads = 0;
};

void run_mentions(const MentionsArgs& args) {
  const std::vector<Document> docs = load_documents(args.documents);
  WdFeatureWeights weights;
  if (!args.weights.empty()) weights = load_wd_weights(args.weights);
  validate_wd_weights(weights);
  const std::vector<Mention> mentions =
      args.serial ? within_doc_coref_all_serial(docs, weights, args.window)
                  : within_doc_coref_all(docs, weights, args.window,
                                         args.threads);
  write_mentions(args.out, mentions);
}

struct LabelArgs {
  std::string documents;
  std::string mentions;
  std::string kb_redirects;
  std::string kb_disambig;
  std::string kb_pages;
  std::string out;
  std::string stats;
  RankerParams params;
  bool serial = false;
  int threads = 0;
};

void run_label(const LabelArgs& args) {
  const std::vector<Document> docs = load_documents(args.documents);
  const std::vector<Mention> mentions = load_mentions(args.mentions);
  const KbSnapshot kb =
      load_kb(args.kb_redirects, args.kb_disambig, args.kb_pages);
  const DistantLabeler labeler(kb, docs, args.params);
  const LabelResult result = args.serial
                                 ? labeler.label_all_serial(mentions)
                                 : labeler.label_all(mentions, args.threads);
  write_clustering(args.out, result.labels);
  std::string stats_path = args.stats;
  if (stats_path.empty())
    stats_path = (std::filesystem::path(args.out).parent_path() /
                  "labelstats.json")
                     .string();
  open_out(stats_path) << result.stats.to_json();
}

struct TrainArgs {
  std::string mentions;
  std::string labels;
  std::string out;
  std::string final_out;
  std::string log;
  std::string init_weights;
  TrainConfig cfg;
};

void run_train(const TrainArgs& args) {
  echo_seed(args.cfg.seed);
  const std::map<std::string, std::string> labels =
      read_pairs_tsv(args.labels);
  if (labels.empty()) throw DataError(args.labels + ": no labeled mentions");
  const std::vector<Mention> mentions =
      filter_mentions(load_mentions(args.mentions), labels);
  Clustering gold;
  for (const auto& [mention_id, entity_id] : labels)
    gold.assign(mention_id, entity_id);
  const MentionTable table(mentions);
  const std::vector<Canopy> canopies = build_canopies(table);

  std::optional<WeightVector> init;
  if (!args.init_weights.empty()) init = read_weights(args.init_weights);

  std::ofstream log_file;
  std::ostream* log = &std::cerr;
  if (!args.log.empty()) {
    log_file = open_out(args.log);
    log = &log_file;
  }
  const TrainResult result = train(table, gold, canopies, args.cfg, log,
                                   init ? &*init : nullptr);
  write_weights(args.out, result.averaged);
  if (!args.final_out.empty())
    write_weights(args.final_out, result.final_weights);
}

struct InferArgs {
  std::string mentions;
  std::string weights;
  std::string labels;
  std::string out;
  std::string trace;
  InferOptions opt;
  int chains = 1;
  int threads = 0;
};

void run_infer(const InferArgs& args) {
  echo_seed(args.opt.seed);
  std::vector<Mention> mentions = load_mentions(args.mentions);
  if (!args.labels.empty())
    mentions = filter_mentions(std::move(mentions),
                               read_pairs_tsv(args.labels));
  const WeightVector w = read_weights(args.weights);
  const MentionTable table(mentions);

  InferOptions opt = args.opt;
  std::ofstream trace_file;
  if (!args.trace.empty()) {
    trace_file = open_out(args.trace);
    opt.trace = &trace_file;
  }
  const InferResult result = infer_chains(table, w, opt, args.chains,
                                          args.threads);
  write_clustering(args.out, result.clustering);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", result.best_score);
  std::cerr << "best_score\t" << buf << '\n';
}

struct EvalArgs {
  std::string pred;
  std::string gold;
};

void run_eval(const EvalArgs& args) {
  const Clustering pred = read_clustering(args.pred);
  const Clustering gold = read_clustering(args.gold);
  const PairwiseScores scores = pairwise_prf(pred, gold);
  print_metric(std::cout, "precision", scores.precision);
  print_metric(std::cout, "recall", scores.recall);
  print_metric(std::cout, "f1", scores.f1);
}

struct BaselineArgs {
  std::string mentions;
  std::string labels;
};

void run_baseline(const BaselineArgs& args) {
  const std::map<std::string, std::string> labels =
      read_pairs_tsv(args.labels);
  const std::vector<Mention> mentions =
      filter_mentions(load_mentions(args.mentions), labels);
  Clustering gold;
  for (const auto& [mention_id, entity_id] : labels)
    gold.assign(mention_id, entity_id);
  const PairwiseScores unique =
      pairwise_prf(baseline_unique_name(mentions), gold);
  const PairwiseScores last = pairwise_prf(baseline_last_name(mentions), gold);
  print_metric(std::cout, "unique_name_precision", unique.precision);
  print_metric(std::cout, "unique_name_recall", unique.recall);
  print_metric(std::cout, "unique_name_f1", unique.f1);
  print_metric(std::cout, "last_name_precision", last.precision);
  print_metric(std::cout, "last_name_recall", last.recall);
  print_metric(std::cout, "last_name_f1", last.f1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-document person entity resolution pipeline"};
  app.set_config("--config", "", "key=value file with flag defaults");
  app.require_subcommand(1);

  MentionsArgs mentions_args;
  CLI::App* mentions_cmd = app.add_subcommand(
      "mentions", "Within-document resolution: documents to mentions");
  mentions_cmd->add_option("--documents", mentions_args.documents,
                           "documents.jsonl")
      ->required();
  mentions_cmd->add_option("--out", mentions_args.out, "mentions.jsonl")
      ->required();
  mentions_cmd->add_option("--weights", mentions_args.weights,
                           "key=value distance weights");
  mentions_cmd->add_option("--window", mentions_args.window,
                           "context tokens on each side");
  mentions_cmd->add_flag("--serial", mentions_args.serial,
                         "use the serial reference kernel");
  mentions_cmd->add_option("--threads", mentions_args.threads,
                           "worker threads (0 = default)");

  LabelArgs label_args;
  CLI::App* label_cmd = app.add_subcommand(
      "label", "Distant labeling: mentions + knowledge base to labels");
  label_cmd->add_option("--documents", label_args.documents, "documents.jsonl")
      ->required();
  label_cmd->add_option("--mentions", label_args.mentions, "mentions.jsonl")
      ->required();
  label_cmd->add_option("--kb-redirects", label_args.kb_redirects,
                        "kb_redirects.tsv")
      ->required();
  label_cmd->add_option("--kb-disambig", label_args.kb_disambig,
                        "kb_disambig.tsv")
      ->required();
  label_cmd->add_option("--kb-pages", label_args.kb_pages, "kb_pages.jsonl")
      ->required();
  label_cmd->add_option("--out", label_args.out, "labels.tsv")->required();
  label_cmd->add_option("--stats", label_args.stats,
                        "labelstats.json (default: next to --out)");
  label_cmd->add_option("--alpha", label_args.params.alpha,
                        "global-model token probability");
  label_cmd->add_option("--lambda", label_args.params.lambda,
                        "interpolation weight");
  label_cmd->add_option("--log-beta", label_args.params.log_beta,
                        "log-space rejection threshold");
  label_cmd->add_flag("--serial", label_args.serial,
                      "use the serial reference kernel");
  label_cmd->add_option("--threads", label_args.threads,
                        "worker threads (0 = default)");

  TrainArgs train_args;
  CLI::App* train_cmd =
      app.add_subcommand("train", "SampleRank training against labels");
  train_cmd->add_option("--mentions", train_args.mentions, "mentions.jsonl")
      ->required();
  train_cmd->add_option("--labels", train_args.labels, "labels.tsv")
      ->required();
  train_cmd->add_option("--out", train_args.out, "weights.tsv (averaged)")
      ->required();
  train_cmd->add_option("--final-out", train_args.final_out,
                        "also persist the unaveraged final weights");
  train_cmd->add_option("--log", train_args.log,
                        "training log path (default: stderr)");
  train_cmd->add_option("--init-weights", train_args.init_weights,
                        "warm-start weights.tsv");
  train_cmd->add_option("--iterations", train_args.cfg.iterations,
                        "training iterations");
  train_cmd->add_option("--steps-per-iteration",
                        train_args.cfg.steps_per_iteration,
                        "sampler steps per iteration");
  train_cmd->add_option("--learning-rate", train_args.cfg.learning_rate,
                        "perceptron step size");
  train_cmd->add_option("--seed", train_args.cfg.seed, "RNG seed");

  InferArgs infer_args;
  CLI::App* infer_cmd =
      app.add_subcommand("infer", "MAP inference: mentions to clustering");
  infer_cmd->add_option("--mentions", infer_args.mentions, "mentions.jsonl")
      ->required();
  infer_cmd->add_option("--weights", infer_args.weights, "weights.tsv")
      ->required();
  infer_cmd->add_option("--labels", infer_args.labels,
                        "restrict to mentions listed in this labels.tsv");
  infer_cmd->add_option("--out", infer_args.out, "clustering.tsv")->required();
  infer_cmd->add_option("--steps", infer_args.opt.steps, "MH steps");
  infer_cmd->add_option("--seed", infer_args.opt.seed, "RNG seed");
  infer_cmd->add_option("--chains", infer_args.chains,
                        "independent chains; best score wins");
  infer_cmd->add_option("--report-every", infer_args.opt.report_every,
                        "trace row interval");
  infer_cmd->add_option("--trace", infer_args.trace,
                        "score trace path (step, score, acceptance rate)");
  infer_cmd->add_option("--threads", infer_args.threads,
                        "worker threads (0 = default)");

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Pairwise metrics of clustering vs labels");
  eval_cmd->add_option("--pred", eval_args.pred, "clustering.tsv")->required();
  eval_cmd->add_option("--gold", eval_args.gold, "labels.tsv")->required();

  BaselineArgs baseline_args;
  CLI::App* baseline_cmd = app.add_subcommand(
      "baseline", "Unique-name and last-name baselines vs labels");
  baseline_cmd->add_option("--mentions", baseline_args.mentions,
                           "mentions.jsonl")
      ->required();
  baseline_cmd->add_option("--labels", baseline_args.labels, "labels.tsv")
      ->required();

  // Let app-level options such as --config appear after the subcommand.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (mentions_cmd->parsed()) run_mentions(mentions_args);
    if (label_cmd->parsed()) run_label(label_args);
    if (train_cmd->parsed()) run_train(train_args);
    if (infer_cmd->parsed()) run_infer(infer_args);
    if (eval_cmd->parsed()) run_eval(eval_args);
    if (baseline_cmd->parsed()) run_baseline(baseline_args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "xdoc: error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "xdoc: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "xdoc: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
