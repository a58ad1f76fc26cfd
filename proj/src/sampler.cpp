// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>

#include "xdoc/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xdoc {

std::vector<Canopy> build_canopies(const MentionTable& table) {
  std::map<std::string, std::vector<std::size_t>> by_canonical;
  std::map<std::string, std::vector<std::size_t>> by_last_name;
  for (std::size_t i = 0; i < table.size(); ++i) {
    by_canonical[table.row(i).canonical_lower].push_back(i);
    by_last_name[table.row(i).last_name].push_back(i);
  }
  std::vector<Canopy> canopies(2);
  canopies[0].name = "canonical";
  for (auto& [key, set] : by_canonical)
    canopies[0].sets.push_back(std::move(set));
  canopies[1].name = "last_name";
  for (auto& [key, set] : by_last_name)
    canopies[1].sets.push_back(std::move(set));
  return canopies;
}

Move propose(const CorefState& state, const std::vector<Canopy>& canopies,
             Rng& rng) {
  if (state.mention_count() == 0) throw UsageError("propose: no mentions");
  Move mv;
  if (rng.bernoulli(0.8) && !canopies.empty()) {
    const Canopy& canopy = canopies[rng.uniform_index(canopies.size())];
    const std::vector<std::size_t>& set =
        canopy.sets[rng.uniform_index(canopy.sets.size())];
    const std::size_t m_a = set[rng.uniform_index(set.size())];
    const std::size_t m_b = set[rng.uniform_index(set.size())];
    mv.mention = m_a;
    mv.destination = state.entity_of(m_b);
    mv.noop = state.entity_of(m_a) == state.entity_of(m_b);
  } else {
    mv.mention = rng.uniform_index(state.mention_count());
    const std::vector<int>& active = state.active_entities();
    const std::size_t k = rng.uniform_index(active.size() + 1);
    mv.destination =
        k == active.size() ? CorefState::kNewEntity : active[k];
    mv.noop = mv.destination == state.entity_of(mv.mention);
  }
  return mv;
}

MhOutcome mh_step(CorefState& state, const WeightVector& w,
                  const std::vector<Canopy>& canopies, PairFeatureCache& cache,
                  Rng& rng) {
  MhOutcome out;
  out.move = propose(state, canopies, rng);
  if (out.move.noop) return out;
  out.delta = move_delta(state, out.move.mention, out.move.destination, w,
                         cache);
  out.accepted = out.delta >= 0.0 || rng.uniform() < std::exp(out.delta);
  if (out.accepted) state.apply_move(out.move.mention, out.move.destination);
  return out;
}

namespace {

void trace_row(std::ostream& os, std::int64_t step, double score,
               double acceptance_rate) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%lld\t%.6f\t%.6f",
                static_cast<long long>(step), score, acceptance_rate);
  os << buf << '\n';
}

}  // namespace

InferResult infer(const MentionTable& table, const WeightVector& w,
                  const InferOptions& opt) {
  if (opt.steps < 0) throw UsageError("infer: steps must be >= 0");
  InferResult result;
  CorefState state = CorefState::singletons(table.size());
  if (table.size() == 0 || opt.steps == 0) {
    result.clustering = state.to_clustering(table);
    result.best_score =
        table.size() == 0 ? 0.0 : model_log_score(table, state, w);
    return result;
  }
  const std::vector<Canopy> canopies = build_canopies(table);
  PairFeatureCache cache(table);
  Rng rng(opt.seed);
  double score = model_log_score(table, state, w);
  double best_score = score;
  CorefState best = state;
  for (std::int64_t step = 1; step <= opt.steps; ++step) {
    const MhOutcome out = mh_step(state, w, canopies, cache, rng);
    if (out.accepted) {
      ++result.accepted;
      score += out.delta;
      if (score > best_score) {
        best_score = score;
        best = state;
      }
    }
    if (opt.trace != nullptr && opt.report_every > 0 &&
        step % opt.report_every == 0)
      trace_row(*opt.trace, step, score,
                static_cast<double>(result.accepted) /
                    static_cast<double>(step));
  }
  result.steps = opt.steps;
  result.clustering = best.to_clustering(table);
  result.best_score = model_log_score(table, best, w);
  return result;
}

InferResult infer_chains(const MentionTable& table, const WeightVector& w,
                         const InferOptions& opt, int chains,
                         [[maybe_unused]] int threads) {
  if (chains < 1) throw UsageError("infer: chains must be >= 1");
  if (chains == 1) return infer(table, w, opt);
  std::vector<InferResult> results(static_cast<std::size_t>(chains));
  std::exception_ptr failure;
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int c = 0; c < chains; ++c) {
    try {
      InferOptions chain_opt = opt;
      chain_opt.seed = opt.seed + static_cast<std::uint64_t>(c);
      if (c != 0) chain_opt.trace = nullptr;
      results[static_cast<std::size_t>(c)] = infer(table, w, chain_opt);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(xdoc_infer_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::size_t best = 0;
  for (std::size_t c = 1; c < results.size(); ++c)
    if (results[c].best_score > results[best].best_score) best = c;
  return results[best];
}

}  // namespace xdoc
