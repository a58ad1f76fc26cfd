// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/coref_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "xdoc/errors.hpp"
#include "xdoc/names.hpp"

namespace xdoc {

namespace {

constexpr int kCanonicalMatch = 0;
constexpr int kCanonicalMismatch = 1;
constexpr int kLastNameMatch = 2;
constexpr int kLastNameMismatch = 3;
constexpr int kNameBinBase = 4;
constexpr int kCtxBinBase = 14;

const std::array<std::string, kPairFeatureCount> kPairNames = [] {
  std::array<std::string, kPairFeatureCount> names;
  names[kCanonicalMatch] = "canonical_match";
  names[kCanonicalMismatch] = "canonical_mismatch";
  names[kLastNameMatch] = "last_name_match";
  names[kLastNameMismatch] = "last_name_mismatch";
  for (int b = 0; b < 10; ++b) {
    names[kNameBinBase + b] = "name_cosine_bin_" + std::to_string(b);
    names[kCtxBinBase + b] = "context_cosine_bin_" + std::to_string(b);
  }
  return names;
}();

const std::array<std::string, kEntityFeatureCount> kEntityNames = {
    "size_eq_1", "size_gt_1", "size_gt_2", "size_gt_4"};

}  // namespace

std::string_view pair_feature_name(int id) { return kPairNames.at(id); }

std::string_view entity_feature_name(int id) { return kEntityNames.at(id); }

int pair_feature_id(std::string_view name) {
  for (int i = 0; i < kPairFeatureCount; ++i)
    if (kPairNames[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

int entity_feature_id(std::string_view name) {
  for (int i = 0; i < kEntityFeatureCount; ++i)
    if (kEntityNames[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

std::array<int, 4> PairFeatures::active() const {
  return {canonical_match ? kCanonicalMatch : kCanonicalMismatch,
          last_name_match ? kLastNameMatch : kLastNameMismatch,
          kNameBinBase + name_cos_bin, kCtxBinBase + ctx_cos_bin};
}

double WeightVector::pair_score(const PairFeatures& f,
                                bool same_entity) const {
  const auto& theta = same_entity ? plus : minus;
  double s = 0.0;
  for (const int id : f.active()) s += theta[static_cast<std::size_t>(id)];
  return s;
}

double WeightVector::entity_score(std::size_t size) const {
  double s = 0.0;
  if (size == 1) s += entity[0];
  if (size > 1) s += entity[1];
  if (size > 2) s += entity[2];
  if (size > 4) s += entity[3];
  return s;
}

std::array<double, kEntityFeatureCount> entity_features(std::size_t size) {
  return {size == 1 ? 1.0 : 0.0, size > 1 ? 1.0 : 0.0, size > 2 ? 1.0 : 0.0,
          size > 4 ? 1.0 : 0.0};
}

void write_weights(const std::string& path, const WeightVector& w) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  char buf[64];
  const auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (int i = 0; i < kPairFeatureCount; ++i)
    out << "plus\t" << kPairNames[static_cast<std::size_t>(i)] << '\t'
        << fmt(w.plus[static_cast<std::size_t>(i)]) << '\n';
  for (int i = 0; i < kPairFeatureCount; ++i)
    out << "minus\t" << kPairNames[static_cast<std::size_t>(i)] << '\t'
        << fmt(w.minus[static_cast<std::size_t>(i)]) << '\n';
  for (int i = 0; i < kEntityFeatureCount; ++i)
    out << "entity\t" << kEntityNames[static_cast<std::size_t>(i)] << '\t'
        << fmt(w.entity[static_cast<std::size_t>(i)]) << '\n';
  if (!out) throw DataError(path + ": write failed");
}

WeightVector read_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  WeightVector w;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path + ":" + std::to_string(line_no);
    const auto tab1 = line.find('\t');
    const auto tab2 =
        tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos ||
        line.find('\t', tab2 + 1) != std::string::npos)
      throw DataError(where + ": expected 3 tab-separated fields");
    const std::string cls = line.substr(0, tab1);
    const std::string name = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string value_str = line.substr(tab2 + 1);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(value_str, &used);
      if (used != value_str.size()) throw std::invalid_argument(value_str);
    } catch (const std::exception&) {
      throw DataError(where + ": bad value '" + value_str + "'");
    }
    if (!seen.insert({cls, name}).second)
      throw DataError(where + ": duplicate row " + cls + "/" + name);
    if (cls == "plus" || cls == "minus") {
      const int id = pair_feature_id(name);
      if (id < 0) throw DataError(where + ": unknown feature '" + name + "'");
      (cls == "plus" ? w.plus : w.minus)[static_cast<std::size_t>(id)] = value;
    } else if (cls == "entity") {
      const int id = entity_feature_id(name);
      if (id < 0) throw DataError(where + ": unknown feature '" + name + "'");
      w.entity[static_cast<std::size_t>(id)] = value;
    } else {
      throw DataError(where + ": unknown factor class '" + cls + "'");
    }
  }
  return w;
}

MentionTable::MentionTable(const std::vector<Mention>& mentions) {
  std::unordered_map<std::string, std::int32_t> interner;
  const auto intern = [&interner](const std::string& token) {
    const auto [it, inserted] = interner.emplace(
        token, static_cast<std::int32_t>(interner.size()));
    (void)inserted;
    return it->second;
  };
  const auto build_bag = [&intern](const TokenCounts& counts) {
    Bag bag;
    bag.entries.reserve(counts.counts.size());
    double norm2 = 0.0;
    for (const auto& [token, n] : counts.counts) {
      const double c = static_cast<double>(n);
      bag.entries.emplace_back(intern(token), c);
      norm2 += c * c;
    }
    std::sort(bag.entries.begin(), bag.entries.end());
    bag.norm = std::sqrt(norm2);
    return bag;
  };
  rows_.reserve(mentions.size());
  for (const Mention& m : mentions) {
    if (index_.contains(m.mention_id))
      throw UsageError("MentionTable: duplicate mention_id '" + m.mention_id +
                       "'");
    Row row;
    row.mention_id = m.mention_id;
    row.canonical_lower = ascii_lower(m.canonical);
    row.last_name = last_name_of(m.canonical);
    row.name_bag = build_bag(m.name_bag);
    row.context_bag = build_bag(m.context_bag);
    index_.emplace(row.mention_id, rows_.size());
    rows_.push_back(std::move(row));
  }
}

std::size_t MentionTable::index_of(const std::string& mention_id) const {
  const auto it = index_.find(mention_id);
  if (it == index_.end())
    throw UsageError("MentionTable: unknown mention_id '" + mention_id + "'");
  return it->second;
}

namespace {

double bag_cosine(const MentionTable::Bag& a, const MentionTable::Bag& b) {
  if (a.entries.empty() || b.entries.empty()) return 0.0;
  double dot = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return dot / (a.norm * b.norm);
}

int cosine_bin(double cos) {
  const int bin = static_cast<int>(std::floor(10.0 * cos));
  return std::clamp(bin, 0, 9);
}

}  // namespace

PairFeatures pair_features(const MentionTable& table, std::size_t i,
                           std::size_t j) {
  const MentionTable::Row& a = table.row(i);
  const MentionTable::Row& b = table.row(j);
  PairFeatures f;
  f.canonical_match = a.canonical_lower == b.canonical_lower;
  f.last_name_match = a.last_name == b.last_name;
  f.name_cos_bin = cosine_bin(bag_cosine(a.name_bag, b.name_bag));
  f.ctx_cos_bin = cosine_bin(bag_cosine(a.context_bag, b.context_bag));
  return f;
}

const PairFeatures& PairFeatureCache::get(std::size_t i, std::size_t j) {
  const std::uint64_t lo = static_cast<std::uint64_t>(std::min(i, j));
  const std::uint64_t hi = static_cast<std::uint64_t>(std::max(i, j));
  const std::uint64_t key = (lo << 32) | hi;
  const auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  return memo_.emplace(key, pair_features(table_, i, j)).first->second;
}

CorefState CorefState::singletons(std::size_t n) {
  CorefState s;
  s.entity_of_.resize(n);
  s.members_.resize(n);
  s.active_.resize(n);
  s.active_pos_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.entity_of_[i] = static_cast<int>(i);
    s.members_[i] = {i};
    s.active_[i] = static_cast<int>(i);
    s.active_pos_[i] = i;
  }
  return s;
}

CorefState CorefState::from_clustering(const MentionTable& table,
                                       const Clustering& clustering) {
  if (clustering.assignment().size() != table.size())
    throw UsageError("from_clustering: clustering does not cover the table");
  CorefState s;
  const std::size_t n = table.size();
  s.entity_of_.assign(n, -1);
  std::map<std::string, int> slot_of;
  for (const auto& [mention_id, entity_id] : clustering.assignment()) {
    const std::size_t m = table.index_of(mention_id);
    const auto [it, inserted] =
        slot_of.emplace(entity_id, static_cast<int>(slot_of.size()));
    if (inserted) s.members_.emplace_back();
    s.entity_of_[m] = it->second;
    s.members_[static_cast<std::size_t>(it->second)].push_back(m);
  }
  s.active_.resize(s.members_.size());
  s.active_pos_.resize(s.members_.size());
  for (std::size_t e = 0; e < s.members_.size(); ++e) {
    s.active_[e] = static_cast<int>(e);
    s.active_pos_[e] = e;
  }
  return s;
}

Clustering CorefState::to_clustering(const MentionTable& table) const {
  Clustering c;
  for (const int e : active_) {
    const std::vector<std::size_t>& mem = members_[static_cast<std::size_t>(e)];
    std::string name = table.row(mem.front()).mention_id;
    for (const std::size_t m : mem)
      name = std::min(name, table.row(m).mention_id);
    for (const std::size_t m : mem) c.assign(table.row(m).mention_id, name);
  }
  return c;
}

const std::vector<std::size_t>& CorefState::members(int e) const {
  if (e < 0 || static_cast<std::size_t>(e) >= members_.size() ||
      members_[static_cast<std::size_t>(e)].empty())
    throw UsageError("CorefState: no such entity");
  return members_[static_cast<std::size_t>(e)];
}

int CorefState::apply_move(std::size_t m, int dst) {
  if (m >= entity_of_.size()) throw UsageError("apply_move: bad mention");
  const int src = entity_of_[m];
  if (dst == src) throw UsageError("apply_move: destination is the source");
  if (dst != kNewEntity &&
      (dst < 0 || static_cast<std::size_t>(dst) >= members_.size() ||
       members_[static_cast<std::size_t>(dst)].empty()))
    throw UsageError("apply_move: bad destination entity");

  std::vector<std::size_t>& src_members =
      members_[static_cast<std::size_t>(src)];
  const auto it = std::find(src_members.begin(), src_members.end(), m);
  src_members.erase(it);
  if (src_members.empty()) {
    const std::size_t pos = active_pos_[static_cast<std::size_t>(src)];
    active_[pos] = active_.back();
    active_pos_[static_cast<std::size_t>(active_.back())] = pos;
    active_.pop_back();
    free_.push_back(src);
  }

  int target = dst;
  if (target == kNewEntity) {
    if (!free_.empty()) {
      target = free_.back();
      free_.pop_back();
    } else {
      target = static_cast<int>(members_.size());
      members_.emplace_back();
      active_pos_.push_back(0);
    }
    active_pos_[static_cast<std::size_t>(target)] = active_.size();
    active_.push_back(target);
  }
  members_[static_cast<std::size_t>(target)].push_back(m);
  entity_of_[m] = target;
  return target;
}

bool CorefState::check_consistent() const {
  std::size_t covered = 0;
  std::vector<bool> is_active(members_.size(), false);
  for (std::size_t pos = 0; pos < active_.size(); ++pos) {
    const int e = active_[pos];
    if (e < 0 || static_cast<std::size_t>(e) >= members_.size()) return false;
    if (is_active[static_cast<std::size_t>(e)]) return false;
    is_active[static_cast<std::size_t>(e)] = true;
    if (active_pos_[static_cast<std::size_t>(e)] != pos) return false;
    if (members_[static_cast<std::size_t>(e)].empty()) return false;
  }
  for (std::size_t e = 0; e < members_.size(); ++e) {
    if (!is_active[e] && !members_[e].empty()) return false;
    for (const std::size_t m : members_[e]) {
      if (m >= entity_of_.size()) return false;
      if (entity_of_[m] != static_cast<int>(e)) return false;
      ++covered;
    }
  }
  return covered == entity_of_.size();
}

double FeatureDelta::dot(const WeightVector& w) const {
  double s = 0.0;
  for (int i = 0; i < kPairFeatureCount; ++i) {
    s += plus[static_cast<std::size_t>(i)] * w.plus[static_cast<std::size_t>(i)];
    s += minus[static_cast<std::size_t>(i)] *
         w.minus[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < kEntityFeatureCount; ++i)
    s += entity[static_cast<std::size_t>(i)] *
         w.entity[static_cast<std::size_t>(i)];
  return s;
}

double FeatureDelta::norm2() const {
  double s = 0.0;
  for (const double v : plus) s += v * v;
  for (const double v : minus) s += v * v;
  for (const double v : entity) s += v * v;
  return s;
}

namespace {

void check_move(const CorefState& state, std::size_t m, int dst) {
  if (m >= state.mention_count())
    throw UsageError("move: unknown mention index");
  if (dst == state.entity_of(m))
    throw UsageError("move: destination is the source entity");
  if (dst != CorefState::kNewEntity) state.members(dst);  // validates dst
}

}  // namespace

FeatureDelta move_feature_delta(const CorefState& state, std::size_t m,
                                int dst, PairFeatureCache& cache) {
  check_move(state, m, dst);
  FeatureDelta d;
  const int src = state.entity_of(m);
  const std::vector<std::size_t>& src_members = state.members(src);
  for (const std::size_t u : src_members) {
    if (u == m) continue;
    for (const int id : cache.get(m, u).active()) {
      d.plus[static_cast<std::size_t>(id)] -= 1.0;
      d.minus[static_cast<std::size_t>(id)] += 1.0;
    }
  }
  std::size_t dst_size = 0;
  if (dst != CorefState::kNewEntity) {
    const std::vector<std::size_t>& dst_members = state.members(dst);
    dst_size = dst_members.size();
    for (const std::size_t v : dst_members) {
      for (const int id : cache.get(m, v).active()) {
        d.minus[static_cast<std::size_t>(id)] -= 1.0;
        d.plus[static_cast<std::size_t>(id)] += 1.0;
      }
    }
  }
  const std::size_t src_size = src_members.size();
  const auto add_entity = [&d](std::size_t size, double sign) {
    if (size == 0) return;
    const auto f = entity_features(size);
    for (int i = 0; i < kEntityFeatureCount; ++i)
      d.entity[static_cast<std::size_t>(i)] +=
          sign * f[static_cast<std::size_t>(i)];
  };
  add_entity(src_size, -1.0);
  add_entity(src_size - 1, 1.0);
  add_entity(dst_size, -1.0);
  add_entity(dst_size + 1, 1.0);
  return d;
}

double move_delta(const CorefState& state, std::size_t m, int dst,
                  const WeightVector& w, PairFeatureCache& cache) {
  check_move(state, m, dst);
  double delta = 0.0;
  const int src = state.entity_of(m);
  const std::vector<std::size_t>& src_members = state.members(src);
  for (const std::size_t u : src_members) {
    if (u == m) continue;
    const PairFeatures& f = cache.get(m, u);
    delta += w.pair_score(f, false) - w.pair_score(f, true);
  }
  std::size_t dst_size = 0;
  if (dst != CorefState::kNewEntity) {
    const std::vector<std::size_t>& dst_members = state.members(dst);
    dst_size = dst_members.size();
    for (const std::size_t v : dst_members) {
      const PairFeatures& f = cache.get(m, v);
      delta += w.pair_score(f, true) - w.pair_score(f, false);
    }
  }
  const std::size_t src_size = src_members.size();
  delta -= w.entity_score(src_size);
  if (src_size > 1) delta += w.entity_score(src_size - 1);
  if (dst_size > 0) delta -= w.entity_score(dst_size);
  delta += w.entity_score(dst_size + 1);
  return delta;
}

double model_log_score(const MentionTable& table, const CorefState& state,
                       const WeightVector& w) {
  if (state.mention_count() != table.size())
    throw UsageError("model_log_score: state does not cover the table");
  double score = 0.0;
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const PairFeatures f = pair_features(table, i, j);
      score += w.pair_score(f, state.entity_of(i) == state.entity_of(j));
    }
  for (const int e : state.active_entities())
    score += w.entity_score(state.members(e).size());
  return score;
}

double model_log_score(const MentionTable& table, const Clustering& clustering,
                       const WeightVector& w) {
  return model_log_score(table, CorefState::from_clustering(table, clustering),
                         w);
}

}  // namespace xdoc
