// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#include "xdoc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "xdoc/errors.hpp"
#include "xdoc/io.hpp"
#include "xdoc/rng.hpp"

namespace xdoc {

namespace {

struct NamePair {
  const char* full;
  const char* alternate;
};

constexpr NamePair kVariantFirsts[] = {
    {"robert", "bob"},    {"richard", "dick"},  {"william", "bill"},
    {"elizabeth", "liz"}, {"margaret", "peggy"}, {"james", "jim"},
    {"katherine", "kate"}, {"michael", "mike"},  {"thomas", "tom"},
    {"charles", "chuck"}};

constexpr const char* kPlainFirsts[] = {
    "alice",  "david",  "emma",    "frank",  "grace",   "henry",
    "irene",  "jack",   "karen",   "laura",  "martin",  "nancy",
    "oliver", "paula",  "quentin", "rachel", "samuel",  "teresa",
    "ursula", "victor", "wendy",   "xavier", "yolanda", "zachary"};

constexpr const char* kLastNames[] = {
    "smith",  "jones",    "brown",    "taylor",   "wilson",  "davis",
    "clark",  "hall",     "lewis",    "young",    "walker",  "allen",
    "king",   "wright",   "scott",    "green",    "baker",   "adams",
    "nelson", "hill",     "ramirez",  "campbell", "mitchell", "roberts",
    "carter", "phillips", "evans",    "turner",   "torres",  "parker"};

constexpr const char* kQualifiers[] = {"politician", "musician", "athlete",
                                       "scientist",  "author",   "actor",
                                       "judge",      "economist"};

constexpr const char* kNoiseWords[] = {"meeting", "report", "city",
                                       "press",   "office", "week",
                                       "program", "public", "statement",
                                       "schedule"};

constexpr const char* kLeadWords[] = {"yesterday", "officials", "sources",
                                      "reporters", "analysts"};

std::string title_case(std::string_view word) {
  std::string out(word);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

struct Person {
  int index = 0;  // global, offset applied
  std::string first;
  std::string alternate;  // empty when absent
  std::string last;
  std::string title;  // KB page title
  std::vector<std::string> signature;

  std::string canonical() const {
    return title_case(first) + " " + title_case(last);
  }
  std::string alternate_full() const {
    return title_case(alternate) + " " + title_case(last);
  }
};

template <typename T, std::size_t N>
constexpr std::size_t array_size(const T (&)[N]) {
  return N;
}

}  // namespace

SynthCorpus make_synth_corpus(const SynthConfig& cfg) {
  if (cfg.entities < 1 || cfg.mentions < 1)
    throw UsageError("synth: entities and mentions must be >= 1");
  const int pair_count = static_cast<int>(
      std::lround(cfg.entities * cfg.same_name_fraction / 2.0));
  const int variant_count =
      static_cast<int>(std::lround(cfg.entities * cfg.variant_fraction));

  std::vector<Person> persons;
  persons.reserve(static_cast<std::size_t>(cfg.entities));
  const std::size_t n_variant_pool = array_size(kVariantFirsts);
  const std::size_t n_plain = array_size(kPlainFirsts);
  const std::size_t n_last = array_size(kLastNames);
  int next = 0;
  for (int p = 0; p < pair_count && next + 1 < cfg.entities + 1; ++p) {
    const NamePair& name =
        kVariantFirsts[static_cast<std::size_t>(p) % n_variant_pool];
    for (int twin = 0; twin < 2 && next < cfg.entities; ++twin) {
      Person person;
      person.index = next + cfg.entity_index_offset;
      person.first = name.full;
      person.alternate = name.alternate;
      person.last = kLastNames[static_cast<std::size_t>(p) % n_last];
      persons.push_back(std::move(person));
      ++next;
    }
  }
  for (int v = 0; v < variant_count && next < cfg.entities; ++v) {
    const NamePair& name =
        kVariantFirsts[static_cast<std::size_t>(pair_count + v) %
                       n_variant_pool];
    Person person;
    person.index = next + cfg.entity_index_offset;
    person.first = name.full;
    person.alternate = name.alternate;
    person.last =
        kLastNames[static_cast<std::size_t>(2 * pair_count + v) % n_last];
    persons.push_back(std::move(person));
    ++next;
  }
  for (int e = 0; next < cfg.entities; ++e) {
    Person person;
    person.index = next + cfg.entity_index_offset;
    person.first = kPlainFirsts[static_cast<std::size_t>(e) % n_plain];
    person.last = kLastNames[static_cast<std::size_t>(next) % n_last];
    persons.push_back(std::move(person));
    ++next;
  }

  for (Person& person : persons) {
    person.signature.reserve(static_cast<std::size_t>(cfg.signature_words));
    for (int j = 0; j < cfg.signature_words; ++j)
      person.signature.push_back("topic" + std::to_string(person.index) +
                                 "word" + std::to_string(j));
  }

  // Qualified titles wherever a canonical name is shared.
  std::map<std::string, std::vector<std::size_t>> by_canonical;
  for (std::size_t i = 0; i < persons.size(); ++i)
    by_canonical[persons[i].canonical()].push_back(i);
  const std::size_t n_qual = array_size(kQualifiers);
  for (const auto& [canonical, group] : by_canonical) {
    if (group.size() == 1) {
      persons[group[0]].title = canonical;
      continue;
    }
    for (std::size_t g = 0; g < group.size(); ++g) {
      std::string qualifier = kQualifiers[g % n_qual];
      if (g >= n_qual) qualifier += " " + std::to_string(g / n_qual);
      persons[group[g]].title = canonical + " (" + qualifier + ")";
    }
  }

  SynthCorpus corpus;
  Rng rng(cfg.seed);
  char id_buf[64];
  for (int d = 0; d < cfg.mentions; ++d) {
    const Person& person =
        persons[static_cast<std::size_t>(d % cfg.entities)];
    const bool use_alternate =
        !person.alternate.empty() && rng.bernoulli(cfg.variant_use_prob);
    const std::string surface =
        use_alternate ? person.alternate_full() : person.canonical();
    const int occurrences = 1 + static_cast<int>(rng.uniform_index(3));

    Document doc;
    std::snprintf(id_buf, sizeof id_buf, "%s-%05d", cfg.id_prefix.c_str(), d);
    doc.doc_id = id_buf;
    for (int occ = 0; occ < occurrences; ++occ) {
      doc.text += kLeadWords[rng.uniform_index(array_size(kLeadWords))];
      doc.text += ' ';
      const std::size_t begin = doc.text.size();
      doc.text += surface;
      doc.person_spans.push_back(Span{begin, doc.text.size()});
      for (int c = 0; c < cfg.context_words; ++c) {
        doc.text += ' ';
        doc.text += person.signature[rng.uniform_index(
            person.signature.size())];
      }
      for (int c = 0; c < cfg.noise_words; ++c) {
        doc.text += ' ';
        doc.text += kNoiseWords[rng.uniform_index(array_size(kNoiseWords))];
      }
      doc.text += ". ";
    }
    corpus.gold.assign(doc.doc_id + "#m0", "e" + std::to_string(person.index));
    corpus.documents.push_back(std::move(doc));
  }

  // KB: one page per person; alternate and shared surfaces resolve through
  // redirects and disambiguation pages.
  std::map<std::string, std::string> pages;
  for (const Person& person : persons) {
    std::string text;
    for (const std::string& word : person.signature)
      for (int r = 0; r < 3; ++r) {
        text += word;
        text += ' ';
      }
    text += person.first + " " + person.last +
            " biography notable career public figure";
    pages.emplace(person.title, std::move(text));
  }
  std::map<std::string, std::set<std::string>> surface_titles;
  for (const Person& person : persons) {
    surface_titles[person.canonical()].insert(person.title);
    if (!person.alternate.empty())
      surface_titles[person.alternate_full()].insert(person.title);
  }
  std::map<std::string, std::string> redirects;
  std::map<std::string, std::vector<std::string>> disambigs;
  for (const auto& [surface, titles] : surface_titles) {
    if (titles.size() == 1) {
      if (*titles.begin() != surface) redirects.emplace(surface, *titles.begin());
    } else {
      disambigs.emplace(surface,
                        std::vector<std::string>(titles.begin(), titles.end()));
    }
  }
  corpus.pages.assign(pages.begin(), pages.end());
  corpus.redirects.assign(redirects.begin(), redirects.end());
  corpus.disambigs.assign(disambigs.begin(), disambigs.end());
  return corpus;
}

void write_synth_corpus(const SynthCorpus& corpus,
                        const std::string& documents_path,
                        const std::string& gold_path,
                        const std::string& redirects_path,
                        const std::string& disambig_path,
                        const std::string& pages_path) {
  write_documents(documents_path, corpus.documents);
  write_pairs_tsv(gold_path, std::map<std::string, std::string>(
                                 corpus.gold.assignment().begin(),
                                 corpus.gold.assignment().end()));
  {
    std::ofstream out(redirects_path);
    if (!out) throw DataError(redirects_path + ": cannot open for writing");
    for (const auto& [source, target] : corpus.redirects)
      out << source << '\t' << target << '\n';
  }
  {
    std::ofstream out(disambig_path);
    if (!out) throw DataError(disambig_path + ": cannot open for writing");
    for (const auto& [title, members] : corpus.disambigs) {
      out << title << '\t';
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0) out << '|';
        out << members[i];
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(pages_path);
    if (!out) throw DataError(pages_path + ": cannot open for writing");
    for (const auto& [title, text] : corpus.pages) {
      nlohmann::json j;
      j["title"] = title;
      j["text"] = text;
      out << j.dump() << '\n';
    }
  }
}

}  // namespace xdoc
