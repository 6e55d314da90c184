#ifndef RULETAG_CORPUS_HPP
#define RULETAG_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ruletag/common.hpp"

namespace ruletag {

// Closed label inventory. The reserved `other` tag is rendered "O" on disk.
// Ids are assigned first-seen while parsing and persisted in checkpoints,
// so id order never matters across runs.
class TagSet {
 public:
  static constexpr const char* kOtherName = "O";

  TagSet() = default;

  static TagSet from_names(std::vector<std::string> names) {
    TagSet t;
    for (auto& n : names) t.add(n);
    t.ensure_other();
    return t;
  }

  // Adds a tag if unseen, returns its id.
  int add(const std::string& name) {
    if (name.empty()) throw DataError("empty tag name");
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    if (name == kOtherName) other_ = id;
    return id;
  }

  void ensure_other() {
    if (other_ < 0) other_ = add(kOtherName);
  }

  int id_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }
  const std::vector<std::string>& names() const { return names_; }
  size_t size() const { return names_.size(); }
  int other_index() const { return other_; }
  bool is_other(int id) const { return id == other_; }

  bool operator==(const TagSet& o) const {
    return names_ == o.names_ && other_ == o.other_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  int other_ = -1;
};

struct Token {
  std::string surface;
  int gold_tag = 0;
};

struct Sentence {
  uint64_t doc_id = 0;
  std::vector<Token> tokens;

  size_t size() const { return tokens.size(); }
};

struct SplitProvenance {
  std::array<double, 3> fractions{0.7, 0.1, 0.2};
  uint64_t seed = 0;
  int percent = 100;  // train subsample applied after splitting
};

struct CorpusSplit {
  std::vector<Sentence> train, val, test;
  SplitProvenance provenance;
};

struct ParsedCorpus {
  std::vector<Sentence> sentences;
  TagSet tags;
};

// Reads the three-column layout: `token SEP doc_id SEP TAG`, any run of
// horizontal whitespace as separator, blank line between sentences.
inline ParsedCorpus parse_corpus(std::istream& in) {
  ParsedCorpus out;
  std::string line;
  Sentence current;
  bool current_open = false;
  size_t line_no = 0;

  auto flush = [&] {
    if (current_open) {
      out.sentences.push_back(std::move(current));
      current = Sentence{};
      current_open = false;
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      flush();
      continue;
    }
    auto cols = split_whitespace(line);
    if (cols.size() != 3)
      throw DataError("line " + std::to_string(line_no) + ": expected 3 columns, got " +
                      std::to_string(cols.size()));
    uint64_t doc;
    try {
      doc = parse_doc_id(cols[1]);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!current_open) {
      current.doc_id = doc;
      current_open = true;
    } else if (current.doc_id != doc) {
      throw DataError("line " + std::to_string(line_no) + ": doc id changes mid-sentence (" +
                      std::to_string(current.doc_id) + " -> " + std::to_string(doc) + ")");
    }
    int tag = out.tags.add(cols[2]);
    current.tokens.push_back(Token{cols[0], tag});
  }
  flush();
  if (out.sentences.empty()) throw DataError("empty corpus: no sentences found");
  out.tags.ensure_other();
  return out;
}

// Writes the same layout back: single tab as separator, one blank line
// between sentences. parse_corpus(serialize_corpus(x)) == x.
inline void serialize_corpus(const std::vector<Sentence>& sentences, const TagSet& tags,
                             std::ostream& out) {
  bool first = true;
  for (const auto& s : sentences) {
    if (!first) out << '\n';
    first = false;
    for (const auto& tok : s.tokens)
      out << tok.surface << '\t' << s.doc_id << '\t' << tags.name(tok.gold_tag) << '\n';
  }
}

// Collapses B-/I- prefixes: B-X and I-X both become X, O stays O.
// Adjacency information is deliberately lost.
inline std::vector<std::string> iob_to_to(const std::vector<std::string>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const auto& t : tags) {
    if (t == TagSet::kOtherName) {
      out.push_back(t);
    } else if (t.size() > 2 && (t[0] == 'B' || t[0] == 'I') && t[1] == '-') {
      out.push_back(t.substr(2));
    } else {
      throw DataError("tag '" + t + "' is not B-/I- prefixed and not O");
    }
  }
  return out;
}

// First-seen unique surfaces across a sentence range.
inline std::vector<std::string> collect_vocabulary(const std::vector<const std::vector<Sentence>*>& groups) {
  std::vector<std::string> vocab;
  std::unordered_set<std::string> seen;
  for (const auto* g : groups)
    for (const auto& s : *g)
      for (const auto& tok : s.tokens)
        if (seen.insert(tok.surface).second) vocab.push_back(tok.surface);
  return vocab;
}

// Document-level split: documents are shuffled by a seeded RNG and then
// partitioned by document count, so no doc_id ever crosses splits.
inline CorpusSplit split_corpus(const std::vector<Sentence>& sentences,
                                std::array<double, 3> fractions, uint64_t seed) {
  double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("split fractions must sum to 1, got " + std::to_string(sum));
  for (double f : fractions)
    if (f < 0.0) throw ConfigError("split fractions must be non-negative");

  std::vector<uint64_t> docs;
  std::unordered_set<uint64_t> seen;
  for (const auto& s : sentences)
    if (seen.insert(s.doc_id).second) docs.push_back(s.doc_id);
  if (docs.size() < 3)
    throw DataError("need at least 3 distinct doc ids, got " + std::to_string(docs.size()));

  std::mt19937_64 rng(seed);
  std::shuffle(docs.begin(), docs.end(), rng);

  size_t n = docs.size();
  size_t n_train = static_cast<size_t>(std::floor(fractions[0] * static_cast<double>(n) + 1e-9));
  size_t n_val = static_cast<size_t>(std::floor(fractions[1] * static_cast<double>(n) + 1e-9));
  if (n_train + n_val > n) n_val = n - n_train;

  std::unordered_map<uint64_t, int> part;  // 0 train, 1 val, 2 test
  for (size_t i = 0; i < n; ++i) part[docs[i]] = i < n_train ? 0 : (i < n_train + n_val ? 1 : 2);

  CorpusSplit out;
  out.provenance.fractions = fractions;
  out.provenance.seed = seed;
  for (const auto& s : sentences) {
    switch (part.at(s.doc_id)) {
      case 0: out.train.push_back(s); break;
      case 1: out.val.push_back(s); break;
      default: out.test.push_back(s); break;
    }
  }
  return out;
}

// Keeps the first ceil(percent/100 * |train|) sentences of a seeded shuffle
// of train. Prefixes of one shuffle, so subsets nest across percents.
inline CorpusSplit subsample_train(const CorpusSplit& split, int percent, uint64_t seed) {
  if (percent != 20 && percent != 40 && percent != 60 && percent != 80 && percent != 100)
    throw ConfigError("percent must be one of {20,40,60,80,100}, got " + std::to_string(percent));
  CorpusSplit out = split;
  out.provenance.percent = percent;
  if (percent == 100) return out;

  std::vector<size_t> order(split.train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  size_t keep = static_cast<size_t>(
      std::ceil(static_cast<double>(percent) / 100.0 * static_cast<double>(split.train.size())));
  out.train.clear();
  out.train.reserve(keep);
  for (size_t i = 0; i < keep; ++i) out.train.push_back(split.train[order[i]]);
  return out;
}

}  // namespace ruletag

#endif  // RULETAG_CORPUS_HPP
