#ifndef RULETAG_METRICS_HPP
#define RULETAG_METRICS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ruletag/corpus.hpp"

namespace ruletag {

struct LabelScore {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  size_t support = 0;
  size_t tp = 0, fp = 0, fn = 0;
};

// Token-level scores with the `other` tag excluded from all aggregates.
struct EvalReport {
  double micro_f1 = 0.0, macro_f1 = 0.0;
  double precision = 0.0, recall = 0.0;
  size_t tp = 0, fp = 0, fn = 0;
  std::map<int, LabelScore> per_label;  // every non-other label in the tag set
  std::set<int> tail_labels;
  std::optional<double> tail_micro_f1;
  TagSet tags;
};

inline double f1_of(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

// Token-level scoring. `other` is excluded from TP/FP/FN: predicting other
// where gold is a label counts FN, predicting a label where gold is other
// counts FP. Macro averages over non-other labels present in gold.
inline EvalReport evaluate(const std::vector<int>& gold, const std::vector<int>& pred,
                           const TagSet& tags) {
  if (gold.size() != pred.size())
    throw DataError("evaluate: gold has " + std::to_string(gold.size()) + " tokens, pred has " +
                    std::to_string(pred.size()));
  EvalReport rep;
  rep.tags = tags;
  int other = tags.other_index();
  for (int id = 0; id < static_cast<int>(tags.size()); ++id)
    if (id != other) rep.per_label[id] = LabelScore{};

  for (size_t i = 0; i < gold.size(); ++i) {
    int g = gold[i], p = pred[i];
    if (g != other) ++rep.per_label.at(g).support;
    if (g == p) {
      if (g != other) {
        ++rep.tp;
        ++rep.per_label.at(g).tp;
      }
      continue;
    }
    if (g != other) {
      ++rep.fn;
      ++rep.per_label.at(g).fn;
    }
    if (p != other) {
      ++rep.fp;
      ++rep.per_label.at(p).fp;
    }
  }

  rep.precision = rep.tp + rep.fp > 0 ? static_cast<double>(rep.tp) / static_cast<double>(rep.tp + rep.fp) : 0.0;
  rep.recall = rep.tp + rep.fn > 0 ? static_cast<double>(rep.tp) / static_cast<double>(rep.tp + rep.fn) : 0.0;
  rep.micro_f1 = f1_of(rep.precision, rep.recall);

  double macro_sum = 0.0;
  size_t macro_n = 0;
  for (auto& [id, s] : rep.per_label) {
    s.precision = s.tp + s.fp > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp) : 0.0;
    s.recall = s.tp + s.fn > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn) : 0.0;
    s.f1 = f1_of(s.precision, s.recall);
    if (s.support > 0) {
      macro_sum += s.f1;
      ++macro_n;
    }
  }
  rep.macro_f1 = macro_n > 0 ? macro_sum / static_cast<double>(macro_n) : 0.0;
  return rep;
}

// Least-frequent non-other labels whose cumulative training count stays
// within budget * total. Ascending by count, ties broken by tag id.
// With count_sentences the unit is sentences containing the label.
inline std::set<int> select_tail_labels(const std::vector<Sentence>& train, const TagSet& tags,
                                        double budget = 0.05, bool count_sentences = false) {
  if (budget <= 0.0 || budget > 1.0) throw ConfigError("tail budget must be in (0,1]");
  int other = tags.other_index();
  std::map<int, size_t> counts;
  for (int id = 0; id < static_cast<int>(tags.size()); ++id)
    if (id != other) counts[id] = 0;

  if (count_sentences) {
    for (const auto& s : train) {
      std::set<int> present;
      for (const auto& tok : s.tokens)
        if (tok.gold_tag != other) present.insert(tok.gold_tag);
      for (int id : present) ++counts[id];
    }
  } else {
    for (const auto& s : train)
      for (const auto& tok : s.tokens)
        if (tok.gold_tag != other) ++counts[tok.gold_tag];
  }

  size_t total = 0;
  for (const auto& [id, c] : counts) total += c;
  if (total == 0) throw DataError("select_tail_labels: no non-other tokens in train");

  std::vector<std::pair<size_t, int>> order;
  for (const auto& [id, c] : counts) order.emplace_back(c, id);
  std::sort(order.begin(), order.end());

  std::set<int> tail;
  double threshold = budget * static_cast<double>(total);
  size_t cum = 0;
  for (const auto& [c, id] : order) {
    if (static_cast<double>(cum + c) > threshold) break;
    cum += c;
    tail.insert(id);
  }
  return tail;
}

// Micro-F1 with TP/FP/FN restricted to the tail label set.
inline double tail_micro_f1(const std::vector<int>& gold, const std::vector<int>& pred,
                            const std::set<int>& tail) {
  if (tail.empty()) throw DataError("tail_micro_f1: empty tail set");
  if (gold.size() != pred.size()) throw DataError("tail_micro_f1: length mismatch");
  size_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    bool g_tail = tail.count(gold[i]) > 0;
    bool p_tail = tail.count(pred[i]) > 0;
    if (g_tail && gold[i] == pred[i]) {
      ++tp;
      continue;
    }
    if (g_tail && gold[i] != pred[i]) ++fn;
    if (p_tail && gold[i] != pred[i]) ++fp;
  }
  double precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  double recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  return f1_of(precision, recall);
}

inline void attach_tail(EvalReport& rep, const std::vector<int>& gold,
                        const std::vector<int>& pred, const std::set<int>& tail) {
  rep.tail_labels = tail;
  rep.tail_micro_f1 = tail.empty() ? std::optional<double>{}
                                   : std::optional<double>{tail_micro_f1(gold, pred, tail)};
}

struct RunComparison {
  std::set<int> improved, equal, worse;
};

// Partitions non-other labels by per-label F1: candidate vs baseline.
inline RunComparison compare_runs(const EvalReport& baseline, const EvalReport& candidate) {
  if (!(baseline.tags == candidate.tags))
    throw DataError("compare_runs: reports use different tag sets");
  RunComparison out;
  for (const auto& [id, base] : baseline.per_label) {
    double b = base.f1;
    double c = candidate.per_label.at(id).f1;
    if (c > b)
      out.improved.insert(id);
    else if (c < b)
      out.worse.insert(id);
    else
      out.equal.insert(id);
  }
  return out;
}

// Flattened gold tags over a sentence range, aligned with prediction order.
inline std::vector<int> flatten_gold(const std::vector<Sentence>& sentences) {
  std::vector<int> out;
  for (const auto& s : sentences)
    for (const auto& tok : s.tokens) out.push_back(tok.gold_tag);
  return out;
}

}  // namespace ruletag

#endif  // RULETAG_METRICS_HPP
