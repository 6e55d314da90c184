#ifndef RULETAG_ABLATION_HPP
#define RULETAG_ABLATION_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ruletag/metrics.hpp"
#include "ruletag/model.hpp"

namespace ruletag {

struct AblationCell {
  Variant variant;
  int percent;
  uint64_t seed;
  EvalReport report;
  size_t train_size = 0;
  uint64_t train_fingerprint = 0;  // order-independent hash of the train sentences
};

struct AblationMedian {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> tail_micro_f1;
};

struct AblationGrid {
  std::vector<AblationCell> cells;
  // keyed by (variant letter, percent), medians over seeds
  std::map<std::pair<char, int>, AblationMedian> medians;
};

inline uint64_t sentence_fingerprint(const Sentence& s) {
  uint64_t h = fnv1a(std::to_string(s.doc_id));
  for (const auto& tok : s.tokens) h = splitmix64(h ^ fnv1a(tok.surface));
  return h;
}

inline uint64_t corpus_fingerprint(const std::vector<Sentence>& sentences) {
  uint64_t sum = 0;
  for (const auto& s : sentences) sum += sentence_fingerprint(s);
  return sum;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// The full experimental grid: for every (variant, percent, seed) the train
// split is subsampled, a model is trained, and the fixed test split is
// scored. Tail labels are selected once from the full train split so tail
// scores stay comparable across training sizes.
inline AblationGrid run_ablation(const CorpusSplit& split, const TagSet& tags,
                                 const DictionarySet* dicts, EmbeddingStore& store,
                                 const VariantConfig& base, const OptimizerConfig& optimizer,
                                 size_t epochs, const std::vector<Variant>& variants,
                                 const std::vector<int>& percents,
                                 const std::vector<uint64_t>& seeds, double tail_budget = 0.05) {
  if (variants.empty() || percents.empty() || seeds.empty())
    throw ConfigError("ablation grid needs variants, percents and seeds");

  std::set<int> tail = select_tail_labels(split.train, tags, tail_budget);
  std::vector<int> gold_test = flatten_gold(split.test);

  AblationGrid grid;
  for (Variant v : variants) {
    VariantConfig vc = base;
    vc.variant = v;

    std::vector<std::vector<RuleVector>> rv_test;
    EmbeddingStore* sim_store = vc.rules.match_mode == MatchMode::similarity ? &store : nullptr;
    if (vc.needs_rules()) {
      if (dicts == nullptr) throw ConfigError("ablation over rule variants needs dictionaries");
      rv_test = detail::rule_vectors_for(split.test, *dicts, vc.rules, tags, sim_store);
    }

    for (int percent : percents) {
      for (uint64_t seed : seeds) {
        CorpusSplit sub = subsample_train(split, percent, seed);
        TrainResult tr = train(vc, optimizer, epochs, sub, tags, dicts, store, seed);

        std::vector<int> pred;
        for (size_t i = 0; i < split.test.size(); ++i) {
          auto p = tr.model.predict(split.test[i], vc.needs_rules() ? &rv_test[i] : nullptr);
          pred.insert(pred.end(), p.begin(), p.end());
        }
        AblationCell cell;
        cell.variant = v;
        cell.percent = percent;
        cell.seed = seed;
        cell.report = evaluate(gold_test, pred, tags);
        attach_tail(cell.report, gold_test, pred, tail);
        cell.train_size = sub.train.size();
        cell.train_fingerprint = corpus_fingerprint(sub.train);
        grid.cells.push_back(std::move(cell));
      }
    }
  }

  for (Variant v : variants) {
    for (int percent : percents) {
      std::vector<double> micro, macro, tail_scores;
      for (const auto& c : grid.cells) {
        if (c.variant != v || c.percent != percent) continue;
        micro.push_back(c.report.micro_f1);
        macro.push_back(c.report.macro_f1);
        if (c.report.tail_micro_f1) tail_scores.push_back(*c.report.tail_micro_f1);
      }
      AblationMedian m;
      m.micro_f1 = median_of(micro);
      m.macro_f1 = median_of(macro);
      if (!tail_scores.empty()) m.tail_micro_f1 = median_of(tail_scores);
      grid.medians.emplace(std::make_pair(variant_letter(v), percent), m);
    }
  }
  return grid;
}

}  // namespace ruletag

#endif  // RULETAG_ABLATION_HPP
