#ifndef RULETAG_SYNTHETIC_HPP
#define RULETAG_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ruletag/corpus.hpp"
#include "ruletag/rules.hpp"

namespace ruletag {

// Desk-scale stand-in for a tagged disaster corpus. Each sentence carries one
// planted trigger word (tag determined by the word), optionally one context
// argument word that is only an argument right after a trigger, and hedging
// sentences whose gold collapses to all-other.
struct SyntheticConfig {
  size_t num_tags = 8;        // trigger tags, excluding other and the argument tag
  size_t num_sentences = 200;
  size_t vocab_size = 100;    // filler vocabulary
  double skew = 1.5;          // trigger-tag frequency decay exponent
  double negated_fraction = 0.1;
  uint64_t seed = 1;
};

struct SyntheticCorpus {
  std::vector<Sentence> sentences;
  TagSet tags;
  DictionarySet dicts;
};

namespace detail {

// Largest-remainder apportionment of `total` across strictly decreasing
// weights; resulting counts are non-increasing in rank.
inline std::vector<size_t> apportion(const std::vector<double>& weights, size_t total) {
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  std::vector<size_t> counts(weights.size());
  std::vector<std::pair<double, size_t>> remainders;
  size_t assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    double exact = static_cast<double>(total) * weights[i] / wsum;
    counts[i] = static_cast<size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(-(exact - std::floor(exact)), i);
  }
  std::sort(remainders.begin(), remainders.end());
  for (size_t j = 0; assigned < total; ++j, ++assigned) counts[remainders[j].second] += 1;
  return counts;
}

}  // namespace detail

inline SyntheticCorpus generate_synthetic(const SyntheticConfig& config, uint64_t seed) {
  if (config.num_tags < 2) throw ConfigError("synthetic corpus needs at least 2 tags");
  if (config.num_sentences < 10) throw ConfigError("synthetic corpus needs at least 10 sentences");
  if (config.vocab_size < 10) throw ConfigError("synthetic vocabulary must have at least 10 words");
  if (config.negated_fraction < 0.0 || config.negated_fraction > 1.0)
    throw ConfigError("negated fraction must be in [0,1]");
  if (config.skew < 0.0) throw ConfigError("skew must be non-negative");

  constexpr size_t kWordsPerTag = 3;
  constexpr size_t kSentencesPerDoc = 5;
  constexpr size_t kNegativeWords = 5;
  constexpr double kArgProbability = 0.35;
  constexpr double kContextFillerProbability = 0.15;

  SyntheticCorpus out;
  out.tags.add(TagSet::kOtherName);
  std::vector<int> trigger_tags(config.num_tags);
  char name[32];
  for (size_t t = 0; t < config.num_tags; ++t) {
    std::snprintf(name, sizeof(name), "EVT%02zu", t);
    trigger_tags[t] = out.tags.add(name);
  }
  int arg_tag = out.tags.add("CTX-ARG");

  // Planted vocabulary. Trigger words are unique per tag; context words are
  // arguments only in post-trigger position and fillers elsewhere.
  std::vector<std::vector<std::string>> trigger_words(config.num_tags);
  for (size_t t = 0; t < config.num_tags; ++t)
    for (size_t j = 0; j < kWordsPerTag; ++j) {
      std::snprintf(name, sizeof(name), "evt%02zuw%zu", t, j);
      trigger_words[t].push_back(name);
    }
  std::vector<std::string> fillers(config.vocab_size);
  for (size_t i = 0; i < config.vocab_size; ++i) {
    std::snprintf(name, sizeof(name), "fill%04zu", i);
    fillers[i] = name;
  }
  size_t num_context = std::max<size_t>(4, config.vocab_size / 10);
  std::vector<std::string> context_words(num_context);
  for (size_t i = 0; i < num_context; ++i) {
    std::snprintf(name, sizeof(name), "ctx%02zu", i);
    context_words[i] = name;
  }
  std::vector<std::string> negative_words(kNegativeWords);
  for (size_t i = 0; i < kNegativeWords; ++i) {
    std::snprintf(name, sizeof(name), "hedge%zu", i);
    negative_words[i] = name;
  }

  std::map<std::string, std::vector<std::string>> raw;
  for (size_t t = 0; t < config.num_tags; ++t)
    raw[out.tags.name(trigger_tags[t])] = trigger_words[t];
  out.dicts = compile_dictionaries(raw, negative_words, out.tags);

  // Tag frequencies follow weight (rank+1)^-skew, apportioned exactly so the
  // histogram over design rank is non-increasing.
  std::vector<double> weights(config.num_tags);
  for (size_t t = 0; t < config.num_tags; ++t)
    weights[t] = std::pow(static_cast<double>(t + 1), -config.skew);
  std::vector<size_t> tag_counts = detail::apportion(weights, config.num_sentences);

  std::vector<size_t> sentence_tag;
  for (size_t t = 0; t < config.num_tags; ++t)
    sentence_tag.insert(sentence_tag.end(), tag_counts[t], t);

  std::mt19937_64 rng(seed);
  std::shuffle(sentence_tag.begin(), sentence_tag.end(), rng);

  size_t num_negated = static_cast<size_t>(
      std::llround(config.negated_fraction * static_cast<double>(config.num_sentences)));
  std::vector<bool> negated(config.num_sentences, false);
  std::fill(negated.begin(), negated.begin() + static_cast<long>(num_negated), true);
  std::shuffle(negated.begin(), negated.end(), rng);

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (size_t s = 0; s < config.num_sentences; ++s) {
    size_t t = sentence_tag[s];
    Sentence sent;
    sent.doc_id = s / kSentencesPerDoc;

    std::uniform_int_distribution<size_t> len_dist(6, 12);
    size_t len = len_dist(rng);
    std::uniform_int_distribution<size_t> filler_dist(0, fillers.size() - 1);
    for (size_t i = 0; i < len; ++i) {
      std::string w = fillers[filler_dist(rng)];
      if (coin(rng) < kContextFillerProbability) {
        std::uniform_int_distribution<size_t> ctx_dist(0, context_words.size() - 1);
        w = context_words[ctx_dist(rng)];
      }
      sent.tokens.push_back(Token{w, out.tags.other_index()});
    }

    std::uniform_int_distribution<size_t> pos_dist(0, len - 1);
    size_t trigger_pos = pos_dist(rng);
    std::uniform_int_distribution<size_t> word_dist(0, kWordsPerTag - 1);
    sent.tokens[trigger_pos] =
        Token{trigger_words[t][word_dist(rng)], negated[s] ? out.tags.other_index() : trigger_tags[t]};

    if (coin(rng) < kArgProbability && trigger_pos + 1 < len) {
      std::uniform_int_distribution<size_t> ctx_dist(0, context_words.size() - 1);
      sent.tokens[trigger_pos + 1] = Token{context_words[ctx_dist(rng)],
                                           negated[s] ? out.tags.other_index() : arg_tag};
    }

    if (negated[s]) {
      // Keep the trigger word in place; only its gold collapses to other.
      std::uniform_int_distribution<size_t> neg_word(0, negative_words.size() - 1);
      size_t neg_pos = pos_dist(rng);
      if (neg_pos == trigger_pos) neg_pos = (neg_pos + 1) % len;
      sent.tokens[neg_pos] = Token{negative_words[neg_word(rng)], out.tags.other_index()};
    }

    out.sentences.push_back(std::move(sent));
  }
  return out;
}

}  // namespace ruletag

#endif  // RULETAG_SYNTHETIC_HPP
