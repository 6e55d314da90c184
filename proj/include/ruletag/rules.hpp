#ifndef RULETAG_RULES_HPP
#define RULETAG_RULES_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ruletag/corpus.hpp"
#include "ruletag/embeddings.hpp"

namespace ruletag {

// Per-tag synonym word sets plus one negative word set. Immutable after
// compile_dictionaries; keyed by tag id, never by the `other` tag.
struct DictionarySet {
  std::map<int, std::unordered_set<std::string>> synonyms;
  std::unordered_set<std::string> negative;
  bool case_folded = true;

  bool empty() const { return synonyms.empty() && negative.empty(); }
};

enum class MatchMode { exact, similarity };

inline const char* match_mode_name(MatchMode m) {
  return m == MatchMode::exact ? "exact" : "similarity";
}

inline MatchMode match_mode_from_name(const std::string& s) {
  if (s == "exact") return MatchMode::exact;
  if (s == "similarity") return MatchMode::similarity;
  throw ConfigError("unknown match mode '" + s + "'");
}

// Whether the negative dictionary knocks out the whole sentence or only
// the matching token itself.
enum class NegativeScope { sentence, token };

struct RuleConfig {
  size_t window = 2;  // half-width l; the window is {w_{i-l} .. w_{i+l}}
  MatchMode match_mode = MatchMode::exact;
  double similarity_threshold = 0.7;
  bool case_fold = true;
  NegativeScope negative_scope = NegativeScope::sentence;
};

// Multi-hot tag mask over the full tag set (labels + other).
struct RuleVector {
  std::vector<uint8_t> bits;

  explicit RuleVector(size_t n = 0) : bits(n, 0) {}

  size_t size() const { return bits.size(); }
  bool test(size_t i) const { return bits[i] != 0; }
  void set(size_t i) { bits[i] = 1; }

  size_t count() const {
    size_t c = 0;
    for (uint8_t b : bits) c += b;
    return c;
  }

  bool other_only(const TagSet& tags) const {
    for (size_t i = 0; i < bits.size(); ++i) {
      bool want = (static_cast<int>(i) == tags.other_index());
      if ((bits[i] != 0) != want) return false;
    }
    return true;
  }

  bool operator==(const RuleVector& o) const { return bits == o.bits; }
};

inline DictionarySet compile_dictionaries(
    const std::map<std::string, std::vector<std::string>>& raw,
    const std::vector<std::string>& negative, const TagSet& tags, bool case_fold = true) {
  DictionarySet out;
  out.case_folded = case_fold;
  for (const auto& [name, words] : raw) {
    int id = tags.id_of(name);
    if (id < 0) throw DataError("dictionary tag '" + name + "' not in tag set");
    if (tags.is_other(id))
      throw DataError("dictionary may not be keyed by the reserved other tag");
    auto& set = out.synonyms[id];
    for (const auto& w : words) {
      if (w.empty()) throw DataError("empty word in dictionary for tag '" + name + "'");
      set.insert(case_fold ? fold_case(w) : w);
    }
  }
  for (const auto& w : negative) {
    if (w.empty()) throw DataError("empty word in negative dictionary");
    out.negative.insert(case_fold ? fold_case(w) : w);
  }
  return out;
}

namespace detail {

// Similarity matching compares a window word against every dictionary
// entry by embedding cosine. Zero-norm vectors never match.
class Matcher {
 public:
  Matcher(const RuleConfig& config, EmbeddingStore* store) : config_(config), store_(store) {
    if (config.match_mode == MatchMode::similarity && store == nullptr)
      throw ConfigError("similarity matching requires an embedding store");
  }

  bool matches(const std::string& word, const std::unordered_set<std::string>& dict) const {
    if (config_.match_mode == MatchMode::exact) return dict.count(word) > 0;
    for (const auto& entry : dict)
      if (cosine(word, entry) >= config_.similarity_threshold) return true;
    return false;
  }

 private:
  double cosine(const std::string& a, const std::string& b) const {
    auto va = store_->lookup(a);
    auto vb = store_->lookup(b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < va.size(); ++i) {
      dot += va[i] * vb[i];
      na += va[i] * va[i];
      nb += vb[i] * vb[i];
    }
    if (na < 1e-24 || nb < 1e-24) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
  }

  const RuleConfig& config_;
  EmbeddingStore* store_;
};

}  // namespace detail

// Rule-vector construction, one vector per token:
//   1. a negative-dictionary hit forces other-only (whole sentence under
//      NegativeScope::sentence, the matching token under ::token),
//   2. otherwise bit t is set when any word in the clamped window
//      {w_{i-l} .. w_{i+l}} matches the synonym set of tag t,
//   3. tokens with no tag fired get the other bit.
// Pure function of (sentence, dicts, config, store).
inline std::vector<RuleVector> apply_rules(const Sentence& sentence, const DictionarySet& dicts,
                                           const RuleConfig& config, const TagSet& tags,
                                           EmbeddingStore* store = nullptr) {
  detail::Matcher matcher(config, store);
  size_t n = sentence.size();
  int other = tags.other_index();

  std::vector<std::string> words(n);
  for (size_t i = 0; i < n; ++i)
    words[i] = config.case_fold ? fold_case(sentence.tokens[i].surface)
                                : sentence.tokens[i].surface;

  std::vector<RuleVector> out(n, RuleVector(tags.size()));

  bool sentence_negated = false;
  std::vector<bool> token_negated(n, false);
  if (!dicts.negative.empty()) {
    for (size_t i = 0; i < n; ++i) {
      if (matcher.matches(words[i], dicts.negative)) {
        token_negated[i] = true;
        sentence_negated = true;
      }
    }
  }

  for (size_t i = 0; i < n; ++i) {
    RuleVector& rv = out[i];
    bool negated = config.negative_scope == NegativeScope::sentence ? sentence_negated
                                                                    : token_negated[i];
    if (negated) {
      rv.set(static_cast<size_t>(other));
      continue;
    }
    bool fired = false;
    size_t lo = i >= config.window ? i - config.window : 0;
    size_t hi = std::min(n - 1, i + config.window);
    for (const auto& [tag, dict] : dicts.synonyms) {
      for (size_t j = lo; j <= hi; ++j) {
        if (matcher.matches(words[j], dict)) {
          rv.set(static_cast<size_t>(tag));
          fired = true;
          break;
        }
      }
    }
    if (!fired) rv.set(static_cast<size_t>(other));
  }
  return out;
}

// Diagnostic baseline: rules without any learner. Lowest-indexed set bit
// wins; other-only vectors yield other.
inline std::vector<int> rule_only_predict(const std::vector<RuleVector>& vectors) {
  std::vector<int> out;
  out.reserve(vectors.size());
  for (const auto& rv : vectors) {
    int pick = -1;
    for (size_t i = 0; i < rv.size(); ++i) {
      if (rv.test(i)) {
        pick = static_cast<int>(i);
        break;
      }
    }
    out.push_back(pick);
  }
  return out;
}

}  // namespace ruletag

#endif  // RULETAG_RULES_HPP
