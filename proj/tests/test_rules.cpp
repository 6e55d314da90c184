#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "ruletag/corpus.hpp"
#include "ruletag/rules.hpp"

using namespace ruletag;

namespace {

Sentence make_sentence(const std::vector<std::string>& words, uint64_t doc = 0) {
  Sentence s;
  s.doc_id = doc;
  for (const auto& w : words) s.tokens.push_back(Token{w, 0});
  return s;
}

TagSet quake_tags() {
  return TagSet::from_names({"O", "EARTHQUAKE", "MAGNITUDE-ARG", "PLACE-ARG", "TIME-ARG"});
}

// Direct nested-loop transcription of the rule-vector construction, no
// indexing, no early exits. Exact matching only.
std::vector<RuleVector> oracle_apply(const Sentence& sentence,
                                     const std::map<int, std::vector<std::string>>& synonyms,
                                     const std::vector<std::string>& negative, size_t l,
                                     const TagSet& tags) {
  size_t n = sentence.size();
  std::vector<RuleVector> out;
  for (size_t i = 0; i < n; ++i) {
    RuleVector r(tags.size());
    bool any_negative = false;
    for (size_t j = 0; j < n; ++j)
      for (const auto& neg : negative)
        if (sentence.tokens[j].surface == neg) any_negative = true;
    if (any_negative) {
      r.set(static_cast<size_t>(tags.other_index()));
      out.push_back(r);
      continue;
    }
    bool flag = false;
    for (const auto& [tag, words] : synonyms) {
      bool hit = false;
      for (long j = static_cast<long>(i) - static_cast<long>(l);
           j <= static_cast<long>(i) + static_cast<long>(l); ++j) {
        if (j < 0 || j >= static_cast<long>(n)) continue;
        for (const auto& w : words)
          if (sentence.tokens[static_cast<size_t>(j)].surface == w) hit = true;
      }
      if (hit) {
        r.set(static_cast<size_t>(tag));
        flag = true;
      }
    }
    if (!flag) r.set(static_cast<size_t>(tags.other_index()));
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("compile_dictionaries builds folded deduplicated sets") {
  TagSet tags = TagSet::from_names({"O", "FLOOD"});
  auto dicts = compile_dictionaries({{"FLOOD", {"flood", "deluge"}}}, {"possibility"}, tags);
  REQUIRE(dicts.synonyms.size() == 1);
  CHECK(dicts.synonyms.at(tags.id_of("FLOOD")).size() == 2);
  CHECK(dicts.negative.size() == 1);
}

TEST_CASE("compile_dictionaries rejects the reserved other tag") {
  TagSet tags = TagSet::from_names({"O", "FLOOD"});
  CHECK_THROWS_AS(compile_dictionaries({{"O", {"x"}}}, {}, tags), DataError);
}

TEST_CASE("compile_dictionaries rejects unknown tags and empty words") {
  TagSet tags = TagSet::from_names({"O", "FLOOD"});
  CHECK_THROWS_AS(compile_dictionaries({{"STORM", {"gale"}}}, {}, tags), DataError);
  CHECK_THROWS_AS(compile_dictionaries({{"FLOOD", {""}}}, {}, tags), DataError);
  CHECK_THROWS_AS(compile_dictionaries({}, {""}, tags), DataError);
}

TEST_CASE("compile_dictionaries deduplicates repeated words") {
  TagSet tags = TagSet::from_names({"O", "FLOOD"});
  auto dicts = compile_dictionaries({{"FLOOD", {"flood", "flood"}}}, {}, tags);
  CHECK(dicts.synonyms.at(tags.id_of("FLOOD")).size() == 1);
}

TEST_CASE("compile_dictionaries respects the case_fold switch") {
  TagSet tags = TagSet::from_names({"O", "FLOOD"});
  auto folded = compile_dictionaries({{"FLOOD", {"Flood"}}}, {}, tags, true);
  CHECK(folded.synonyms.at(tags.id_of("FLOOD")).count("flood") == 1);
  auto exact = compile_dictionaries({{"FLOOD", {"Flood"}}}, {}, tags, false);
  CHECK(exact.synonyms.at(tags.id_of("FLOOD")).count("Flood") == 1);
}

TEST_CASE("apply_rules tags the trigger token and leaves the rest other") {
  TagSet tags = quake_tags();
  auto sentence = make_sentence({"A", "moderate", "intensity", "earthquake", "measuring", "4.7",
                                 "hit", "Meghalaya", "on", "Monday"});
  auto dicts = compile_dictionaries({{"EARTHQUAKE", {"earthquake"}}}, {}, tags);
  RuleConfig config;
  config.window = 0;
  auto rvs = apply_rules(sentence, dicts, config, tags);
  REQUIRE(rvs.size() == 10);
  for (size_t i = 0; i < rvs.size(); ++i) {
    if (i == 3) {
      CHECK(rvs[i].test(static_cast<size_t>(tags.id_of("EARTHQUAKE"))));
      CHECK_FALSE(rvs[i].test(static_cast<size_t>(tags.other_index())));
    } else {
      CHECK(rvs[i].other_only(tags));
    }
  }
}

TEST_CASE("a negative-dictionary word knocks the whole sentence to other") {
  TagSet tags = TagSet::from_names({"O", "FLOODS"});
  auto sentence = make_sentence({"There", "exists", "a", "strong", "possibility", "of",
                                 "spreading", "of", "Malaria", "after", "2015", "floods", "in",
                                 "Mumbai"});
  auto dicts = compile_dictionaries({{"FLOODS", {"floods"}}}, {"possibility"}, tags);
  RuleConfig config;
  config.window = 2;
  auto rvs = apply_rules(sentence, dicts, config, tags);
  for (const auto& rv : rvs) CHECK(rv.other_only(tags));
}

TEST_CASE("empty dictionaries yield other-only vectors everywhere") {
  TagSet tags = quake_tags();
  auto sentence = make_sentence({"a", "b", "c"});
  DictionarySet dicts;
  RuleConfig config;
  for (const auto& rv : apply_rules(sentence, dicts, config, tags)) CHECK(rv.other_only(tags));
}

TEST_CASE("a shared word under two tags spreads multi-hot bits over the window") {
  TagSet tags = TagSet::from_names({"O", "A", "B"});
  auto sentence = make_sentence({"w1", "w2", "w3"});
  auto dicts = compile_dictionaries({{"A", {"w2"}}, {"B", {"w2"}}}, {}, tags);
  RuleConfig config;
  config.window = 1;
  auto rvs = apply_rules(sentence, dicts, config, tags);
  size_t a = static_cast<size_t>(tags.id_of("A"));
  size_t b = static_cast<size_t>(tags.id_of("B"));
  for (const auto& rv : rvs) {
    CHECK(rv.test(a));
    CHECK(rv.test(b));
    CHECK_FALSE(rv.test(static_cast<size_t>(tags.other_index())));
  }
}

TEST_CASE("window clamps at sentence boundaries") {
  TagSet tags = TagSet::from_names({"O", "A"});
  auto sentence = make_sentence({"hit", "x"});
  auto dicts = compile_dictionaries({{"A", {"hit"}}}, {}, tags);
  RuleConfig config;
  config.window = 5;  // larger than the sentence
  auto rvs = apply_rules(sentence, dicts, config, tags);
  CHECK(rvs[0].test(static_cast<size_t>(tags.id_of("A"))));
  CHECK(rvs[1].test(static_cast<size_t>(tags.id_of("A"))));
}

TEST_CASE("matching is case-folded when configured") {
  TagSet tags = TagSet::from_names({"O", "A"});
  auto sentence = make_sentence({"Fire"});
  auto dicts = compile_dictionaries({{"A", {"fire"}}}, {}, tags);
  RuleConfig folded;
  folded.window = 0;
  CHECK(apply_rules(sentence, dicts, folded, tags)[0].test(1));

  RuleConfig exact;
  exact.window = 0;
  exact.case_fold = false;
  auto dicts_exact = compile_dictionaries({{"A", {"fire"}}}, {}, tags, false);
  CHECK(apply_rules(sentence, dicts_exact, exact, tags)[0].other_only(tags));
}

TEST_CASE("negative scope can be narrowed to the matching token") {
  TagSet tags = TagSet::from_names({"O", "A"});
  auto sentence = make_sentence({"maybe", "fire"});
  auto dicts = compile_dictionaries({{"A", {"fire"}}}, {"maybe"}, tags);
  RuleConfig config;
  config.window = 0;

  config.negative_scope = NegativeScope::sentence;
  auto wide = apply_rules(sentence, dicts, config, tags);
  CHECK(wide[0].other_only(tags));
  CHECK(wide[1].other_only(tags));

  config.negative_scope = NegativeScope::token;
  auto narrow = apply_rules(sentence, dicts, config, tags);
  CHECK(narrow[0].other_only(tags));
  CHECK(narrow[1].test(static_cast<size_t>(tags.id_of("A"))));
}

TEST_CASE("similarity matching requires a store and honours the threshold") {
  TagSet tags = TagSet::from_names({"O", "A"});
  auto sentence = make_sentence({"quake"});
  auto dicts = compile_dictionaries({{"A", {"earthquake"}}}, {}, tags);
  RuleConfig config;
  config.window = 0;
  config.match_mode = MatchMode::similarity;
  config.similarity_threshold = 0.9;

  CHECK_THROWS_AS(apply_rules(sentence, dicts, config, tags, nullptr), ConfigError);

  EmbeddingStore close(2, OovPolicy::zeros, 0);
  close.insert("quake", {1.0, 0.1});
  close.insert("earthquake", {1.0, 0.0});
  CHECK(apply_rules(sentence, dicts, config, tags, &close)[0].test(1));

  EmbeddingStore far(2, OovPolicy::zeros, 0);
  far.insert("quake", {0.0, 1.0});
  far.insert("earthquake", {1.0, 0.0});
  CHECK(apply_rules(sentence, dicts, config, tags, &far)[0].other_only(tags));

  // zero-norm vectors never match
  EmbeddingStore zero(2, OovPolicy::zeros, 0);
  CHECK(apply_rules(sentence, dicts, config, tags, &zero)[0].other_only(tags));
}

namespace {

struct RandomInstance {
  Sentence sentence;
  std::map<int, std::vector<std::string>> synonyms;
  std::vector<std::string> negative;
  size_t window;
  TagSet tags;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  RandomInstance inst;
  std::uniform_int_distribution<int> num_tags(1, 4);
  std::uniform_int_distribution<size_t> sentence_len(1, 12);
  std::uniform_int_distribution<int> vocab(0, 14);
  std::uniform_int_distribution<size_t> window(0, 3);
  std::uniform_int_distribution<int> dict_size(0, 3);
  std::uniform_int_distribution<int> neg_size(0, 2);

  std::vector<std::string> names{"O"};
  int k = num_tags(rng);
  for (int t = 0; t < k; ++t) names.push_back("T" + std::to_string(t));
  inst.tags = TagSet::from_names(names);

  auto word = [&] { return "v" + std::to_string(vocab(rng)); };
  size_t n = sentence_len(rng);
  std::vector<std::string> words;
  for (size_t i = 0; i < n; ++i) words.push_back(word());
  inst.sentence = make_sentence(words);

  for (int t = 0; t < k; ++t) {
    int m = dict_size(rng);
    std::vector<std::string> entries;
    for (int j = 0; j < m; ++j) entries.push_back(word());  // overlaps across tags by design
    if (!entries.empty()) inst.synonyms[inst.tags.id_of("T" + std::to_string(t))] = entries;
  }
  int m = neg_size(rng);
  for (int j = 0; j < m; ++j) inst.negative.push_back(word());
  inst.window = window(rng);
  return inst;
}

}  // namespace

TEST_CASE("apply_rules matches the brute-force transcription on random instances") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 300; ++iter) {
    auto inst = random_instance(rng);
    std::map<std::string, std::vector<std::string>> raw;
    for (const auto& [id, words] : inst.synonyms) raw[inst.tags.name(id)] = words;
    auto dicts = compile_dictionaries(raw, inst.negative, inst.tags);
    RuleConfig config;
    config.window = inst.window;
    auto got = apply_rules(inst.sentence, dicts, config, inst.tags);
    auto want = oracle_apply(inst.sentence, inst.synonyms, inst.negative, inst.window, inst.tags);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("rule vectors satisfy the other-xor-labels invariant") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 200; ++iter) {
    auto inst = random_instance(rng);
    std::map<std::string, std::vector<std::string>> raw;
    for (const auto& [id, words] : inst.synonyms) raw[inst.tags.name(id)] = words;
    auto dicts = compile_dictionaries(raw, inst.negative, inst.tags);
    RuleConfig config;
    config.window = inst.window;
    for (const auto& rv : apply_rules(inst.sentence, dicts, config, inst.tags)) {
      REQUIRE(rv.count() >= 1);
      if (rv.test(static_cast<size_t>(inst.tags.other_index()))) CHECK(rv.count() == 1);
    }
  }
}

TEST_CASE("widening the window only adds bits") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 100; ++iter) {
    auto inst = random_instance(rng);
    inst.negative.clear();  // override path is window-independent
    std::map<std::string, std::vector<std::string>> raw;
    for (const auto& [id, words] : inst.synonyms) raw[inst.tags.name(id)] = words;
    auto dicts = compile_dictionaries(raw, {}, inst.tags);
    RuleConfig narrow, wide;
    narrow.window = inst.window;
    wide.window = inst.window + 2;
    auto small = apply_rules(inst.sentence, dicts, narrow, inst.tags);
    auto large = apply_rules(inst.sentence, dicts, wide, inst.tags);
    for (size_t i = 0; i < small.size(); ++i)
      for (size_t j = 0; j < small[i].size(); ++j)
        if (j != static_cast<size_t>(inst.tags.other_index()) && small[i].test(j))
          CHECK(large[i].test(j));
  }
}

TEST_CASE("adding any sentence word to the negative dictionary dominates") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 50; ++iter) {
    auto inst = random_instance(rng);
    std::map<std::string, std::vector<std::string>> raw;
    for (const auto& [id, words] : inst.synonyms) raw[inst.tags.name(id)] = words;
    std::uniform_int_distribution<size_t> pick(0, inst.sentence.size() - 1);
    auto negative = inst.negative;
    negative.push_back(inst.sentence.tokens[pick(rng)].surface);
    auto dicts = compile_dictionaries(raw, negative, inst.tags);
    RuleConfig config;
    config.window = inst.window;
    for (const auto& rv : apply_rules(inst.sentence, dicts, config, inst.tags))
      CHECK(rv.other_only(inst.tags));
  }
}

TEST_CASE("apply_rules is a pure function of its inputs") {
  TagSet tags = TagSet::from_names({"O", "A"});
  auto sentence = make_sentence({"x", "fire", "y"});
  auto dicts = compile_dictionaries({{"A", {"fire"}}}, {"doubt"}, tags);
  RuleConfig config;
  auto first = apply_rules(sentence, dicts, config, tags);
  auto second = apply_rules(sentence, dicts, config, tags);
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);
}

TEST_CASE("rule_only_predict picks the lowest set bit") {
  TagSet tags = TagSet::from_names({"O", "A", "B"});
  RuleVector other_only(3);
  other_only.set(0);
  RuleVector single(3);
  single.set(2);
  RuleVector multi(3);
  multi.set(1);
  multi.set(2);
  auto pred = rule_only_predict({other_only, single, multi});
  CHECK(pred[0] == tags.other_index());
  CHECK(pred[1] == 2);
  CHECK(pred[2] == 1);  // index(A) < index(B)
}
