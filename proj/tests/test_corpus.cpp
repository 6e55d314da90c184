#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>

#include "ruletag/corpus.hpp"
#include "ruletag/synthetic.hpp"

using namespace ruletag;

namespace {

const char* kQuakeSentence =
    "A\t2\tO\n"
    "moderate\t2\tO\n"
    "intensity\t2\tO\n"
    "earthquake\t2\tEARTHQUAKE\n"
    "measuring\t2\tO\n"
    "4.7\t2\tMAGNITUDE-ARG\n"
    "hit\t2\tO\n"
    "Meghalaya\t2\tPLACE-ARG\n"
    "on\t2\tO\n"
    "Monday\t2\tTIME-ARG\n";

ParsedCorpus parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::string serialize_string(const std::vector<Sentence>& sentences, const TagSet& tags) {
  std::ostringstream out;
  serialize_corpus(sentences, tags, out);
  return out.str();
}

// Random corpus for round-trip properties.
std::vector<Sentence> random_sentences(std::mt19937_64& rng, TagSet& tags, size_t count) {
  std::uniform_int_distribution<size_t> len(1, 8);
  std::uniform_int_distribution<int> word(0, 30);
  std::uniform_int_distribution<int> tag(0, 4);
  std::uniform_int_distribution<uint64_t> doc(0, count / 2 + 1);
  tags.add("O");
  for (int t = 0; t < 5; ++t) tags.add("T" + std::to_string(t));
  std::vector<Sentence> out;
  for (size_t i = 0; i < count; ++i) {
    Sentence s;
    s.doc_id = doc(rng);
    size_t n = len(rng);
    for (size_t j = 0; j < n; ++j)
      s.tokens.push_back(Token{"w" + std::to_string(word(rng)), tag(rng) == 0
                                                                    ? tags.other_index()
                                                                    : tags.id_of("T" + std::to_string(tag(rng) % 5))});
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_corpus reads a tagged disaster sentence") {
  auto corpus = parse_string(kQuakeSentence);
  REQUIRE(corpus.sentences.size() == 1);
  const Sentence& s = corpus.sentences[0];
  REQUIRE(s.doc_id == 2);
  REQUIRE(s.tokens.size() == 10);
  CHECK(s.tokens[0].surface == "A");
  CHECK(s.tokens[3].surface == "earthquake");
  CHECK(corpus.tags.name(s.tokens[3].gold_tag) == "EARTHQUAKE");
  CHECK(corpus.tags.name(s.tokens[5].gold_tag) == "MAGNITUDE-ARG");
  CHECK(corpus.tags.name(s.tokens[7].gold_tag) == "PLACE-ARG");
  CHECK(corpus.tags.name(s.tokens[9].gold_tag) == "TIME-ARG");
  CHECK(corpus.tags.name(s.tokens[0].gold_tag) == "O");
  // O, EARTHQUAKE, MAGNITUDE-ARG, PLACE-ARG, TIME-ARG
  CHECK(corpus.tags.size() == 5);
}

TEST_CASE("parse_corpus minimal single line") {
  auto corpus = parse_string("x 0 O\n");
  REQUIRE(corpus.sentences.size() == 1);
  REQUIRE(corpus.sentences[0].tokens.size() == 1);
  CHECK(corpus.sentences[0].doc_id == 0);
  CHECK(corpus.tags.is_other(corpus.sentences[0].tokens[0].gold_tag));
}

TEST_CASE("parse_corpus splits sentences on blank lines and unions tags with O") {
  auto corpus = parse_string("a 1 FLOOD\nb 1 O\n\nc 2 STORM\n");
  REQUIRE(corpus.sentences.size() == 2);
  CHECK(corpus.sentences[0].doc_id == 1);
  CHECK(corpus.sentences[1].doc_id == 2);
  CHECK(corpus.tags.id_of("FLOOD") >= 0);
  CHECK(corpus.tags.id_of("STORM") >= 0);
  CHECK(corpus.tags.id_of("O") >= 0);
}

TEST_CASE("parse_corpus adds O even when absent from the file") {
  auto corpus = parse_string("a 1 FLOOD\n");
  CHECK(corpus.tags.other_index() >= 0);
  CHECK(corpus.tags.size() == 2);
}

TEST_CASE("parse_corpus rejects malformed input") {
  SECTION("wrong column count names the line") {
    try {
      parse_string("a 1 O\nbroken line\n");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("non-integer doc id") {
    CHECK_THROWS_AS(parse_string("a x O\n"), DataError);
  }
  SECTION("empty input") {
    CHECK_THROWS_AS(parse_string(""), DataError);
    CHECK_THROWS_AS(parse_string("\n\n"), DataError);
  }
  SECTION("doc id change mid-sentence") {
    CHECK_THROWS_AS(parse_string("a 1 O\nb 2 O\n"), DataError);
  }
}

TEST_CASE("corpus serialization round-trips exactly") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 25; ++iter) {
    TagSet tags;
    auto sentences = random_sentences(rng, tags, 12);
    std::string text = serialize_string(sentences, tags);
    auto reparsed = parse_string(text);
    REQUIRE(reparsed.sentences.size() == sentences.size());
    for (size_t i = 0; i < sentences.size(); ++i) {
      CHECK(reparsed.sentences[i].doc_id == sentences[i].doc_id);
      REQUIRE(reparsed.sentences[i].tokens.size() == sentences[i].tokens.size());
      for (size_t j = 0; j < sentences[i].tokens.size(); ++j) {
        CHECK(reparsed.sentences[i].tokens[j].surface == sentences[i].tokens[j].surface);
        CHECK(reparsed.tags.name(reparsed.sentences[i].tokens[j].gold_tag) ==
              tags.name(sentences[i].tokens[j].gold_tag));
      }
    }
    // serialize(parse(serialize(x))) is bytewise stable
    CHECK(serialize_string(reparsed.sentences, reparsed.tags) == text);
  }
}

TEST_CASE("iob_to_to merges prefixes") {
  CHECK(iob_to_to({"B-PLACE", "I-PLACE", "O"}) ==
        std::vector<std::string>{"PLACE", "PLACE", "O"});
  CHECK(iob_to_to({"O", "O"}) == std::vector<std::string>{"O", "O"});
  CHECK(iob_to_to({"B-TIME", "B-TIME"}) == std::vector<std::string>{"TIME", "TIME"});
}

TEST_CASE("iob_to_to rejects foreign prefixes and names the tag") {
  try {
    iob_to_to({"B-X", "Q-Y"});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("Q-Y") != std::string::npos);
  }
  CHECK_THROWS_AS(iob_to_to({"PLACE"}), DataError);
  CHECK_THROWS_AS(iob_to_to({"B-"}), DataError);
}

TEST_CASE("iob_to_to properties: length preserved, no prefixes emitted") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> label(0, 6);
  std::uniform_int_distribution<size_t> len(0, 20);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> tags;
    size_t n = len(rng);
    for (size_t i = 0; i < n; ++i) {
      int k = kind(rng);
      if (k == 0)
        tags.push_back("O");
      else
        tags.push_back((k == 1 ? "B-L" : "I-L") + std::to_string(label(rng)));
    }
    auto out = iob_to_to(tags);
    REQUIRE(out.size() == tags.size());
    for (const auto& t : out) {
      CHECK(t.rfind("B-", 0) != 0);
      CHECK(t.rfind("I-", 0) != 0);
    }
  }
}

namespace {

std::vector<Sentence> docs_corpus(size_t num_docs, size_t sentences_per_doc = 2) {
  std::vector<Sentence> out;
  for (size_t d = 0; d < num_docs; ++d)
    for (size_t s = 0; s < sentences_per_doc; ++s) {
      Sentence sent;
      sent.doc_id = d;
      sent.tokens.push_back(Token{"w" + std::to_string(d), 0});
      out.push_back(std::move(sent));
    }
  return out;
}

std::set<uint64_t> doc_ids(const std::vector<Sentence>& v) {
  std::set<uint64_t> out;
  for (const auto& s : v) out.insert(s.doc_id);
  return out;
}

}  // namespace

TEST_CASE("split_corpus partitions 10 docs as 7/1/2 and is deterministic") {
  auto sentences = docs_corpus(10);
  auto split = split_corpus(sentences, {0.7, 0.1, 0.2}, 42);
  CHECK(doc_ids(split.train).size() == 7);
  CHECK(doc_ids(split.val).size() == 1);
  CHECK(doc_ids(split.test).size() == 2);

  auto again = split_corpus(sentences, {0.7, 0.1, 0.2}, 42);
  CHECK(doc_ids(again.train) == doc_ids(split.train));
  CHECK(doc_ids(again.val) == doc_ids(split.val));
  CHECK(doc_ids(again.test) == doc_ids(split.test));
}

TEST_CASE("split_corpus rejects bad fractions and tiny corpora") {
  auto sentences = docs_corpus(10);
  CHECK_THROWS_AS(split_corpus(sentences, {0.5, 0.5, 0.5}, 1), ConfigError);
  CHECK_THROWS_AS(split_corpus(docs_corpus(2), {0.7, 0.1, 0.2}, 1), DataError);
}

TEST_CASE("split_corpus is disjoint and covers all documents") {
  auto sentences = docs_corpus(100);
  auto split = split_corpus(sentences, {0.7, 0.1, 0.2}, 3);
  auto tr = doc_ids(split.train), va = doc_ids(split.val), te = doc_ids(split.test);

  // brute-force pairwise intersection
  std::set<uint64_t> inter;
  std::set_intersection(tr.begin(), tr.end(), va.begin(), va.end(),
                        std::inserter(inter, inter.begin()));
  CHECK(inter.empty());
  std::set_intersection(tr.begin(), tr.end(), te.begin(), te.end(),
                        std::inserter(inter, inter.begin()));
  CHECK(inter.empty());
  std::set_intersection(va.begin(), va.end(), te.begin(), te.end(),
                        std::inserter(inter, inter.begin()));
  CHECK(inter.empty());

  std::set<uint64_t> all = tr;
  all.insert(va.begin(), va.end());
  all.insert(te.begin(), te.end());
  CHECK(all == doc_ids(sentences));
  CHECK(split.train.size() + split.val.size() + split.test.size() == sentences.size());
}

namespace {

std::multiset<uint64_t> sentence_keys(const std::vector<Sentence>& v) {
  std::multiset<uint64_t> keys;
  for (const auto& s : v) keys.insert(fnv1a(s.tokens[0].surface) ^ s.doc_id);
  return keys;
}

}  // namespace

TEST_CASE("subsample_train keeps ceil(percent * train) sentences") {
  // mirrors the published corpus size: 15920 train sentences at 20% -> 3184
  std::vector<Sentence> train(15920);
  for (size_t i = 0; i < train.size(); ++i) {
    train[i].doc_id = i;
    train[i].tokens.push_back(Token{"w", 0});
  }
  CorpusSplit split;
  split.train = train;
  auto sub = subsample_train(split, 20, 11);
  CHECK(sub.train.size() == 3184);
  CHECK(subsample_train(split, 40, 11).train.size() == 6368);
}

TEST_CASE("subsample_train at 100 percent is the identity") {
  auto sentences = docs_corpus(10);
  auto split = split_corpus(sentences, {0.7, 0.1, 0.2}, 1);
  auto sub = subsample_train(split, 100, 9);
  CHECK(sentence_keys(sub.train) == sentence_keys(split.train));
  CHECK(sub.val.size() == split.val.size());
  CHECK(sub.test.size() == split.test.size());
}

TEST_CASE("subsample_train rejects foreign percents") {
  auto split = split_corpus(docs_corpus(10), {0.7, 0.1, 0.2}, 1);
  CHECK_THROWS_AS(subsample_train(split, 50, 1), ConfigError);
  CHECK_THROWS_AS(subsample_train(split, 0, 1), ConfigError);
}

TEST_CASE("subsample_train subsets nest across percents for a fixed seed") {
  std::vector<Sentence> train(50);
  for (size_t i = 0; i < train.size(); ++i) {
    train[i].doc_id = i;
    train[i].tokens.push_back(Token{"s" + std::to_string(i), 0});
  }
  CorpusSplit split;
  split.train = train;
  int percents[] = {20, 40, 60, 80, 100};
  for (size_t a = 0; a < 5; ++a) {
    for (size_t b = a + 1; b < 5; ++b) {
      auto small = sentence_keys(subsample_train(split, percents[a], 7).train);
      auto large = sentence_keys(subsample_train(split, percents[b], 7).train);
      CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    }
  }
}

TEST_CASE("generate_synthetic plants a skewed monotone label histogram") {
  SyntheticConfig cfg;
  cfg.num_tags = 5;
  cfg.num_sentences = 200;
  cfg.vocab_size = 60;
  cfg.skew = 1.5;
  cfg.negated_fraction = 0.0;
  auto corpus = generate_synthetic(cfg, 1);

  std::vector<size_t> counts(cfg.num_tags, 0);
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s.tokens) {
      const std::string& name = corpus.tags.name(tok.gold_tag);
      if (name.rfind("EVT", 0) == 0) ++counts[std::stoul(name.substr(3))];
    }
  for (size_t t = 1; t < cfg.num_tags; ++t) CHECK(counts[t] <= counts[t - 1]);
  CHECK(counts[0] > counts[cfg.num_tags - 1]);  // the skew actually bites
}

TEST_CASE("generate_synthetic with negated_fraction 0 plants no negative words") {
  SyntheticConfig cfg;
  cfg.num_sentences = 80;
  cfg.negated_fraction = 0.0;
  auto corpus = generate_synthetic(cfg, 2);
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s.tokens) CHECK(corpus.dicts.negative.count(tok.surface) == 0);
}

TEST_CASE("generate_synthetic is byte-deterministic per seed") {
  SyntheticConfig cfg;
  cfg.num_sentences = 50;
  auto a = generate_synthetic(cfg, 9);
  auto b = generate_synthetic(cfg, 9);
  CHECK(serialize_string(a.sentences, a.tags) == serialize_string(b.sentences, b.tags));
  auto c = generate_synthetic(cfg, 10);
  CHECK(serialize_string(a.sentences, a.tags) != serialize_string(c.sentences, c.tags));
}

TEST_CASE("generate_synthetic dictionaries cover exactly the planted triggers") {
  SyntheticConfig cfg;
  cfg.num_tags = 3;
  cfg.num_sentences = 60;
  cfg.negated_fraction = 0.2;
  auto corpus = generate_synthetic(cfg, 4);
  // every non-other, non-argument gold token is in its tag's synonym set
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s.tokens) {
      const std::string& name = corpus.tags.name(tok.gold_tag);
      if (name.rfind("EVT", 0) == 0) {
        REQUIRE(corpus.dicts.synonyms.count(tok.gold_tag) == 1);
        CHECK(corpus.dicts.synonyms.at(tok.gold_tag).count(tok.surface) == 1);
      }
    }
}

TEST_CASE("generate_synthetic validates its config") {
  SyntheticConfig cfg;
  cfg.num_tags = 1;
  CHECK_THROWS_AS(generate_synthetic(cfg, 1), ConfigError);
  cfg.num_tags = 4;
  cfg.num_sentences = 5;
  CHECK_THROWS_AS(generate_synthetic(cfg, 1), ConfigError);
}
