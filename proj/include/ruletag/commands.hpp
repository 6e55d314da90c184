#ifndef RULETAG_COMMANDS_HPP
#define RULETAG_COMMANDS_HPP

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruletag/ablation.hpp"
#include "ruletag/checkpoint.hpp"
#include "ruletag/commands_io.hpp"
#include "ruletag/metrics.hpp"
#include "ruletag/model.hpp"
#include "ruletag/synthetic.hpp"

namespace ruletag {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  // paths
  std::string corpus;
  std::string dictionaries;
  std::string embeddings;
  std::string output_dir = "out";
  // model
  std::string variant = "A";
  size_t dim = 50;
  size_t hidden = 100;
  size_t rule_hidden = 100;
  double dropout = 0.5;
  bool trainable_embeddings = true;
  std::string oov_policy = "random_normal";
  // rules
  size_t window = 2;
  std::string match_mode = "exact";
  double similarity_threshold = 0.7;
  bool case_fold = true;
  std::string negative_scope = "sentence";
  // distillation
  double penalty = 1.0;
  double imitation = 0.4;
  std::string inference_source = "teacher";
  bool anneal_imitation = false;
  // optimization
  double lr = 1e-3;
  double clip_norm = 5.0;
  size_t epochs = 30;
  // data protocol
  std::array<double, 3> split{0.7, 0.1, 0.2};
  int percent = 100;
  uint64_t seed = 1;

  VariantConfig variant_config() const {
    VariantConfig vc;
    vc.variant = variant_from_letter(variant);
    vc.dim = dim;
    vc.hidden = hidden;
    vc.rule_hidden = rule_hidden;
    vc.dropout = dropout;
    vc.trainable_embeddings = trainable_embeddings;
    vc.rules.window = window;
    vc.rules.match_mode = match_mode_from_name(match_mode);
    vc.rules.similarity_threshold = similarity_threshold;
    vc.rules.case_fold = case_fold;
    if (negative_scope != "sentence" && negative_scope != "token")
      throw ConfigError("negative_scope must be sentence|token");
    vc.rules.negative_scope =
        negative_scope == "sentence" ? NegativeScope::sentence : NegativeScope::token;
    vc.distill.penalty = penalty;
    vc.distill.imitation = imitation;
    vc.distill.inference_source = inference_source_from_name(inference_source);
    vc.distill.anneal_imitation = anneal_imitation;
    vc.validate();
    return vc;
  }

  OptimizerConfig optimizer_config() const {
    OptimizerConfig oc;
    oc.lr = lr;
    oc.clip_norm = clip_norm;
    return oc;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"corpus", corpus},
                          {"dictionaries", dictionaries},
                          {"embeddings", embeddings},
                          {"output_dir", output_dir},
                          {"variant", variant},
                          {"dim", dim},
                          {"hidden", hidden},
                          {"rule_hidden", rule_hidden},
                          {"dropout", dropout},
                          {"trainable_embeddings", trainable_embeddings},
                          {"oov_policy", oov_policy},
                          {"window", window},
                          {"match_mode", match_mode},
                          {"similarity_threshold", similarity_threshold},
                          {"case_fold", case_fold},
                          {"negative_scope", negative_scope},
                          {"penalty", penalty},
                          {"imitation", imitation},
                          {"inference_source", inference_source},
                          {"anneal_imitation", anneal_imitation},
                          {"lr", lr},
                          {"clip_norm", clip_norm},
                          {"epochs", epochs},
                          {"split", split},
                          {"percent", percent},
                          {"seed", seed}};
  }

  static RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
      c.corpus = j.value("corpus", c.corpus);
      c.dictionaries = j.value("dictionaries", c.dictionaries);
      c.embeddings = j.value("embeddings", c.embeddings);
      c.output_dir = j.value("output_dir", c.output_dir);
      c.variant = j.value("variant", c.variant);
      c.dim = j.value("dim", c.dim);
      c.hidden = j.value("hidden", c.hidden);
      c.rule_hidden = j.value("rule_hidden", c.rule_hidden);
      c.dropout = j.value("dropout", c.dropout);
      c.trainable_embeddings = j.value("trainable_embeddings", c.trainable_embeddings);
      c.oov_policy = j.value("oov_policy", c.oov_policy);
      c.window = j.value("window", c.window);
      c.match_mode = j.value("match_mode", c.match_mode);
      c.similarity_threshold = j.value("similarity_threshold", c.similarity_threshold);
      c.case_fold = j.value("case_fold", c.case_fold);
      c.negative_scope = j.value("negative_scope", c.negative_scope);
      c.penalty = j.value("penalty", c.penalty);
      c.imitation = j.value("imitation", c.imitation);
      c.inference_source = j.value("inference_source", c.inference_source);
      c.anneal_imitation = j.value("anneal_imitation", c.anneal_imitation);
      c.lr = j.value("lr", c.lr);
      c.clip_norm = j.value("clip_norm", c.clip_norm);
      c.epochs = j.value("epochs", c.epochs);
      if (j.contains("split")) c.split = j.at("split").get<std::array<double, 3>>();
      c.percent = j.value("percent", c.percent);
      c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad run config: ") + e.what());
    }
    return c;
  }

  static RunConfig from_file(const std::string& path) {
    return from_json(read_json_file(path));
  }
};

namespace detail {

inline EmbeddingStore make_store(const RunConfig& cfg) {
  OovPolicy policy = oov_policy_from_name(cfg.oov_policy);
  if (cfg.embeddings.empty()) {
    EmbeddingStore store(cfg.dim, policy, derive_seed(cfg.seed, "emb"));
    store.set_trainable(cfg.trainable_embeddings);
    return store;
  }
  std::ifstream in(cfg.embeddings);
  if (!in) throw IoError("cannot read embeddings '" + cfg.embeddings + "'");
  EmbeddingStore store = load_vectors(in, policy, derive_seed(cfg.seed, "emb"),
                                      cfg.trainable_embeddings);
  if (store.dim() != cfg.dim)
    throw ConfigError("embedding file dim " + std::to_string(store.dim()) +
                      " != configured dim " + std::to_string(cfg.dim));
  return store;
}

inline const std::vector<Sentence>& pick_split(const CorpusSplit& split,
                                               const std::vector<Sentence>& all,
                                               const std::string& name) {
  if (name == "train") return split.train;
  if (name == "val") return split.val;
  if (name == "test") return split.test;
  if (name == "all") return all;
  throw ConfigError("unknown split '" + name + "', expected train|val|test|all");
}

inline nlohmann::json report_to_json(const EvalReport& rep) {
  nlohmann::json per_label = nlohmann::json::object();
  for (const auto& [id, s] : rep.per_label)
    per_label[rep.tags.name(id)] = {{"precision", s.precision}, {"recall", s.recall},
                                    {"f1", s.f1},               {"support", s.support},
                                    {"tp", s.tp},               {"fp", s.fp},
                                    {"fn", s.fn}};
  std::vector<std::string> tail_names;
  for (int id : rep.tail_labels) tail_names.push_back(rep.tags.name(id));
  nlohmann::json j{{"micro_f1", rep.micro_f1}, {"macro_f1", rep.macro_f1},
                   {"precision", rep.precision}, {"recall", rep.recall},
                   {"tp", rep.tp}, {"fp", rep.fp}, {"fn", rep.fn},
                   {"per_label", per_label}, {"tail_labels", tail_names}};
  if (rep.tail_micro_f1)
    j["tail_micro_f1"] = *rep.tail_micro_f1;
  else
    j["tail_micro_f1"] = nullptr;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct IngestSummary {
  std::array<size_t, 3> docs{};       // train, val, test
  std::array<size_t, 3> sentences{};  // train, val, test
  size_t labels = 0;                  // non-other labels
  std::string normalized_path;

  std::string table() const {
    char buf[256];
    std::string out = "          Doc       Sen\n";
    const char* names[3] = {"Train", "Val", "Test"};
    for (int i = 0; i < 3; ++i) {
      std::snprintf(buf, sizeof(buf), "%-9s %-9zu %zu\n", names[i], docs[i], sentences[i]);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "#Labels   %zu\n", labels);
    out += buf;
    return out;
  }
};

// Parses, validates, splits; writes the normalized corpus, the tag-set
// manifest and the split manifest under out_dir.
inline IngestSummary cmd_ingest(const std::string& corpus_path, const std::string& out_dir,
                                std::array<double, 3> fractions, uint64_t seed) {
  ParsedCorpus corpus = parse_corpus_file(corpus_path);
  CorpusSplit split = split_corpus(corpus.sentences, fractions, seed);
  std::filesystem::create_directories(out_dir);

  IngestSummary sum;
  const std::vector<Sentence>* parts[3] = {&split.train, &split.val, &split.test};
  for (int i = 0; i < 3; ++i) {
    std::set<uint64_t> docs;
    for (const auto& s : *parts[i]) docs.insert(s.doc_id);
    sum.docs[i] = docs.size();
    sum.sentences[i] = parts[i]->size();
  }
  sum.labels = corpus.tags.size() - 1;

  sum.normalized_path = (std::filesystem::path(out_dir) / "corpus.txt").string();
  std::ostringstream body;
  serialize_corpus(corpus.sentences, corpus.tags, body);
  write_file(sum.normalized_path, body.str());

  nlohmann::json tagset{{"names", corpus.tags.names()},
                        {"other_index", corpus.tags.other_index()}};
  write_file((std::filesystem::path(out_dir) / "tagset.json").string(), tagset.dump(1) + "\n");

  nlohmann::json manifest{{"fractions", fractions}, {"seed", seed}};
  for (int i = 0; i < 3; ++i) {
    std::set<uint64_t> docs;
    for (const auto& s : *parts[i]) docs.insert(s.doc_id);
    manifest[std::array<const char*, 3>{"train_docs", "val_docs", "test_docs"}[i]] =
        std::vector<uint64_t>(docs.begin(), docs.end());
  }
  write_file((std::filesystem::path(out_dir) / "split.json").string(), manifest.dump(1) + "\n");
  return sum;
}

struct RulesSummary {
  size_t tokens = 0;
  EvalReport rule_only;
  std::string report_path;
};

// Applies the rule engine over a split and writes the per-token bit report
// plus the rule-only baseline scores.
inline RulesSummary cmd_rules(const RunConfig& cfg, const std::string& split_name = "all") {
  if (cfg.dictionaries.empty()) throw ConfigError("rules command needs a dictionary file");
  ParsedCorpus corpus = parse_corpus_file(cfg.corpus);
  DictionarySet dicts = load_dictionaries(cfg.dictionaries, corpus.tags, cfg.case_fold);
  VariantConfig vc;  // only the rule block matters here
  vc.rules.window = cfg.window;
  vc.rules.match_mode = match_mode_from_name(cfg.match_mode);
  vc.rules.similarity_threshold = cfg.similarity_threshold;
  vc.rules.case_fold = cfg.case_fold;
  vc.rules.negative_scope =
      cfg.negative_scope == "token" ? NegativeScope::token : NegativeScope::sentence;

  EmbeddingStore store = detail::make_store(cfg);
  EmbeddingStore* sim_store = vc.rules.match_mode == MatchMode::similarity ? &store : nullptr;

  const std::vector<Sentence>* chosen = &corpus.sentences;
  CorpusSplit split;
  if (split_name != "all") {
    split = split_corpus(corpus.sentences, cfg.split, cfg.seed);
    chosen = &detail::pick_split(split, corpus.sentences, split_name);
  }

  std::filesystem::create_directories(cfg.output_dir);
  RulesSummary sum;
  std::ostringstream report;
  std::vector<int> gold, pred;
  for (const auto& sentence : *chosen) {
    auto rvs = apply_rules(sentence, dicts, vc.rules, corpus.tags, sim_store);
    auto tags = rule_only_predict(rvs);
    for (size_t i = 0; i < sentence.size(); ++i) {
      report << sentence.tokens[i].surface << '\t' << corpus.tags.name(sentence.tokens[i].gold_tag)
             << '\t';
      for (size_t j = 0; j < rvs[i].size(); ++j) {
        if (j) report << ',';
        report << (rvs[i].test(j) ? '1' : '0');
      }
      report << '\n';
      gold.push_back(sentence.tokens[i].gold_tag);
      pred.push_back(tags[i]);
      ++sum.tokens;
    }
  }
  sum.report_path = (std::filesystem::path(cfg.output_dir) / "rules_report.tsv").string();
  write_file(sum.report_path, report.str());
  sum.rule_only = evaluate(gold, pred, corpus.tags);
  write_file((std::filesystem::path(cfg.output_dir) / "rules_eval.json").string(),
             detail::report_to_json(sum.rule_only).dump(1) + "\n");
  return sum;
}

struct TrainSummary {
  std::string checkpoint_path;
  std::string log_path;
  TrainLog log;
};

inline TrainSummary cmd_train(const RunConfig& cfg) {
  ParsedCorpus corpus = parse_corpus_file(cfg.corpus);
  VariantConfig vc = cfg.variant_config();

  CorpusSplit split = split_corpus(corpus.sentences, cfg.split, cfg.seed);
  split = subsample_train(split, cfg.percent, cfg.seed);

  DictionarySet dicts;
  bool have_dicts = !cfg.dictionaries.empty();
  if (have_dicts) dicts = load_dictionaries(cfg.dictionaries, corpus.tags, cfg.case_fold);
  if (vc.needs_rules() && !have_dicts)
    throw ConfigError("variant " + cfg.variant + " needs a dictionary file");

  EmbeddingStore store = detail::make_store(cfg);
  TrainResult result = train(vc, cfg.optimizer_config(), cfg.epochs, split, corpus.tags,
                             have_dicts ? &dicts : nullptr, store, cfg.seed);

  std::filesystem::create_directories(cfg.output_dir);
  TrainSummary sum;
  sum.checkpoint_path = (std::filesystem::path(cfg.output_dir) / "checkpoint.json").string();
  sum.log_path = (std::filesystem::path(cfg.output_dir) / "train_log.txt").string();
  save_checkpoint(sum.checkpoint_path, result.model, cfg.to_json());
  write_file(sum.log_path, result.log.to_text());
  sum.log = std::move(result.log);
  return sum;
}

struct EvalSummary {
  EvalReport report;
  std::string report_path;
};

// Re-derives the split from the checkpoint's run config, predicts over the
// chosen part and writes the report files.
inline EvalSummary cmd_eval(const std::string& checkpoint_path, const std::string& corpus_path,
                            const std::string& split_name, const std::string& out_dir,
                            const std::string& dict_override = "") {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  RunConfig cfg = RunConfig::from_json(ck.run_config);
  std::string corpus_file = corpus_path.empty() ? cfg.corpus : corpus_path;
  ParsedCorpus corpus = parse_corpus_file(corpus_file);
  if (!(corpus.tags == ck.model.tags()))
    throw DataError("corpus tag set does not match the checkpoint tag set");

  CorpusSplit split = split_corpus(corpus.sentences, cfg.split, cfg.seed);
  const std::vector<Sentence>& chosen = detail::pick_split(split, corpus.sentences, split_name);

  const VariantConfig& vc = ck.model.config();
  DictionarySet dicts;
  std::vector<std::vector<RuleVector>> rvs;
  EmbeddingStore store(ck.model.embedding_meta().dim, ck.model.embedding_meta().policy,
                       ck.model.embedding_meta().seed);
  if (vc.needs_rules()) {
    std::string dict_path = dict_override.empty() ? cfg.dictionaries : dict_override;
    if (dict_path.empty()) throw ConfigError("checkpoint variant needs a dictionary file");
    dicts = load_dictionaries(dict_path, corpus.tags, vc.rules.case_fold);
    EmbeddingStore* sim_store = vc.rules.match_mode == MatchMode::similarity ? &store : nullptr;
    rvs = detail::rule_vectors_for(chosen, dicts, vc.rules, corpus.tags, sim_store);
  }

  std::vector<int> gold = flatten_gold(chosen);
  std::vector<int> pred;
  for (size_t i = 0; i < chosen.size(); ++i) {
    auto p = ck.model.predict(chosen[i], vc.needs_rules() ? &rvs[i] : nullptr);
    pred.insert(pred.end(), p.begin(), p.end());
  }

  EvalSummary sum;
  sum.report = evaluate(gold, pred, corpus.tags);
  std::set<int> tail = select_tail_labels(split.train, corpus.tags);
  attach_tail(sum.report, gold, pred, tail);

  std::filesystem::create_directories(out_dir);
  sum.report_path = (std::filesystem::path(out_dir) / "eval_report.json").string();
  write_file(sum.report_path, detail::report_to_json(sum.report).dump(1) + "\n");
  return sum;
}

// Tags a raw token file (1 column: token, optional 2nd: doc id, optional
// 3rd column ignored) and writes the three-column format.
inline void cmd_predict(const std::string& checkpoint_path, const std::string& tokens_path,
                        const std::string& out_path, const std::string& dict_override = "") {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  RunConfig cfg = RunConfig::from_json(ck.run_config);

  std::ifstream in(tokens_path);
  if (!in) throw IoError("cannot read token file '" + tokens_path + "'");
  std::vector<Sentence> sentences;
  Sentence current;
  bool open = false;
  bool explicit_doc = false;
  uint64_t next_doc = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      if (open) {
        sentences.push_back(std::move(current));
        current = Sentence{};
        open = false;
        ++next_doc;
      }
      continue;
    }
    auto cols = split_whitespace(line);
    if (cols.size() > 3)
      throw DataError("line " + std::to_string(line_no) + ": expected at most 3 columns");
    uint64_t doc = next_doc;
    if (cols.size() >= 2) {
      try {
        doc = parse_doc_id(cols[1]);
      } catch (const DataError& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
      }
      explicit_doc = true;
    }
    if (!open) {
      current.doc_id = doc;
      open = true;
    } else if (explicit_doc && current.doc_id != doc) {
      throw DataError("line " + std::to_string(line_no) + ": doc id changes mid-sentence");
    }
    current.tokens.push_back(Token{cols[0], ck.model.tags().other_index()});
  }
  if (open) sentences.push_back(std::move(current));
  if (sentences.empty()) throw DataError("empty token file");

  const VariantConfig& vc = ck.model.config();
  DictionarySet dicts;
  EmbeddingStore store(ck.model.embedding_meta().dim, ck.model.embedding_meta().policy,
                       ck.model.embedding_meta().seed);
  EmbeddingStore* sim_store = nullptr;
  if (vc.needs_rules()) {
    std::string dict_path = dict_override.empty() ? cfg.dictionaries : dict_override;
    if (dict_path.empty()) throw ConfigError("checkpoint variant needs a dictionary file");
    dicts = load_dictionaries(dict_path, ck.model.tags(), vc.rules.case_fold);
    sim_store = vc.rules.match_mode == MatchMode::similarity ? &store : nullptr;
  }

  std::ostringstream out;
  bool first = true;
  for (const auto& sentence : sentences) {
    std::vector<RuleVector> rvs;
    if (vc.needs_rules())
      rvs = apply_rules(sentence, dicts, vc.rules, ck.model.tags(), sim_store);
    auto pred = ck.model.predict(sentence, vc.needs_rules() ? &rvs : nullptr);
    if (!first) out << '\n';
    first = false;
    for (size_t i = 0; i < sentence.size(); ++i)
      out << sentence.tokens[i].surface << '\t' << sentence.doc_id << '\t'
          << ck.model.tags().name(pred[i]) << '\n';
  }
  write_file(out_path, out.str());
}

struct AblateSummary {
  std::string jsonl_path;
  std::string csv_path;
  std::string tail_csv_path;
  AblationGrid grid;
};

inline AblateSummary cmd_ablate(const RunConfig& cfg, const std::vector<std::string>& variants,
                                const std::vector<int>& percents,
                                const std::vector<uint64_t>& seeds) {
  ParsedCorpus corpus = parse_corpus_file(cfg.corpus);
  CorpusSplit split = split_corpus(corpus.sentences, cfg.split, cfg.seed);

  DictionarySet dicts;
  bool have_dicts = !cfg.dictionaries.empty();
  if (have_dicts) dicts = load_dictionaries(cfg.dictionaries, corpus.tags, cfg.case_fold);

  VariantConfig base = cfg.variant_config();
  std::vector<Variant> vs;
  for (const auto& v : variants) vs.push_back(variant_from_letter(v));

  EmbeddingStore store = detail::make_store(cfg);
  AblateSummary sum;
  sum.grid = run_ablation(split, corpus.tags, have_dicts ? &dicts : nullptr, store, base,
                          cfg.optimizer_config(), cfg.epochs, vs, percents, seeds);

  std::filesystem::create_directories(cfg.output_dir);
  std::ostringstream jsonl;
  for (const auto& cell : sum.grid.cells) {
    nlohmann::json j = detail::report_to_json(cell.report);
    j["variant"] = std::string(1, variant_letter(cell.variant));
    j["percent"] = cell.percent;
    j["seed"] = cell.seed;
    j["train_size"] = cell.train_size;
    jsonl << j.dump() << '\n';
  }
  sum.jsonl_path = (std::filesystem::path(cfg.output_dir) / "ablation.jsonl").string();
  write_file(sum.jsonl_path, jsonl.str());

  char buf[64];
  auto format_cell = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  std::ostringstream csv;
  csv << "variant";
  for (int p : percents) csv << ',' << p << "_micro," << p << "_macro";
  csv << '\n';
  for (const auto& v : variants) {
    csv << v;
    for (int p : percents) {
      const auto& m = sum.grid.medians.at({v[0], p});
      csv << ',' << format_cell(m.micro_f1) << ',' << format_cell(m.macro_f1);
    }
    csv << '\n';
  }
  sum.csv_path = (std::filesystem::path(cfg.output_dir) / "ablation_summary.csv").string();
  write_file(sum.csv_path, csv.str());

  std::ostringstream tail_csv;
  tail_csv << "variant";
  for (int p : percents) tail_csv << ',' << p << "_tail_micro";
  tail_csv << '\n';
  for (const auto& v : variants) {
    tail_csv << v;
    for (int p : percents) {
      const auto& m = sum.grid.medians.at({v[0], p});
      tail_csv << ',' << (m.tail_micro_f1 ? format_cell(*m.tail_micro_f1) : "");
    }
    tail_csv << '\n';
  }
  sum.tail_csv_path = (std::filesystem::path(cfg.output_dir) / "ablation_tail.csv").string();
  write_file(sum.tail_csv_path, tail_csv.str());
  return sum;
}

struct SynthSummary {
  std::string corpus_path;
  std::string dict_path;
  size_t sentences = 0;
  size_t docs = 0;
  size_t labels = 0;
};

inline SynthSummary cmd_synth(const std::string& config_path, const std::string& out_dir) {
  nlohmann::json j = read_json_file(config_path);
  SyntheticConfig cfg;
  try {
    cfg.num_tags = j.value("num_tags", cfg.num_tags);
    cfg.num_sentences = j.value("num_sentences", cfg.num_sentences);
    cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
    cfg.skew = j.value("skew", cfg.skew);
    cfg.negated_fraction = j.value("negated_fraction", cfg.negated_fraction);
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad synthetic config: ") + e.what());
  }
  SyntheticCorpus corpus = generate_synthetic(cfg, cfg.seed);

  std::filesystem::create_directories(out_dir);
  SynthSummary sum;
  sum.corpus_path = (std::filesystem::path(out_dir) / "corpus.txt").string();
  std::ostringstream body;
  serialize_corpus(corpus.sentences, corpus.tags, body);
  write_file(sum.corpus_path, body.str());

  sum.dict_path = (std::filesystem::path(out_dir) / "dicts.json").string();
  save_dictionaries(sum.dict_path, corpus.dicts, corpus.tags);

  sum.sentences = corpus.sentences.size();
  std::set<uint64_t> docs;
  for (const auto& s : corpus.sentences) docs.insert(s.doc_id);
  sum.docs = docs.size();
  sum.labels = corpus.tags.size() - 1;
  return sum;
}

}  // namespace ruletag

#endif  // RULETAG_COMMANDS_HPP
