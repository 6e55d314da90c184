// Command-line front end: ingest | rules | train | eval | predict | ablate
// plus synth for generating the synthetic benchmark corpus.
//
// Exit codes: 0 ok, 1 config error, 2 data error, 3 numeric error, 4 I/O error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ruletag/commands.hpp"

namespace {

using namespace ruletag;

struct CliOptions {
  std::string config_path;
  std::string corpus, dictionaries, embeddings, output_dir;
  std::string variant, match_mode, inference_source, negative_scope, split_name = "test";
  std::string checkpoint, tokens, out_file;
  std::vector<double> split_fractions;
  std::vector<std::string> variants{"A", "B", "C", "D"};
  std::vector<int> percents{20, 40, 60, 80, 100};
  std::vector<uint64_t> seeds{1, 2, 3};
  int percent = -1;
  long long seed = -1;
  long long window = -1;
  long long epochs = -1;
  double penalty = -1.0, imitation = -1.0, lr = -1.0, dropout = -1.0;
  long long hidden = -1, dim = -1;
  std::string oov_policy;
  bool freeze_embeddings = false;
};

// Flags override whatever the JSON config carries.
RunConfig effective_config(const CliOptions& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : RunConfig::from_file(o.config_path);
  if (!o.corpus.empty()) cfg.corpus = o.corpus;
  if (!o.dictionaries.empty()) cfg.dictionaries = o.dictionaries;
  if (!o.embeddings.empty()) cfg.embeddings = o.embeddings;
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (!o.variant.empty()) cfg.variant = o.variant;
  if (!o.match_mode.empty()) cfg.match_mode = o.match_mode;
  if (!o.inference_source.empty()) cfg.inference_source = o.inference_source;
  if (!o.negative_scope.empty()) cfg.negative_scope = o.negative_scope;
  if (o.percent >= 0) cfg.percent = o.percent;
  if (o.seed >= 0) cfg.seed = static_cast<uint64_t>(o.seed);
  if (o.window >= 0) cfg.window = static_cast<size_t>(o.window);
  if (o.epochs >= 0) cfg.epochs = static_cast<size_t>(o.epochs);
  if (o.penalty >= 0) cfg.penalty = o.penalty;
  if (o.imitation >= 0) cfg.imitation = o.imitation;
  if (o.lr >= 0) cfg.lr = o.lr;
  if (o.dropout >= 0) cfg.dropout = o.dropout;
  if (o.hidden >= 0) cfg.hidden = static_cast<size_t>(o.hidden);
  if (o.dim >= 0) cfg.dim = static_cast<size_t>(o.dim);
  if (!o.split_fractions.empty()) {
    if (o.split_fractions.size() != 3)
      throw ConfigError("--split takes exactly 3 fractions");
    cfg.split = {o.split_fractions[0], o.split_fractions[1], o.split_fractions[2]};
  }
  return cfg;
}

void add_shared_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--config", o.config_path, "run config JSON");
  cmd->add_option("--corpus", o.corpus, "corpus file (token doc_id TAG per line)");
  cmd->add_option("--dicts", o.dictionaries, "dictionary JSON");
  cmd->add_option("--embeddings", o.embeddings, "word-vector text file");
  cmd->add_option("--out", o.output_dir, "output directory");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--variant", o.variant, "model variant A|B|C|D");
  cmd->add_option("--percent", o.percent, "train subsample percent (20|40|60|80|100)");
  cmd->add_option("--window", o.window, "rule window half-width l");
  cmd->add_option("--penalty", o.penalty, "teacher damping exponent C");
  cmd->add_option("--imitation", o.imitation, "imitation weight pi");
  cmd->add_option("--epochs", o.epochs, "training epochs");
  cmd->add_option("--lr", o.lr, "learning rate");
  cmd->add_option("--dropout", o.dropout, "dropout rate");
  cmd->add_option("--hidden", o.hidden, "encoder hidden size");
  cmd->add_option("--dim", o.dim, "embedding dim");
  cmd->add_option("--match-mode", o.match_mode, "rule matching: exact|similarity");
  cmd->add_option("--inference-source", o.inference_source, "variant D inference: teacher|student");
  cmd->add_option("--negative-scope", o.negative_scope, "negative dictionary scope: sentence|token");
  cmd->add_option("--split", o.split_fractions, "train/val/test fractions")->expected(3);
}

int run(int argc, char** argv) {
  CLI::App app{"rule-augmented sequence-labeling toolkit"};
  app.require_subcommand(1);
  CliOptions o;

  auto* ingest = app.add_subcommand("ingest", "parse, validate and split a corpus");
  add_shared_flags(ingest, o);

  auto* rules = app.add_subcommand("rules", "apply dictionaries and report rule vectors");
  add_shared_flags(rules, o);
  rules->add_option("--eval-split", o.split_name, "split to score: train|val|test|all")
      ->default_val("all");

  auto* train_cmd = app.add_subcommand("train", "train a tagger variant");
  add_shared_flags(train_cmd, o);

  auto* eval_cmd = app.add_subcommand("eval", "score a checkpoint on a corpus split");
  add_shared_flags(eval_cmd, o);
  eval_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint JSON")->required();
  eval_cmd->add_option("--eval-split", o.split_name, "split to score: train|val|test|all");

  auto* predict = app.add_subcommand("predict", "tag a raw token file");
  add_shared_flags(predict, o);
  predict->add_option("--checkpoint", o.checkpoint, "checkpoint JSON")->required();
  predict->add_option("--tokens", o.tokens, "input token file")->required();
  predict->add_option("--output", o.out_file, "output file")->required();

  auto* ablate = app.add_subcommand("ablate", "variant x training-size x seed grid");
  add_shared_flags(ablate, o);
  ablate->add_option("--variants", o.variants, "variants to run");
  ablate->add_option("--percents", o.percents, "training-size percents");
  ablate->add_option("--seeds", o.seeds, "seeds for the grid");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus + dictionaries");
  synth->add_option("--config", o.config_path, "synthetic config JSON")->required();
  synth->add_option("--out", o.output_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (ingest->parsed()) {
    RunConfig cfg = effective_config(o);
    auto sum = cmd_ingest(cfg.corpus, cfg.output_dir, cfg.split, cfg.seed);
    std::cout << sum.table();
    std::cout << "normalized corpus: " << sum.normalized_path << "\n";
  } else if (rules->parsed()) {
    RunConfig cfg = effective_config(o);
    auto sum = cmd_rules(cfg, o.split_name);
    std::printf("tokens %zu\nrule_only_micro_f1 %.6f\nrule_only_macro_f1 %.6f\n", sum.tokens,
                sum.rule_only.micro_f1, sum.rule_only.macro_f1);
    std::cout << "report: " << sum.report_path << "\n";
  } else if (train_cmd->parsed()) {
    RunConfig cfg = effective_config(o);
    auto sum = cmd_train(cfg);
    std::printf("best_epoch %zu val_micro_f1 %.6f\n", sum.log.best_epoch,
                sum.log.best_val_micro_f1);
    std::cout << "checkpoint: " << sum.checkpoint_path << "\nlog: " << sum.log_path << "\n";
  } else if (eval_cmd->parsed()) {
    RunConfig cfg = effective_config(o);
    auto sum = cmd_eval(o.checkpoint, cfg.corpus, o.split_name.empty() ? "test" : o.split_name,
                        cfg.output_dir.empty() ? "out" : cfg.output_dir, cfg.dictionaries);
    std::printf("micro_f1 %.6f\nmacro_f1 %.6f\n", sum.report.micro_f1, sum.report.macro_f1);
    if (sum.report.tail_micro_f1)
      std::printf("tail_micro_f1 %.6f\n", *sum.report.tail_micro_f1);
    std::cout << "report: " << sum.report_path << "\n";
  } else if (predict->parsed()) {
    RunConfig cfg = effective_config(o);
    cmd_predict(o.checkpoint, o.tokens, o.out_file, cfg.dictionaries);
    std::cout << "tagged: " << o.out_file << "\n";
  } else if (ablate->parsed()) {
    RunConfig cfg = effective_config(o);
    auto sum = cmd_ablate(cfg, o.variants, o.percents, o.seeds);
    std::cout << "cells: " << sum.grid.cells.size() << "\njsonl: " << sum.jsonl_path
              << "\ncsv: " << sum.csv_path << "\ntail csv: " << sum.tail_csv_path << "\n";
  } else if (synth->parsed()) {
    auto sum = cmd_synth(o.config_path, o.output_dir);
    std::printf("sentences %zu docs %zu labels %zu\n", sum.sentences, sum.docs, sum.labels);
    std::cout << "corpus: " << sum.corpus_path << "\ndicts: " << sum.dict_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ruletag::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ruletag::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const ruletag::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const ruletag::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
