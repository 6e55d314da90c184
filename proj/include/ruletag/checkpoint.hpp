#ifndef RULETAG_CHECKPOINT_HPP
#define RULETAG_CHECKPOINT_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "ruletag/model.hpp"

namespace ruletag {

inline nlohmann::json tensor_to_json(const Tensor& t) {
  return nlohmann::json{{"shape", t.shape}, {"data", t.data}};
}

inline Tensor tensor_from_json(const nlohmann::json& j) {
  Tensor t(j.at("shape").get<std::vector<size_t>>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != t.numel()) throw DataError("checkpoint tensor data does not match shape");
  t.data = std::move(data);
  return t;
}

inline nlohmann::json rule_config_to_json(const RuleConfig& rc) {
  return nlohmann::json{
      {"window", rc.window},
      {"match_mode", match_mode_name(rc.match_mode)},
      {"similarity_threshold", rc.similarity_threshold},
      {"case_fold", rc.case_fold},
      {"negative_scope", rc.negative_scope == NegativeScope::sentence ? "sentence" : "token"}};
}

inline RuleConfig rule_config_from_json(const nlohmann::json& j) {
  RuleConfig rc;
  rc.window = j.at("window").get<size_t>();
  rc.match_mode = match_mode_from_name(j.at("match_mode").get<std::string>());
  rc.similarity_threshold = j.at("similarity_threshold").get<double>();
  rc.case_fold = j.at("case_fold").get<bool>();
  std::string scope = j.at("negative_scope").get<std::string>();
  if (scope != "sentence" && scope != "token")
    throw ConfigError("unknown negative scope '" + scope + "'");
  rc.negative_scope = scope == "sentence" ? NegativeScope::sentence : NegativeScope::token;
  return rc;
}

inline nlohmann::json variant_config_to_json(const VariantConfig& vc) {
  return nlohmann::json{
      {"variant", std::string(1, variant_letter(vc.variant))},
      {"dim", vc.dim},
      {"hidden", vc.hidden},
      {"rule_hidden", vc.rule_hidden},
      {"dropout", vc.dropout},
      {"rules", rule_config_to_json(vc.rules)},
      {"distill",
       {{"penalty", vc.distill.penalty},
        {"imitation", vc.distill.imitation},
        {"inference_source", inference_source_name(vc.distill.inference_source)},
        {"anneal_imitation", vc.distill.anneal_imitation},
        {"anneal_base", vc.distill.anneal_base}}},
      {"trainable_embeddings", vc.trainable_embeddings}};
}

inline VariantConfig variant_config_from_json(const nlohmann::json& j) {
  VariantConfig vc;
  vc.variant = variant_from_letter(j.at("variant").get<std::string>());
  vc.dim = j.at("dim").get<size_t>();
  vc.hidden = j.at("hidden").get<size_t>();
  vc.rule_hidden = j.at("rule_hidden").get<size_t>();
  vc.dropout = j.at("dropout").get<double>();
  vc.rules = rule_config_from_json(j.at("rules"));
  const auto& d = j.at("distill");
  vc.distill.penalty = d.at("penalty").get<double>();
  vc.distill.imitation = d.at("imitation").get<double>();
  vc.distill.inference_source =
      inference_source_from_name(d.at("inference_source").get<std::string>());
  vc.distill.anneal_imitation = d.at("anneal_imitation").get<bool>();
  vc.distill.anneal_base = d.at("anneal_base").get<double>();
  vc.trainable_embeddings = j.at("trainable_embeddings").get<bool>();
  return vc;
}

// Self-describing checkpoint: model config, tag inventory, vocabulary,
// embedding provenance, all named parameters, and the originating run
// config as an opaque passthrough.
inline nlohmann::json checkpoint_to_json(const Tagger& model, const nlohmann::json& run_config) {
  nlohmann::json params;
  for (const auto& [name, tensor] : model.params()) params[name] = tensor_to_json(tensor);
  return nlohmann::json{
      {"format", "ruletag-checkpoint-v1"},
      {"variant_config", variant_config_to_json(model.config())},
      {"tags", {{"names", model.tags().names()}, {"other_index", model.tags().other_index()}}},
      {"vocab", model.vocab()},
      {"embedding",
       {{"dim", model.embedding_meta().dim},
        {"policy", oov_policy_name(model.embedding_meta().policy)},
        {"seed", model.embedding_meta().seed},
        {"trainable", model.embedding_meta().trainable}}},
      {"params", params},
      {"run_config", run_config}};
}

struct Checkpoint {
  Tagger model;
  nlohmann::json run_config;
};

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "ruletag-checkpoint-v1")
    throw DataError("not a ruletag checkpoint (bad format field)");
  VariantConfig vc = variant_config_from_json(j.at("variant_config"));
  TagSet tags = TagSet::from_names(j.at("tags").at("names").get<std::vector<std::string>>());
  if (tags.other_index() != j.at("tags").at("other_index").get<int>())
    throw DataError("checkpoint tag set has inconsistent other index");
  EmbeddingMeta meta;
  meta.dim = j.at("embedding").at("dim").get<size_t>();
  meta.policy = oov_policy_from_name(j.at("embedding").at("policy").get<std::string>());
  meta.seed = j.at("embedding").at("seed").get<uint64_t>();
  meta.trainable = j.at("embedding").at("trainable").get<bool>();
  auto vocab = j.at("vocab").get<std::vector<std::string>>();
  ModelParameters params;
  for (const auto& [name, tj] : j.at("params").items()) params.emplace(name, tensor_from_json(tj));
  Checkpoint ck{Tagger(vc, tags, meta, std::move(vocab), std::move(params)),
                j.value("run_config", nlohmann::json::object())};
  return ck;
}

inline void save_checkpoint(const std::string& path, const Tagger& model,
                            const nlohmann::json& run_config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint '" + path + "'");
  out << checkpoint_to_json(model, run_config).dump(1) << '\n';
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed checkpoint '" + path + "': " + e.what());
  }
  try {
    return checkpoint_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("incomplete checkpoint '" + path + "': " + e.what());
  }
}

}  // namespace ruletag

#endif  // RULETAG_CHECKPOINT_HPP
