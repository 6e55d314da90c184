#ifndef RULETAG_MODEL_HPP
#define RULETAG_MODEL_HPP

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ruletag/autodiff.hpp"
#include "ruletag/corpus.hpp"
#include "ruletag/embeddings.hpp"
#include "ruletag/metrics.hpp"
#include "ruletag/rules.hpp"

namespace ruletag {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------
// A: bidirectional recurrent tagger over word embeddings.
// B: rule vector concatenated onto the word embedding.
// C: two parallel encoders, one over embeddings, one over rule vectors.
// D: rule knowledge distilled through a teacher projection of the output.

enum class Variant { A, B, C, D };

inline char variant_letter(Variant v) {
  switch (v) {
    case Variant::A: return 'A';
    case Variant::B: return 'B';
    case Variant::C: return 'C';
    default: return 'D';
  }
}

inline Variant variant_from_letter(const std::string& s) {
  if (s == "A") return Variant::A;
  if (s == "B") return Variant::B;
  if (s == "C") return Variant::C;
  if (s == "D") return Variant::D;
  throw ConfigError("unknown variant '" + s + "', expected A|B|C|D");
}

enum class InferenceSource { teacher, student };

inline const char* inference_source_name(InferenceSource s) {
  return s == InferenceSource::teacher ? "teacher" : "student";
}

inline InferenceSource inference_source_from_name(const std::string& s) {
  if (s == "teacher") return InferenceSource::teacher;
  if (s == "student") return InferenceSource::student;
  throw ConfigError("unknown inference source '" + s + "'");
}

struct DistillationConfig {
  double penalty = 1.0;    // damping exponent C for rule-disallowed labels
  double imitation = 0.4;  // mixture weight between gold loss and teacher KL
  InferenceSource inference_source = InferenceSource::teacher;

  // Optional ramp from 0 toward `imitation` over epochs; constant when off.
  bool anneal_imitation = false;
  double anneal_base = 0.95;

  double imitation_at(size_t epoch) const {
    if (!anneal_imitation) return imitation;
    return imitation * (1.0 - std::pow(anneal_base, static_cast<double>(epoch)));
  }
};

struct VariantConfig {
  Variant variant = Variant::A;
  size_t dim = 50;
  size_t hidden = 100;
  size_t rule_hidden = 100;  // width of the rule-vector encoder (variant C)
  double dropout = 0.5;
  RuleConfig rules;
  DistillationConfig distill;
  bool trainable_embeddings = true;

  bool needs_rules() const { return variant != Variant::A; }

  void validate() const {
    if (dim == 0) throw ConfigError("embedding dim must be positive");
    if (hidden == 0) throw ConfigError("hidden size must be positive");
    if (variant == Variant::C && rule_hidden == 0)
      throw ConfigError("rule encoder hidden size must be positive");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout rate must be in [0,1)");
    if (rules.match_mode == MatchMode::similarity &&
        (rules.similarity_threshold <= 0.0 || rules.similarity_threshold > 1.0))
      throw ConfigError("similarity threshold must be in (0,1]");
    if (distill.penalty < 0.0) throw ConfigError("penalty must be non-negative");
    if (distill.imitation < 0.0 || distill.imitation > 1.0)
      throw ConfigError("imitation must be in [0,1]");
  }
};

// ---------------------------------------------------------------------------
// Teacher projection and distillation loss
// ---------------------------------------------------------------------------

// Reweights the student distribution toward the rule vector: labels the rule
// allows keep full weight, every other label is damped by exp(-penalty),
// then the vector is renormalized.
inline std::vector<double> project_teacher(const std::vector<double>& student,
                                           const RuleVector& rule,
                                           const DistillationConfig& config) {
  if (student.size() != rule.size())
    throw DataError("project_teacher: distribution length " + std::to_string(student.size()) +
                    " vs rule length " + std::to_string(rule.size()));
  if (rule.count() == 0) throw DataError("project_teacher: all-zero rule vector");
  double damp = std::exp(-config.penalty);
  std::vector<double> q(student.size());
  double z = 0.0;
  for (size_t i = 0; i < q.size(); ++i) {
    q[i] = student[i] * (rule.test(i) ? 1.0 : damp);
    z += q[i];
  }
  if (z <= 0.0) throw NumericError("project_teacher: zero normalizer");
  for (double& v : q) v /= z;
  return q;
}

// Mean over tokens of (1-pi) * CE(gold, student) + pi * KL(teacher, student).
// The teacher is a constant target; no gradient flows through the projection.
inline double distill_loss(const std::vector<std::vector<double>>& student,
                           const std::vector<std::vector<double>>& teacher,
                           const std::vector<int>& gold, const DistillationConfig& config) {
  if (student.size() != teacher.size() || student.size() != gold.size())
    throw DataError("distill_loss: list length mismatch");
  if (student.empty()) throw DataError("distill_loss: empty input");
  double pi = config.imitation;
  double total = 0.0;
  for (size_t n = 0; n < student.size(); ++n) {
    if (gold[n] < 0 || static_cast<size_t>(gold[n]) >= student[n].size())
      throw DataError("distill_loss: gold tag out of range");
    double ce = -std::log(std::max(student[n][static_cast<size_t>(gold[n])], kProbFloor));
    double kl = kl_divergence(teacher[n], student[n]);
    total += (1.0 - pi) * ce + pi * kl;
  }
  return total / static_cast<double>(student.size());
}

// ---------------------------------------------------------------------------
// Tagger
// ---------------------------------------------------------------------------

struct EmbeddingMeta {
  size_t dim = 0;
  OovPolicy policy = OovPolicy::random_normal;
  uint64_t seed = 0;
  bool trainable = true;
};

class Tagger {
 public:
  Tagger() = default;

  Tagger(VariantConfig config, TagSet tags, EmbeddingMeta emb, std::vector<std::string> vocab,
         ModelParameters params)
      : config_(std::move(config)),
        tags_(std::move(tags)),
        emb_(emb),
        vocab_(std::move(vocab)),
        params_(std::move(params)) {
    for (size_t i = 0; i < vocab_.size(); ++i) vocab_index_.emplace(vocab_[i], i);
  }

  // Fresh parameters: embedding rows come from the store, recurrent and
  // projection weights from a seeded normal scaled by 1/sqrt(fan_in).
  static Tagger initialize(const VariantConfig& config, const TagSet& tags,
                           EmbeddingStore& store, const std::vector<std::string>& corpus_vocab,
                           uint64_t seed) {
    config.validate();
    if (store.dim() != config.dim)
      throw ConfigError("embedding store dim " + std::to_string(store.dim()) +
                        " != configured dim " + std::to_string(config.dim));
    std::mt19937_64 rng(derive_seed(seed, "init"));

    ModelParameters params;
    Tensor emb(std::vector<size_t>{corpus_vocab.size(), config.dim});
    for (size_t i = 0; i < corpus_vocab.size(); ++i) {
      auto v = store.lookup(corpus_vocab[i]);
      for (size_t j = 0; j < config.dim; ++j) emb.at2(i, j) = v[j];
    }
    params.emplace("emb", std::move(emb));

    size_t k = tags.size();
    size_t enc_in = config.variant == Variant::B ? config.dim + k : config.dim;
    add_lstm(params, "enc_fwd", enc_in, config.hidden, rng);
    add_lstm(params, "enc_bwd", enc_in, config.hidden, rng);
    size_t rep = 2 * config.hidden;
    if (config.variant == Variant::C) {
      add_lstm(params, "rules_fwd", k, config.rule_hidden, rng);
      add_lstm(params, "rules_bwd", k, config.rule_hidden, rng);
      rep += 2 * config.rule_hidden;
    }
    params.emplace("head_W", init_matrix(k, rep, rng));
    params.emplace("head_b", Tensor(std::vector<size_t>{k}));

    EmbeddingMeta meta{config.dim, store.oov_policy(), store.oov_seed(),
                       store.trainable() && config.trainable_embeddings};
    return Tagger(config, tags, meta, corpus_vocab, std::move(params));
  }

  const VariantConfig& config() const { return config_; }
  const TagSet& tags() const { return tags_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const EmbeddingMeta& embedding_meta() const { return emb_; }
  ModelParameters& params() { return params_; }
  const ModelParameters& params() const { return params_; }

  struct Forward {
    std::vector<Node*> logits;               // one per token
    std::map<std::string, Node*> leaves;     // parameter leaves on the tape
  };

  // Builds the variant architecture on the tape. Rule vectors are required
  // for B, C and D (D consumes them only through the loss and inference).
  Forward forward(Tape& tape, const Sentence& sentence, const std::vector<RuleVector>* rules,
                  bool training, std::mt19937_64& dropout_rng) const {
    if (sentence.tokens.empty()) throw DataError("forward: empty sentence");
    bool rules_as_input = config_.variant == Variant::B || config_.variant == Variant::C;
    if (rules_as_input) {
      if (rules == nullptr) throw ConfigError("variant requires rule vectors");
      if (rules->size() != sentence.size())
        throw DataError("rule vector count " + std::to_string(rules->size()) +
                        " != sentence length " + std::to_string(sentence.size()));
      for (const auto& rv : *rules)
        if (rv.size() != tags_.size())
          throw DataError("rule vector length " + std::to_string(rv.size()) +
                          " != tag set size " + std::to_string(tags_.size()));
    }

    Forward fw;
    for (const auto& [name, tensor] : params_) {
      if (name == "emb" && !emb_.trainable) continue;
      fw.leaves.emplace(name, tape.leaf(tensor));
    }
    Node* emb_leaf = emb_.trainable ? fw.leaves.at("emb") : nullptr;

    size_t n = sentence.size();
    std::vector<Node*> word_inputs(n);
    for (size_t i = 0; i < n; ++i)
      word_inputs[i] = embedding_node(tape, emb_leaf, sentence.tokens[i].surface);

    std::vector<Node*> rule_inputs;
    if (rules_as_input) {
      rule_inputs.resize(n);
      for (size_t i = 0; i < n; ++i) {
        Tensor rv(std::vector<size_t>{tags_.size()});
        for (size_t j = 0; j < tags_.size(); ++j) rv[j] = (*rules)[i].test(j) ? 1.0 : 0.0;
        rule_inputs[i] = tape.leaf(std::move(rv));
      }
    }

    std::vector<Node*> enc_inputs(n);
    for (size_t i = 0; i < n; ++i) {
      Node* x = config_.variant == Variant::B ? concat(tape, word_inputs[i], rule_inputs[i])
                                              : word_inputs[i];
      enc_inputs[i] = dropout(tape, x, config_.dropout, training, dropout_rng);
    }

    LstmParamNodes fwd{fw.leaves.at("enc_fwd_W"), fw.leaves.at("enc_fwd_b")};
    LstmParamNodes bwd{fw.leaves.at("enc_bwd_W"), fw.leaves.at("enc_bwd_b")};
    EncoderState enc = bi_encode(tape, enc_inputs, fwd, bwd);

    EncoderState rule_enc;
    if (config_.variant == Variant::C) {
      LstmParamNodes rf{fw.leaves.at("rules_fwd_W"), fw.leaves.at("rules_fwd_b")};
      LstmParamNodes rb{fw.leaves.at("rules_bwd_W"), fw.leaves.at("rules_bwd_b")};
      rule_enc = bi_encode(tape, rule_inputs, rf, rb);
    }

    Node* head_W = fw.leaves.at("head_W");
    Node* head_b = fw.leaves.at("head_b");
    fw.logits.resize(n);
    for (size_t i = 0; i < n; ++i) {
      Node* rep = concat(tape, enc.forward_hidden[i], enc.backward_hidden[i]);
      if (config_.variant == Variant::C)
        rep = concat(tape, rep, concat(tape, rule_enc.forward_hidden[i], rule_enc.backward_hidden[i]));
      fw.logits[i] = add(tape, matvec(tape, head_W, rep), head_b);
    }
    return fw;
  }

  // Eval-mode student distributions, one per token.
  std::vector<std::vector<double>> forward_probs(const Sentence& sentence,
                                                 const std::vector<RuleVector>* rules) const {
    Tape tape;
    std::mt19937_64 rng(0);
    Forward fw = forward(tape, sentence, rules, false, rng);
    std::vector<std::vector<double>> out(fw.logits.size());
    for (size_t i = 0; i < fw.logits.size(); ++i) {
      Tensor p = softmax_values(fw.logits[i]->value);
      out[i].assign(p.data.begin(), p.data.end());
    }
    return out;
  }

  // Argmax tags. Variant D with inference_source = teacher projects the
  // student distribution through the rule vector first.
  std::vector<int> predict(const Sentence& sentence, const std::vector<RuleVector>* rules) const {
    auto probs = forward_probs(sentence, rules);
    bool use_teacher = config_.variant == Variant::D &&
                       config_.distill.inference_source == InferenceSource::teacher;
    if (use_teacher) {
      if (rules == nullptr) throw ConfigError("teacher inference requires rule vectors");
      if (rules->size() != probs.size()) throw DataError("rule vector count mismatch");
    }
    std::vector<int> out(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) {
      if (use_teacher) {
        auto q = project_teacher(probs[i], (*rules)[i], config_.distill);
        out[i] = argmax(q);
      } else {
        out[i] = argmax(probs[i]);
      }
    }
    return out;
  }

  // Embedding row as plain values; unseen words fall back to the store policy.
  std::vector<double> embedding_values(const std::string& word) const {
    auto it = vocab_index_.find(word);
    if (it != vocab_index_.end()) {
      const Tensor& emb = params_.at("emb");
      std::vector<double> v(config_.dim);
      for (size_t j = 0; j < config_.dim; ++j) v[j] = emb.at2(it->second, j);
      return v;
    }
    return oov_vector(word);
  }

 private:
  static Tensor init_matrix(size_t rows, size_t cols, std::mt19937_64& rng) {
    Tensor t(std::vector<size_t>{rows, cols});
    std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(cols)));
    for (double& v : t.data) v = dist(rng);
    return t;
  }

  static void add_lstm(ModelParameters& params, const std::string& prefix, size_t in,
                       size_t hidden, std::mt19937_64& rng) {
    params.emplace(prefix + "_W", init_matrix(4 * hidden, in + hidden, rng));
    Tensor b(std::vector<size_t>{4 * hidden});
    for (size_t i = hidden; i < 2 * hidden; ++i) b[i] = 1.0;  // forget-gate bias
    params.emplace(prefix + "_b", std::move(b));
  }

  std::vector<double> oov_vector(const std::string& word) const {
    std::vector<double> v(config_.dim, 0.0);
    if (emb_.policy == OovPolicy::random_normal) {
      std::mt19937_64 rng(splitmix64(emb_.seed ^ fnv1a(word)));
      std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(config_.dim)));
      for (double& x : v) x = dist(rng);
    }
    return v;
  }

  Node* embedding_node(Tape& tape, Node* emb_leaf, const std::string& word) const {
    auto it = vocab_index_.find(word);
    if (it == vocab_index_.end())
      return tape.leaf(Tensor::vector_of(oov_vector(word)));
    if (emb_leaf != nullptr) return row(tape, emb_leaf, it->second);
    const Tensor& emb = params_.at("emb");
    Tensor v(std::vector<size_t>{config_.dim});
    for (size_t j = 0; j < config_.dim; ++j) v[j] = emb.at2(it->second, j);
    return tape.leaf(std::move(v));
  }

  static int argmax(const std::vector<double>& v) {
    size_t best = 0;
    for (size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[best]) best = i;
    return static_cast<int>(best);
  }

  VariantConfig config_;
  TagSet tags_;
  EmbeddingMeta emb_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, size_t> vocab_index_;
  ModelParameters params_;
};

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainLogEntry {
  size_t epoch;
  double train_loss;
  double val_micro_f1;
};

struct TrainLog {
  std::vector<TrainLogEntry> entries;
  size_t best_epoch = 0;
  double best_val_micro_f1 = 0.0;

  std::string to_text() const {
    std::string out;
    char buf[128];
    for (const auto& e : entries) {
      std::snprintf(buf, sizeof(buf), "epoch %zu train_loss %.6f val_micro_f1 %.6f\n", e.epoch,
                    e.train_loss, e.val_micro_f1);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "best_epoch %zu val_micro_f1 %.6f\n", best_epoch,
                  best_val_micro_f1);
    out += buf;
    return out;
  }
};

struct TrainResult {
  Tagger model;
  TrainLog log;
};

namespace detail {

// Sentence loss on the tape. Variants A/B/C use mean token cross-entropy;
// D mixes cross-entropy with KL against the detached teacher projection.
inline Node* sentence_loss(Tape& tape, const Tagger::Forward& fw, const Sentence& sentence,
                           const std::vector<RuleVector>* rules, const VariantConfig& config,
                           size_t epoch) {
  size_t n = sentence.size();
  std::vector<Node*> token_losses(n);
  if (config.variant == Variant::D) {
    if (rules == nullptr) throw ConfigError("variant D training requires rule vectors");
    double pi = config.distill.imitation_at(epoch);
    for (size_t i = 0; i < n; ++i) {
      SoftmaxXent sx = softmax_xent(tape, fw.logits[i], sentence.tokens[i].gold_tag);
      std::vector<double> student(sx.probs.data.begin(), sx.probs.data.end());
      std::vector<double> teacher = project_teacher(student, (*rules)[i], config.distill);
      Node* q = softmax(tape, fw.logits[i]);
      Node* kl = kl_to_const(tape, Tensor::vector_of(teacher), q);
      token_losses[i] = add(tape, scale(tape, sx.loss, 1.0 - pi), scale(tape, kl, pi));
    }
  } else {
    for (size_t i = 0; i < n; ++i)
      token_losses[i] = softmax_xent(tape, fw.logits[i], sentence.tokens[i].gold_tag).loss;
  }
  return scale(tape, sum_scalars(tape, token_losses), 1.0 / static_cast<double>(n));
}

inline std::vector<std::vector<RuleVector>> rule_vectors_for(
    const std::vector<Sentence>& sentences, const DictionarySet& dicts, const RuleConfig& config,
    const TagSet& tags, EmbeddingStore* store) {
  std::vector<std::vector<RuleVector>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(apply_rules(s, dicts, config, tags, store));
  return out;
}

}  // namespace detail

// Micro-F1 of the model over a sentence list.
inline double micro_f1_on(const Tagger& model, const std::vector<Sentence>& sentences,
                          const std::vector<std::vector<RuleVector>>* rules) {
  std::vector<int> gold, pred;
  for (size_t i = 0; i < sentences.size(); ++i) {
    auto p = model.predict(sentences[i], rules ? &(*rules)[i] : nullptr);
    pred.insert(pred.end(), p.begin(), p.end());
    for (const auto& tok : sentences[i].tokens) gold.push_back(tok.gold_tag);
  }
  return evaluate(gold, pred, model.tags()).micro_f1;
}

// Seeded sentence-by-sentence epochs; logs validation micro-F1 per epoch and
// returns the parameters of the best validation epoch.
inline TrainResult train(const VariantConfig& variant, const OptimizerConfig& optimizer,
                         size_t epochs, const CorpusSplit& split, const TagSet& tags,
                         const DictionarySet* dicts, EmbeddingStore& store, uint64_t seed) {
  variant.validate();
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (split.train.empty()) throw DataError("train split is empty");
  if (variant.needs_rules() && dicts == nullptr)
    throw ConfigError("variant requires a dictionary set");

  auto vocab = collect_vocabulary({&split.train, &split.val, &split.test});
  Tagger model = Tagger::initialize(variant, tags, store, vocab, seed);

  EmbeddingStore* sim_store =
      variant.rules.match_mode == MatchMode::similarity ? &store : nullptr;
  std::vector<std::vector<RuleVector>> rv_train, rv_val;
  const std::vector<Sentence>& val_set = split.val.empty() ? split.train : split.val;
  if (variant.needs_rules()) {
    rv_train = detail::rule_vectors_for(split.train, *dicts, variant.rules, tags, sim_store);
    rv_val = detail::rule_vectors_for(val_set, *dicts, variant.rules, tags, sim_store);
  }

  std::mt19937_64 order_rng(derive_seed(seed, "order"));
  std::mt19937_64 dropout_rng(derive_seed(seed, "dropout"));
  AdamState adam;

  TrainLog log;
  ModelParameters best;
  double best_f1 = -1.0;
  size_t best_epoch = 0;

  std::vector<size_t> order(split.train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (size_t epoch = 1; epoch <= epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    double loss_sum = 0.0;
    for (size_t idx : order) {
      Tape tape;
      auto fw = model.forward(tape, split.train[idx],
                              variant.needs_rules() ? &rv_train[idx] : nullptr, true, dropout_rng);
      Node* loss = detail::sentence_loss(tape, fw, split.train[idx],
                                         variant.needs_rules() ? &rv_train[idx] : nullptr,
                                         variant, epoch);
      if (!std::isfinite(loss->value[0]))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
      loss_sum += loss->value[0];
      tape.backward(loss);

      GradientMap grads;
      for (const auto& [name, leaf] : fw.leaves) grads.emplace(name, leaf->grad);
      if (grads.find("emb") == grads.end())
        grads.emplace("emb", Tensor(model.params().at("emb").shape));
      clip_gradients(grads, optimizer.clip_norm);
      step(model.params(), grads, adam, optimizer);
    }

    for (const auto& [name, p] : model.params())
      if (!p.all_finite())
        throw NumericError("non-finite parameter '" + name + "' after epoch " +
                           std::to_string(epoch));

    double val_f1 = micro_f1_on(model, val_set, variant.needs_rules() ? &rv_val : nullptr);
    log.entries.push_back(
        {epoch, loss_sum / static_cast<double>(split.train.size()), val_f1});
    if (val_f1 > best_f1) {
      best_f1 = val_f1;
      best_epoch = epoch;
      best = model.params();
    }
  }

  model.params() = std::move(best);
  log.best_epoch = best_epoch;
  log.best_val_micro_f1 = best_f1;
  return TrainResult{std::move(model), std::move(log)};
}

}  // namespace ruletag

#endif  // RULETAG_MODEL_HPP
