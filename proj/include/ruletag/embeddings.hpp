#ifndef RULETAG_EMBEDDINGS_HPP
#define RULETAG_EMBEDDINGS_HPP

#include <cmath>
#include <istream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ruletag/common.hpp"

namespace ruletag {

enum class OovPolicy { random_normal, zeros };

inline const char* oov_policy_name(OovPolicy p) {
  return p == OovPolicy::random_normal ? "random_normal" : "zeros";
}

inline OovPolicy oov_policy_from_name(const std::string& s) {
  if (s == "random_normal") return OovPolicy::random_normal;
  if (s == "zeros") return OovPolicy::zeros;
  throw ConfigError("unknown oov policy '" + s + "'");
}

// Word -> vector table with materialize-once OOV handling. An unseen word
// gets a vector from the policy, derived from (seed, word) alone, so the
// value does not depend on lookup order.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  EmbeddingStore(size_t dim, OovPolicy policy, uint64_t seed, bool trainable = true)
      : dim_(dim), policy_(policy), seed_(seed), trainable_(trainable) {
    if (dim == 0) throw ConfigError("embedding dim must be positive");
  }

  size_t dim() const { return dim_; }
  bool trainable() const { return trainable_; }
  void set_trainable(bool v) { trainable_ = v; }
  OovPolicy oov_policy() const { return policy_; }
  uint64_t oov_seed() const { return seed_; }
  size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  bool contains(const std::string& word) const { return index_.count(word) > 0; }

  // Inserts a stored vector; keeps the first occurrence on duplicates.
  bool insert(const std::string& word, const std::vector<double>& vec) {
    if (vec.size() != dim_)
      throw DataError("vector for '" + word + "' has length " + std::to_string(vec.size()) +
                      ", expected " + std::to_string(dim_));
    auto [it, fresh] = index_.emplace(word, words_.size());
    if (!fresh) return false;
    words_.push_back(word);
    matrix_.insert(matrix_.end(), vec.begin(), vec.end());
    return true;
  }

  // Row for `word`; materializes an OOV vector on first sight.
  std::span<const double> lookup(const std::string& word) {
    return row(materialize(word));
  }

  size_t materialize(const std::string& word) {
    auto it = index_.find(word);
    if (it != index_.end()) return it->second;
    std::vector<double> vec(dim_, 0.0);
    if (policy_ == OovPolicy::random_normal) {
      std::mt19937_64 rng(splitmix64(seed_ ^ fnv1a(word)));
      std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(dim_)));
      for (double& v : vec) v = dist(rng);
    }
    size_t r = words_.size();
    index_.emplace(word, r);
    words_.push_back(word);
    matrix_.insert(matrix_.end(), vec.begin(), vec.end());
    return r;
  }

  std::span<const double> row(size_t r) const {
    return std::span<const double>(matrix_.data() + r * dim_, dim_);
  }

  const std::vector<double>& matrix() const { return matrix_; }

 private:
  size_t dim_ = 0;
  OovPolicy policy_ = OovPolicy::random_normal;
  uint64_t seed_ = 0;
  bool trainable_ = true;
  std::vector<std::string> words_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<double> matrix_;  // rows of length dim_
};

// Textual word-vector layout: header `vocab_size dim`, then one
// `token v1 ... v_dim` line per word.
inline EmbeddingStore load_vectors(std::istream& in, OovPolicy policy = OovPolicy::random_normal,
                                   uint64_t oov_seed = 0, bool trainable = true) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty embedding file");
  auto header = split_whitespace(line);
  if (header.size() != 2) throw DataError("line 1: expected header 'vocab_size dim'");
  size_t declared, dim;
  try {
    declared = parse_doc_id(header[0]);
    dim = parse_doc_id(header[1]);
  } catch (const DataError&) {
    throw DataError("line 1: non-numeric header field");
  }
  if (dim == 0) throw DataError("line 1: dim must be positive");

  EmbeddingStore store(dim, policy, oov_seed, trainable);
  size_t line_no = 1;
  size_t data_lines = 0;
  while (data_lines < declared && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    ++data_lines;
    auto cols = split_whitespace(line);
    if (cols.size() != dim + 1)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim + 1) +
                      " fields, got " + std::to_string(cols.size()));
    std::vector<double> vec(dim);
    for (size_t j = 0; j < dim; ++j) {
      try {
        size_t pos = 0;
        vec[j] = std::stod(cols[j + 1], &pos);
        if (pos != cols[j + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": non-numeric component '" +
                        cols[j + 1] + "'");
      }
    }
    store.insert(cols[0], vec);
  }
  return store;
}

// |vocab intersect stored keys| / |vocab|.
inline double coverage(const EmbeddingStore& store, const std::unordered_set<std::string>& vocab) {
  if (vocab.empty()) throw DataError("coverage over empty vocabulary");
  size_t hit = 0;
  for (const auto& w : vocab)
    if (store.contains(w)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(vocab.size());
}

}  // namespace ruletag

#endif  // RULETAG_EMBEDDINGS_HPP
