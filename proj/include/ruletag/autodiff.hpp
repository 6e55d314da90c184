#ifndef RULETAG_AUTODIFF_HPP
#define RULETAG_AUTODIFF_HPP

#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ruletag/tensor.hpp"

namespace ruletag {

// ---------------------------------------------------------------------------
// Reverse-mode tape
// ---------------------------------------------------------------------------
// Nodes are created in topological order, so walking the tape backwards is a
// valid reverse-topological sweep. One tape per sentence; parameters enter as
// leaves and their gradients are read back after backward().

struct Node {
  Tensor value;
  Tensor grad;
  std::function<void(Node&)> back;  // adds this node's grad into its parents
};

class Tape {
 public:
  Node* alloc(Tensor value) {
    nodes_.emplace_back();
    Node& n = nodes_.back();
    n.grad = Tensor(value.shape);
    n.value = std::move(value);
    return &n;
  }

  Node* leaf(Tensor value) { return alloc(std::move(value)); }

  // Seeds d(root)/d(root) = 1 and sweeps the tape in reverse.
  void backward(Node* root) {
    if (root->value.numel() != 1) throw NumericError("backward root must be scalar");
    root->grad.data[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
      if (it->back) it->back(*it);
  }

  size_t size() const { return nodes_.size(); }

 private:
  std::deque<Node> nodes_;  // deque: stable addresses as the tape grows
};

// ---------------------------------------------------------------------------
// Primitive ops
// ---------------------------------------------------------------------------

inline Node* add(Tape& t, Node* a, Node* b) {
  if (!a->value.same_shape(b->value)) throw NumericError("add: shape mismatch");
  Tensor v(a->value.shape);
  for (size_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] + b->value[i];
  Node* out = t.alloc(std::move(v));
  out->back = [a, b](Node& n) {
    for (size_t i = 0; i < n.grad.numel(); ++i) {
      a->grad[i] += n.grad[i];
      b->grad[i] += n.grad[i];
    }
  };
  return out;
}

inline Node* mul(Tape& t, Node* a, Node* b) {
  if (!a->value.same_shape(b->value)) throw NumericError("mul: shape mismatch");
  Tensor v(a->value.shape);
  for (size_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] * b->value[i];
  Node* out = t.alloc(std::move(v));
  out->back = [a, b](Node& n) {
    for (size_t i = 0; i < n.grad.numel(); ++i) {
      a->grad[i] += n.grad[i] * b->value[i];
      b->grad[i] += n.grad[i] * a->value[i];
    }
  };
  return out;
}

inline Node* scale(Tape& t, Node* a, double c) {
  Tensor v(a->value.shape);
  for (size_t i = 0; i < v.numel(); ++i) v[i] = a->value[i] * c;
  Node* out = t.alloc(std::move(v));
  out->back = [a, c](Node& n) {
    for (size_t i = 0; i < n.grad.numel(); ++i) a->grad[i] += n.grad[i] * c;
  };
  return out;
}

inline Node* sigmoid(Tape& t, Node* a) {
  Tensor v(a->value.shape);
  for (size_t i = 0; i < v.numel(); ++i) v[i] = 1.0 / (1.0 + std::exp(-a->value[i]));
  Node* out = t.alloc(std::move(v));
  out->back = [a](Node& n) {
    for (size_t i = 0; i < n.grad.numel(); ++i)
      a->grad[i] += n.grad[i] * n.value[i] * (1.0 - n.value[i]);
  };
  return out;
}

inline Node* tanh_op(Tape& t, Node* a) {
  Tensor v(a->value.shape);
  for (size_t i = 0; i < v.numel(); ++i) v[i] = std::tanh(a->value[i]);
  Node* out = t.alloc(std::move(v));
  out->back = [a](Node& n) {
    for (size_t i = 0; i < n.grad.numel(); ++i)
      a->grad[i] += n.grad[i] * (1.0 - n.value[i] * n.value[i]);
  };
  return out;
}

inline Node* concat(Tape& t, Node* a, Node* b) {
  Tensor v({a->value.numel() + b->value.numel()});
  for (size_t i = 0; i < a->value.numel(); ++i) v[i] = a->value[i];
  for (size_t i = 0; i < b->value.numel(); ++i) v[a->value.numel() + i] = b->value[i];
  Node* out = t.alloc(std::move(v));
  out->back = [a, b](Node& n) {
    size_t na = a->value.numel();
    for (size_t i = 0; i < na; ++i) a->grad[i] += n.grad[i];
    for (size_t i = 0; i < b->value.numel(); ++i) b->grad[i] += n.grad[na + i];
  };
  return out;
}

inline Node* slice(Tape& t, Node* a, size_t offset, size_t len) {
  if (offset + len > a->value.numel()) throw NumericError("slice: out of range");
  Tensor v({len});
  for (size_t i = 0; i < len; ++i) v[i] = a->value[offset + i];
  Node* out = t.alloc(std::move(v));
  out->back = [a, offset, len](Node& n) {
    for (size_t i = 0; i < len; ++i) a->grad[offset + i] += n.grad[i];
  };
  return out;
}

// W (m x k) times x (k).
inline Node* matvec(Tape& t, Node* W, Node* x) {
  if (W->value.rank() != 2 || x->value.numel() != W->value.cols())
    throw NumericError("matvec: dimension mismatch");
  size_t m = W->value.rows(), k = W->value.cols();
  Tensor v({m});
  const double* w = W->value.data.data();
  const double* xv = x->value.data.data();
  for (size_t i = 0; i < m; ++i) {
    double s = 0.0;
    const double* wr = w + i * k;
    for (size_t j = 0; j < k; ++j) s += wr[j] * xv[j];
    v[i] = s;
  }
  Node* out = t.alloc(std::move(v));
  out->back = [W, x, m, k](Node& n) {
    const double* w = W->value.data.data();
    const double* xv = x->value.data.data();
    for (size_t i = 0; i < m; ++i) {
      double g = n.grad[i];
      if (g == 0.0) continue;
      double* wg = W->grad.data.data() + i * k;
      const double* wr = w + i * k;
      for (size_t j = 0; j < k; ++j) {
        wg[j] += g * xv[j];
        x->grad[j] += g * wr[j];
      }
    }
  };
  return out;
}

// Row r of a matrix leaf (embedding lookup).
inline Node* row(Tape& t, Node* M, size_t r) {
  if (M->value.rank() != 2 || r >= M->value.rows()) throw NumericError("row: out of range");
  size_t k = M->value.cols();
  Tensor v({k});
  for (size_t j = 0; j < k; ++j) v[j] = M->value.data[r * k + j];
  Node* out = t.alloc(std::move(v));
  out->back = [M, r, k](Node& n) {
    for (size_t j = 0; j < k; ++j) M->grad.data[r * k + j] += n.grad[j];
  };
  return out;
}

// Inverted dropout: zero with probability `rate`, scale survivors by
// 1/(1-rate). Identity in eval mode.
inline Node* dropout(Tape& t, Node* a, double rate, bool training, std::mt19937_64& rng) {
  if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout rate must be in [0,1)");
  if (!training || rate == 0.0) {
    Tensor v = a->value;
    Node* out = t.alloc(std::move(v));
    out->back = [a](Node& n) {
      for (size_t i = 0; i < n.grad.numel(); ++i) a->grad[i] += n.grad[i];
    };
    return out;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double keep_scale = 1.0 / (1.0 - rate);
  auto mask = std::make_shared<std::vector<double>>(a->value.numel());
  Tensor v(a->value.shape);
  for (size_t i = 0; i < v.numel(); ++i) {
    (*mask)[i] = u(rng) < rate ? 0.0 : keep_scale;
    v[i] = a->value[i] * (*mask)[i];
  }
  Node* out = t.alloc(std::move(v));
  out->back = [a, mask](Node& n) {
    for (size_t i = 0; i < n.grad.numel(); ++i) a->grad[i] += n.grad[i] * (*mask)[i];
  };
  return out;
}

inline Node* softmax(Tape& t, Node* z) {
  size_t k = z->value.numel();
  Tensor v({k});
  double mx = z->value[0];
  for (size_t i = 1; i < k; ++i) mx = std::max(mx, z->value[i]);
  double sum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    v[i] = std::exp(z->value[i] - mx);
    sum += v[i];
  }
  for (size_t i = 0; i < k; ++i) v[i] /= sum;
  Node* out = t.alloc(std::move(v));
  out->back = [z, k](Node& n) {
    double dot = 0.0;
    for (size_t i = 0; i < k; ++i) dot += n.grad[i] * n.value[i];
    for (size_t i = 0; i < k; ++i) z->grad[i] += n.value[i] * (n.grad[i] - dot);
  };
  return out;
}

// Scalar sum of scalar nodes.
inline Node* sum_scalars(Tape& t, const std::vector<Node*>& xs) {
  if (xs.empty()) throw NumericError("sum_scalars: empty input");
  Tensor v({1});
  for (Node* x : xs) v[0] += x->value[0];
  Node* out = t.alloc(std::move(v));
  out->back = [xs](Node& n) {
    for (Node* x : xs) x->grad[0] += n.grad[0];
  };
  return out;
}

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

constexpr double kProbFloor = 1e-12;

struct SoftmaxXent {
  Node* loss;   // scalar
  Tensor probs; // softmax of the logits, kept for inspection
};

// Fused stabilized softmax + cross-entropy. d(loss)/d(logits) = probs - onehot.
inline SoftmaxXent softmax_xent(Tape& t, Node* logits, int gold) {
  size_t k = logits->value.numel();
  if (k < 2) throw NumericError("softmax_xent: need at least 2 classes");
  if (gold < 0 || static_cast<size_t>(gold) >= k)
    throw DataError("gold tag " + std::to_string(gold) + " out of range for " +
                    std::to_string(k) + " classes");
  Tensor p({k});
  double mx = logits->value[0];
  for (size_t i = 1; i < k; ++i) mx = std::max(mx, logits->value[i]);
  double sum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    p[i] = std::exp(logits->value[i] - mx);
    sum += p[i];
  }
  for (size_t i = 0; i < k; ++i) p[i] /= sum;

  Tensor lv({1});
  lv[0] = -std::log(std::max(p[static_cast<size_t>(gold)], kProbFloor));
  Node* loss = t.alloc(std::move(lv));
  auto probs = std::make_shared<Tensor>(p);
  loss->back = [logits, probs, gold, k](Node& n) {
    double g = n.grad[0];
    for (size_t i = 0; i < k; ++i) {
      double onehot = static_cast<size_t>(gold) == i ? 1.0 : 0.0;
      logits->grad[i] += g * ((*probs)[i] - onehot);
    }
  };
  return SoftmaxXent{loss, p};
}

// KL(p || q) for a constant p against a tape-resident q.
inline Node* kl_to_const(Tape& t, const Tensor& p, Node* q) {
  if (p.numel() != q->value.numel()) throw NumericError("kl: length mismatch");
  Tensor lv({1});
  double s = 0.0;
  for (size_t i = 0; i < p.numel(); ++i) {
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / std::max(q->value[i], kProbFloor));
  }
  lv[0] = s;
  Node* out = t.alloc(std::move(lv));
  auto pc = std::make_shared<Tensor>(p);
  out->back = [q, pc](Node& n) {
    double g = n.grad[0];
    for (size_t i = 0; i < pc->numel(); ++i) {
      if ((*pc)[i] > 0.0) q->grad[i] += -g * (*pc)[i] / std::max(q->value[i], kProbFloor);
    }
  };
  return out;
}

// ---------------------------------------------------------------------------
// Value-level counterparts (no tape), used by evaluation and tests
// ---------------------------------------------------------------------------

inline Tensor softmax_values(const Tensor& logits) {
  size_t k = logits.numel();
  Tensor p({k});
  double mx = logits[0];
  for (size_t i = 1; i < k; ++i) mx = std::max(mx, logits[i]);
  double sum = 0.0;
  for (size_t i = 0; i < k; ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (size_t i = 0; i < k; ++i) p[i] /= sum;
  return p;
}

inline std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int gold) {
  size_t k = logits.numel();
  if (k < 2) throw NumericError("softmax_cross_entropy: need at least 2 classes");
  if (gold < 0 || static_cast<size_t>(gold) >= k)
    throw DataError("gold tag " + std::to_string(gold) + " out of range");
  Tensor p = softmax_values(logits);
  double loss = -std::log(std::max(p[static_cast<size_t>(gold)], kProbFloor));
  return {loss, p};
}

// KL(p || q) with 0*ln(0) = 0 and q floored at 1e-12. Both inputs must be
// distributions of the same length.
inline double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw DataError("kl_divergence: length mismatch (" + std::to_string(p.size()) + " vs " +
                    std::to_string(q.size()) + ")");
  double sp = 0.0, sq = 0.0;
  for (double v : p) sp += v;
  for (double v : q) sq += v;
  if (std::abs(sp - 1.0) > 1e-6 || std::abs(sq - 1.0) > 1e-6)
    throw DataError("kl_divergence: inputs must sum to 1");
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / std::max(q[i], kProbFloor));
  return std::max(0.0, s);
}

// ---------------------------------------------------------------------------
// LSTM cell and bidirectional encoder
// ---------------------------------------------------------------------------

// Per-direction parameters: one stacked gate matrix W (4h x (d+h)) over the
// concatenated [x; h_prev], one stacked bias b (4h). Gate order i, f, g, o.
struct LstmParamNodes {
  Node* W = nullptr;
  Node* b = nullptr;
};

struct LstmState {
  Node* h = nullptr;
  Node* c = nullptr;
};

inline LstmState lstm_cell(Tape& t, Node* x, Node* h_prev, Node* c_prev,
                           const LstmParamNodes& p) {
  size_t four_h = p.W->value.rows();
  if (four_h % 4 != 0) throw NumericError("lstm_cell: gate matrix rows must be 4h");
  size_t h = four_h / 4;
  if (x->value.numel() + h != p.W->value.cols())
    throw NumericError("lstm_cell: input dim mismatch");
  if (h_prev->value.numel() != h || c_prev->value.numel() != h)
    throw NumericError("lstm_cell: state dim mismatch");

  Node* xh = concat(t, x, h_prev);
  Node* z = add(t, matvec(t, p.W, xh), p.b);
  Node* gate_in = sigmoid(t, slice(t, z, 0, h));
  Node* gate_forget = sigmoid(t, slice(t, z, h, h));
  Node* candidate = tanh_op(t, slice(t, z, 2 * h, h));
  Node* gate_out = sigmoid(t, slice(t, z, 3 * h, h));
  Node* c = add(t, mul(t, gate_forget, c_prev), mul(t, gate_in, candidate));
  Node* hidden = mul(t, gate_out, tanh_op(t, c));
  return LstmState{hidden, c};
}

struct EncoderState {
  std::vector<Node*> forward_hidden;
  std::vector<Node*> backward_hidden;
};

// Forward pass left to right, backward pass right to left, zero initial
// states. backward_hidden[i] is the reverse state after consuming w_n..w_i.
inline EncoderState bi_encode(Tape& t, const std::vector<Node*>& inputs,
                              const LstmParamNodes& fwd, const LstmParamNodes& bwd) {
  if (inputs.empty()) throw DataError("bi_encode: empty input sequence");
  size_t n = inputs.size();
  size_t h = fwd.W->value.rows() / 4;

  EncoderState state;
  state.forward_hidden.resize(n);
  state.backward_hidden.resize(n);

  Node* h0 = t.leaf(Tensor({h}));
  Node* c0 = t.leaf(Tensor({h}));
  Node* hh = h0;
  Node* cc = c0;
  for (size_t i = 0; i < n; ++i) {
    LstmState s = lstm_cell(t, inputs[i], hh, cc, fwd);
    hh = s.h;
    cc = s.c;
    state.forward_hidden[i] = hh;
  }
  hh = h0;
  cc = c0;
  for (size_t i = n; i-- > 0;) {
    LstmState s = lstm_cell(t, inputs[i], hh, cc, bwd);
    hh = s.h;
    cc = s.c;
    state.backward_hidden[i] = hh;
  }
  return state;
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

using ModelParameters = std::map<std::string, Tensor>;
using GradientMap = std::map<std::string, Tensor>;

struct OptimizerConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 5.0;  // applied by the training loop, not by step()
};

struct AdamState {
  std::map<std::string, Tensor> m, v;
  size_t t = 0;
};

// Bias-corrected adaptive-moment update. Deterministic given identical
// inputs; requires a gradient for every parameter key.
inline void step(ModelParameters& params, const GradientMap& grads, AdamState& state,
                 const OptimizerConfig& config) {
  ++state.t;
  double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  for (auto& [name, p] : params) {
    auto git = grads.find(name);
    if (git == grads.end()) throw ConfigError("missing gradient for parameter '" + name + "'");
    const Tensor& g = git->second;
    if (!g.same_shape(p)) throw NumericError("gradient shape mismatch for '" + name + "'");
    Tensor& m = state.m.try_emplace(name, Tensor(p.shape)).first->second;
    Tensor& v = state.v.try_emplace(name, Tensor(p.shape)).first->second;
    for (size_t i = 0; i < p.numel(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      p[i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
    }
  }
}

// Global-norm gradient clipping.
inline void clip_gradients(GradientMap& grads, double max_norm) {
  if (max_norm <= 0.0) return;
  double total = 0.0;
  for (const auto& [name, g] : grads) total += g.l2_norm_squared();
  double norm = std::sqrt(total);
  if (norm <= max_norm) return;
  double f = max_norm / norm;
  for (auto& [name, g] : grads)
    for (size_t i = 0; i < g.numel(); ++i) g[i] *= f;
}

}  // namespace ruletag

#endif  // RULETAG_AUTODIFF_HPP
