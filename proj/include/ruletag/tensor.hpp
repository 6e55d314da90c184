#ifndef RULETAG_TENSOR_HPP
#define RULETAG_TENSOR_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "ruletag/common.hpp"

namespace ruletag {

// Dense row-major tensor, double precision. Rank 1 and 2 are all the
// models need.
struct Tensor {
  std::vector<size_t> shape;
  std::vector<double> data;

  Tensor() = default;

  explicit Tensor(std::vector<size_t> s) : shape(std::move(s)) {
    data.assign(numel_of(shape), 0.0);
  }

  static Tensor zeros(std::vector<size_t> s) { return Tensor(std::move(s)); }

  static Tensor scalar(double v) {
    Tensor t(std::vector<size_t>{1});
    t.data[0] = v;
    return t;
  }

  static Tensor vector_of(std::vector<double> v) {
    Tensor t;
    t.shape = {v.size()};
    t.data = std::move(v);
    return t;
  }

  static size_t numel_of(const std::vector<size_t>& s) {
    size_t n = 1;
    for (size_t d : s) n *= d;
    return s.empty() ? 0 : n;
  }

  size_t numel() const { return data.size(); }
  size_t rank() const { return shape.size(); }

  size_t rows() const { return shape.at(0); }
  size_t cols() const { return shape.size() > 1 ? shape[1] : 1; }

  double& operator[](size_t i) { return data[i]; }
  double operator[](size_t i) const { return data[i]; }

  double& at2(size_t r, size_t c) { return data[r * shape[1] + c]; }
  double at2(size_t r, size_t c) const { return data[r * shape[1] + c]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  double l2_norm_squared() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return s;
  }
};

}  // namespace ruletag

#endif  // RULETAG_TENSOR_HPP
