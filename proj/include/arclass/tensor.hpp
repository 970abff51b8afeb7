#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace arclass {

// Dense row-major tensor. Default scalar type is float; the same code
// instantiates with double for the verification oracles.
template <typename T>
struct Tensor {
  std::vector<size_t> shape;
  std::vector<T> data;

  Tensor() = default;

  explicit Tensor(std::vector<size_t> s) : shape(std::move(s)) {
    data.assign(numel_of(shape), T(0));
  }

  Tensor(std::vector<size_t> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != numel_of(shape))
      throw std::invalid_argument("tensor: data size " + std::to_string(data.size()) +
                                  " does not match shape " + shape_str(shape));
  }

  static size_t numel_of(const std::vector<size_t> &s) {
    size_t n = 1;
    for (size_t e : s) n *= e;
    return n;
  }

  size_t numel() const { return data.size(); }
  size_t dim(size_t i) const { return shape.at(i); }
  size_t rank() const { return shape.size(); }

  T *ptr() { return data.data(); }
  const T *ptr() const { return data.data(); }

  T &operator[](size_t i) { return data[i]; }
  const T &operator[](size_t i) const { return data[i]; }

  // 4-d accessors for the common [B,H,W,C] case.
  T &at4(size_t a, size_t b, size_t c, size_t d) {
    return data[((a * shape[1] + b) * shape[2] + c) * shape[3] + d];
  }
  const T &at4(size_t a, size_t b, size_t c, size_t d) const {
    return data[((a * shape[1] + b) * shape[2] + c) * shape[3] + d];
  }
  T &at2(size_t a, size_t b) { return data[a * shape[1] + b]; }
  const T &at2(size_t a, size_t b) const { return data[a * shape[1] + b]; }

  Tensor reshaped(std::vector<size_t> s) const {
    if (numel_of(s) != numel())
      throw std::invalid_argument("reshape: " + shape_str(shape) + " -> " + shape_str(s) +
                                  " changes element count");
    Tensor out;
    out.shape = std::move(s);
    out.data = data;
    return out;
  }

  bool same_shape(const Tensor &o) const { return shape == o.shape; }

  bool all_finite() const {
    for (T v : data)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  static std::string shape_str(const std::vector<size_t> &s) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "]";
    return os.str();
  }
  std::string shape_str() const { return shape_str(shape); }
};

template <typename T>
Tensor<T> zeros_like(const Tensor<T> &t) {
  return Tensor<T>(t.shape);
}

template <typename T>
Tensor<T> full(std::vector<size_t> shape, T value) {
  Tensor<T> t(std::move(shape));
  std::fill(t.data.begin(), t.data.end(), value);
  return t;
}

// Named model parameter.
template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  bool trainable = true;
};

}  // namespace arclass
