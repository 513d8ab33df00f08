#pragma once

// Dense rank-3 / rank-4 containers over one chart dimension, templated on
// the scalar so the same code holds doubles and jets.

#include <cmath>
#include <cstddef>
#include <vector>

namespace kropina {

template <class S>
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), d_(static_cast<std::size_t>(n) * n * n) {}
  int dim() const noexcept { return n_; }
  S& operator()(int i, int j, int k) { return d_[idx(i, j, k)]; }
  const S& operator()(int i, int j, int k) const { return d_[idx(i, j, k)]; }

private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<S> d_;
};

template <class S>
class Tensor4 {
public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), d_(static_cast<std::size_t>(n) * n * n * n) {}
  int dim() const noexcept { return n_; }
  S& operator()(int i, int j, int k, int l) { return d_[idx(i, j, k, l)]; }
  const S& operator()(int i, int j, int k, int l) const {
    return d_[idx(i, j, k, l)];
  }

private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<S> d_;
};

inline double max_abs(const Tensor3<double>& t) {
  double m = 0.0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      for (int k = 0; k < t.dim(); ++k) m = std::max(m, std::abs(t(i, j, k)));
  return m;
}

inline double max_abs(const Tensor4<double>& t) {
  double m = 0.0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      for (int k = 0; k < t.dim(); ++k)
        for (int l = 0; l < t.dim(); ++l)
          m = std::max(m, std::abs(t(i, j, k, l)));
  return m;
}

}  // namespace kropina
