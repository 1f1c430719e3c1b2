// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Small dense real matrices for the quadratic-form algebra of the channel
// model. Sizes stay below ~64, so everything is a straightforward row-major
// loop; no blocking, no expression templates.
//
// The scalar is a template parameter. The model runs in `Real` (long double):
// squeezed kernels with |s| ~ 5 carry entries ~e^{10} next to eigenvalues
// ~e^{-10}, and 53-bit arithmetic loses ~1e-7 of the small directions.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memchan/errors.hpp"

namespace memchan {

using Real = long double;

template <std::floating_point T>
class BasicMatrix {
 public:
  using value_type = T;

  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static BasicMatrix diagonal(std::span<const T> d) {
    BasicMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static BasicMatrix diagonal(std::initializer_list<T> d) {
    return diagonal(std::span<const T>(d.begin(), d.size()));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  T operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> data() const { return data_; }

  BasicMatrix transposed() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  BasicMatrix& operator+=(const BasicMatrix& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  BasicMatrix& operator-=(const BasicMatrix& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  BasicMatrix& operator*=(T a) {
    for (T& x : data_) x *= a;
    return *this;
  }

  friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
  friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
  friend BasicMatrix operator*(BasicMatrix a, T s) { return a *= s; }
  friend BasicMatrix operator*(T s, BasicMatrix a) { return a *= s; }

  bool operator==(const BasicMatrix&) const = default;

 private:
  void require_same_shape(const BasicMatrix& o, const char* where) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatch(std::string(where) + ": shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Real symmetric matrix. Construction from a general square matrix stores
// (M + M^T)/2, so entries(i,j) == entries(j,i) holds bit-for-bit.
template <std::floating_point T>
class BasicSymMatrix {
 public:
  using value_type = T;

  BasicSymMatrix() = default;

  explicit BasicSymMatrix(const BasicMatrix<T>& m) : m_(m.rows(), m.cols()) {
    if (!m.is_square() || m.rows() == 0)
      throw DimensionMismatch("SymMatrix: needs a non-empty square matrix");
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = m(i, i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const T v = (m(i, j) + m(j, i)) / 2;
        m_(i, j) = v;
        m_(j, i) = v;
      }
    }
  }

  static BasicSymMatrix identity(std::size_t n) {
    return BasicSymMatrix(BasicMatrix<T>::identity(n));
  }
  static BasicSymMatrix diagonal(std::initializer_list<T> d) {
    return BasicSymMatrix(BasicMatrix<T>::diagonal(d));
  }
  static BasicSymMatrix diagonal(std::span<const T> d) {
    return BasicSymMatrix(BasicMatrix<T>::diagonal(d));
  }

  std::size_t dim() const { return m_.rows(); }
  T operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const BasicMatrix<T>& matrix() const { return m_; }
  operator const BasicMatrix<T>&() const { return m_; }  // NOLINT: read-only view

  bool operator==(const BasicSymMatrix&) const = default;

 private:
  BasicMatrix<T> m_;
};

using Matrix = BasicMatrix<Real>;
using SymMatrix = BasicSymMatrix<Real>;

template <std::floating_point T>
const BasicMatrix<T>& as_matrix(const BasicMatrix<T>& m) {
  return m;
}
template <std::floating_point T>
const BasicMatrix<T>& as_matrix(const BasicSymMatrix<T>& m) {
  return m.matrix();
}

template <class M>
concept MatrixLike = requires(const M& m) { as_matrix(m); };

template <MatrixLike M>
using scalar_of = typename M::value_type;

// Largest absolute entry of a - b.
template <MatrixLike A, MatrixLike B>
scalar_of<A> max_abs_diff(const A& a_in, const B& b_in) {
  const auto& a = as_matrix(a_in);
  const auto& b = as_matrix(b_in);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("max_abs_diff: shapes differ");
  scalar_of<A> m = 0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

template <MatrixLike A>
scalar_of<A> max_abs(const A& a_in) {
  scalar_of<A> m = 0;
  for (auto x : as_matrix(a_in).data()) m = std::max(m, std::abs(x));
  return m;
}

template <MatrixLike A, MatrixLike B>
BasicMatrix<scalar_of<A>> matmul(const A& a_in, const B& b_in) {
  const auto& a = as_matrix(a_in);
  const auto& b = as_matrix(b_in);
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()));
  BasicMatrix<scalar_of<A>> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// a^T * b without forming the transpose.
template <MatrixLike A, MatrixLike B>
BasicMatrix<scalar_of<A>> transpose_matmul(const A& a_in, const B& b_in) {
  const auto& a = as_matrix(a_in);
  const auto& b = as_matrix(b_in);
  if (a.rows() != b.rows())
    throw DimensionMismatch("transpose_matmul: row counts " + std::to_string(a.rows()) +
                            " and " + std::to_string(b.rows()));
  BasicMatrix<scalar_of<A>> c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const auto aki = a(k, i);
      if (aki == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  return c;
}

template <std::floating_point T>
BasicSymMatrix<T> block_diag(const BasicSymMatrix<T>& a, const BasicSymMatrix<T>& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  BasicMatrix<T> m(na + nb, na + nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) m(na + i, na + j) = b(i, j);
  return BasicSymMatrix<T>(m);
}

// Leading k x k block.
template <std::floating_point T>
BasicMatrix<T> top_left(const BasicMatrix<T>& m, std::size_t k) {
  if (k == 0 || k > m.rows() || k > m.cols())
    throw DimensionMismatch("top_left: k=" + std::to_string(k) + " outside " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  BasicMatrix<T> t(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) t(i, j) = m(i, j);
  return t;
}

template <std::floating_point T>
BasicSymMatrix<T> top_left(const BasicSymMatrix<T>& m, std::size_t k) {
  return BasicSymMatrix<T>(top_left(m.matrix(), k));
}

// Sub-block [r0, r0+rows) x [c0, c0+cols).
template <std::floating_point T>
BasicMatrix<T> block(const BasicMatrix<T>& m, std::size_t r0, std::size_t c0, std::size_t rows,
                     std::size_t cols) {
  if (r0 + rows > m.rows() || c0 + cols > m.cols())
    throw DimensionMismatch("block: range outside matrix");
  BasicMatrix<T> b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = m(r0 + i, c0 + j);
  return b;
}

template <std::floating_point T>
BasicMatrix<T> block(const BasicSymMatrix<T>& m, std::size_t r0, std::size_t c0,
                     std::size_t rows, std::size_t cols) {
  return block(m.matrix(), r0, c0, rows, cols);
}

// Cholesky factorization m = L L^T of a symmetric positive definite matrix.
// The same factor serves both the log-determinant and solves.
template <std::floating_point T>
class BasicCholesky {
 public:
  explicit BasicCholesky(const BasicSymMatrix<T>& m) : l_(m.dim(), m.dim()) {
    const std::size_t n = m.dim();
    T max_diag = 0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
    const T threshold = static_cast<T>(n) * std::numeric_limits<T>::epsilon() * max_diag;

    for (std::size_t j = 0; j < n; ++j) {
      T d = m(j, j);
      for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
      if (!(d > threshold))
        throw NotPositiveDefinite("Cholesky: pivot " + std::to_string(j) + " = " +
                                  std::to_string(static_cast<double>(d)) + " (dim " +
                                  std::to_string(n) + ")");
      const T ljj = std::sqrt(d);
      l_(j, j) = ljj;
      for (std::size_t i = j + 1; i < n; ++i) {
        T v = m(i, j);
        for (std::size_t k = 0; k < j; ++k) v -= l_(i, k) * l_(j, k);
        l_(i, j) = v / ljj;
      }
    }
  }

  std::size_t dim() const { return l_.rows(); }
  const BasicMatrix<T>& lower() const { return l_; }

  T logdet() const {
    T s = 0;
    for (std::size_t i = 0; i < dim(); ++i) s += std::log(l_(i, i));
    return 2 * s;
  }

  BasicMatrix<T> solve(const BasicMatrix<T>& rhs) const {
    const std::size_t n = dim();
    if (rhs.rows() != n)
      throw DimensionMismatch("Cholesky::solve: rhs has " + std::to_string(rhs.rows()) +
                              " rows, expected " + std::to_string(n));
    BasicMatrix<T> x = rhs;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        T v = x(i, c);
        for (std::size_t k = 0; k < i; ++k) v -= l_(i, k) * x(k, c);
        x(i, c) = v / l_(i, i);
      }
      for (std::size_t ii = n; ii-- > 0;) {
        T v = x(ii, c);
        for (std::size_t k = ii + 1; k < n; ++k) v -= l_(k, ii) * x(k, c);
        x(ii, c) = v / l_(ii, ii);
      }
    }
    return x;
  }

  BasicSymMatrix<T> inverse() const {
    return BasicSymMatrix<T>(solve(BasicMatrix<T>::identity(dim())));
  }

 private:
  BasicMatrix<T> l_;
};

template <std::floating_point T>
BasicCholesky(const BasicSymMatrix<T>&) -> BasicCholesky<T>;

using Cholesky = BasicCholesky<Real>;

template <std::floating_point T>
T spd_logdet(const BasicSymMatrix<T>& m) {
  return BasicCholesky<T>(m).logdet();
}

template <std::floating_point T, MatrixLike B>
BasicMatrix<T> spd_solve(const BasicSymMatrix<T>& m, const B& rhs_in) {
  const BasicMatrix<T>& rhs = as_matrix(rhs_in);
  if (rhs.rows() != m.dim())
    throw DimensionMismatch("spd_solve: rhs has " + std::to_string(rhs.rows()) +
                            " rows, matrix is " + std::to_string(m.dim()));
  return BasicCholesky<T>(m).solve(rhs);
}

}  // namespace memchan
