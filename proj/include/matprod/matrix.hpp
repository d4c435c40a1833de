// matrix.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Dense row-major matrix over double or exact rationals.

#ifndef MATPROD_MATRIX_HPP_
#define MATPROD_MATRIX_HPP_

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "matprod/error.hpp"

namespace matprod {

inline double scalar_abs(double x) { return std::fabs(x); }
inline mpq_class scalar_abs(const mpq_class& x) { return abs(x); }
inline double to_double(double x) { return x; }
inline double to_double(const mpq_class& x) { return x.get_d(); }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

template <class T>
class Matrix {
 public:
  using Scalar = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_)
        throw Error(ErrorCode::kInvalidArgument, "ragged matrix literal");
      for (const auto& x : r) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix column(const std::vector<T>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  static Matrix row(const std::vector<T>& v) {
    Matrix m(1, v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  Matrix operator*(const Matrix& b) const {
    if (cols_ != b.rows_)
      throw Error(ErrorCode::kInvalidArgument, "dimension mismatch in product");
    Matrix out(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (is_zero(a)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a * b(k, j);
      }
    return out;
  }

  Matrix operator+(const Matrix& b) const {
    check_same(b);
    Matrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += b.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& b) const {
    check_same(b);
    Matrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= b.data_[i];
    return out;
  }

  Matrix operator*(const T& s) const {
    Matrix out(*this);
    for (auto& x : out.data_) x *= s;
    return out;
  }

  Matrix operator/(const T& s) const {
    Matrix out(*this);
    for (auto& x : out.data_) x /= s;
    return out;
  }

  Matrix& operator+=(const Matrix& b) { return *this = *this + b; }

  bool operator==(const Matrix& b) const {
    return rows_ == b.rows_ && cols_ == b.cols_ && data_ == b.data_;
  }
  bool operator!=(const Matrix& b) const { return !(*this == b); }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  std::vector<T> col(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<T> row_vec(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_,
                          data_.begin() + (i + 1) * cols_);
  }

  bool nonnegative() const {
    for (const auto& x : data_)
      if (x < 0) return false;
    return true;
  }

 private:
  void check_same(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Mat = Matrix<double>;
using QMat = Matrix<mpq_class>;

Mat to_float(const QMat& m);
QMat to_exact(const Mat& m);  // exact binary expansion of each double

// Parses "p/q", "-3", "0.125" or "1e-3" into an exact rational.
mpq_class parse_rational(const std::string& text);
std::string format_rational(const mpq_class& q);

// Throws kInvalidArgument unless every entry is finite.
void check_finite(const Mat& m);

template <class T>
Matrix<T> power(const Matrix<T>& m, unsigned long e) {
  Matrix<T> out = Matrix<T>::identity(m.rows());
  Matrix<T> base = m;
  while (e) {
    if (e & 1u) out = out * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return out;
}

}  // namespace matprod

#endif  // MATPROD_MATRIX_HPP_
