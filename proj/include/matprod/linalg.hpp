// linalg.hpp
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
// Norms, support patterns, scaled products and the small dense solvers.

#ifndef MATPROD_LINALG_HPP_
#define MATPROD_LINALG_HPP_

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "matprod/matrix.hpp"

namespace matprod {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

constexpr std::size_t kMaxDim = 32;

// Sum of the absolute values of the entries.
template <class T>
T entry_norm(const Matrix<T>& m) {
  T s(0);
  for (const auto& x : m.data()) s += scalar_abs(x);
  return s;
}

double vec_norm1(const std::vector<double>& v);

struct SupportPattern {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<char> mask;  // row-major

  bool at(std::size_t i, std::size_t j) const { return mask[i * cols + j]; }
  bool operator==(const SupportPattern& o) const {
    return rows == o.rows && cols == o.cols && mask == o.mask;
  }
  bool operator!=(const SupportPattern& o) const { return !(*this == o); }
};

struct PatternInfo {
  SupportPattern pattern;
  std::size_t distinct_columns = 0;
};

// zero_tol < 0 selects the default 1e-12 * entry_norm(m).
PatternInfo support_pattern(const Mat& m, double zero_tol = -1.0);
PatternInfo support_pattern(const QMat& m);
std::size_t distinct_columns(const SupportPattern& p);
SupportPattern boolean_product(const SupportPattern& a, const SupportPattern& b);

// A product kept as a unit-norm matrix and the log of the discarded scale.
struct ScaledMat {
  Mat unit;
  double log_scale = 0.0;

  static ScaledMat identity(std::size_t d) { return {Mat::identity(d), 0.0}; }
  double norm_log() const;  // log of the represented entry norm
};

// acc * a, renormalised. Throws kProductVanished when the product is zero.
ScaledMat scaled_multiply(const ScaledMat& acc, const Mat& a);
// Exact mode keeps raw rationals.
QMat scaled_multiply(const QMat& acc, const QMat& a);

// Singular values (descending) by cyclic Jacobi on M^T M.
std::vector<double> singular_values(const Mat& m);

double determinant(const Mat& m);
mpq_class determinant(const QMat& m);

// Exact solution of A x = b by Gaussian elimination; nullopt when singular.
std::optional<QMat> solve(const QMat& a, const QMat& b);

struct EigenPair {
  cplx value;
  CVec right;
  CVec left;
  double right_residual = 0.0;  // ||M v - value v||
  double left_residual = 0.0;   // ||w M - value w||
};

struct EigenResult {
  std::vector<EigenPair> pairs;  // sorted by decreasing modulus
  double spectral_radius = 0.0;
  std::optional<std::vector<double>> perron_right;  // unit L1 norm, >= 0
  std::optional<std::vector<double>> perron_left;
};

EigenResult eigen_decompose(const Mat& m);

double spectral_radius(const Mat& m);

// Orthonormal basis of {w : w M = mu w} (as column vectors of M^T - mu I's
// kernel). Singular values below tol * max(1, ||M||) count as zero.
std::vector<CVec> left_eigenspace(const Mat& m, cplx mu, double tol = 1e-8);

// Searches for a vector that is a left eigenvector of every matrix in the
// list (possibly for different eigenvalues).
struct CommonLeftEigen {
  bool exists = false;
  CVec witness;
  std::vector<cplx> eigenvalues;  // one per matrix when exists
};
CommonLeftEigen common_left_eigenvector(const std::vector<Mat>& mats,
                                        double tol = 1e-8);

template <class T>
struct ShapeFunctionals {
  T Lambda;
  T lambda_small;
  std::vector<std::vector<std::size_t>> row_supports;
};

// Column-ratio and complement-mass functionals of a nonnegative matrix.
template <class T>
ShapeFunctionals<T> shape_functionals(const Matrix<T>& m) {
  if (!m.nonnegative())
    throw Error(ErrorCode::kInvalidArgument, "matrix must be nonnegative");
  ShapeFunctionals<T> out{T(0), T(0), {}};
  bool any = false;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    bool have = false;
    T lo(0), hi(0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const T& x = m(i, j);
      if (is_zero(x)) continue;
      if (!have || x < lo) lo = x;
      if (!have || x > hi) hi = x;
      have = true;
    }
    if (!have) continue;
    any = true;
    T r = hi / lo;
    if (r > out.Lambda) out.Lambda = r;
  }
  if (!any) throw Error(ErrorCode::kZeroMatrix, "shape functionals of zero");
  out.row_supports.resize(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j))) out.row_supports[i].push_back(j);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto& J = out.row_supports[i];
    if (J.empty()) continue;
    std::vector<char> in(m.cols(), 0);
    T inside(0);
    for (auto j : J) {
      in[j] = 1;
      inside += m(i, j);
    }
    for (std::size_t ip = 0; ip < m.rows(); ++ip) {
      T outside(0);
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!in[j]) outside += m(ip, j);
      T r = outside / inside;
      if (r > out.lambda_small) out.lambda_small = r;
    }
  }
  return out;
}

}  // namespace matprod

#endif  // MATPROD_LINALG_HPP_
