// linalg.cpp
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

#include "matprod/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace matprod {

namespace {

using EMat = Eigen::MatrixXd;
using ECMat = Eigen::MatrixXcd;

EMat to_eigen(const Mat& m) {
  EMat e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

void check_square(const Mat& m) {
  if (!m.square()) throw Error(ErrorCode::kNotSquare, "matrix is not square");
}

void check_dim(const Mat& m) {
  if (m.rows() > kMaxDim || m.cols() > kMaxDim)
    throw Error(ErrorCode::kInvalidArgument, "dimension exceeds 32");
}

double cnorm1(const CVec& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::abs(x);
  return s;
}

// Kernel of a complex matrix via SVD; columns of the returned matrix.
ECMat kernel(const ECMat& a, double tol) {
  Eigen::JacobiSVD<ECMat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  Eigen::Index n = a.cols();
  return svd.matrixV().rightCols(n - rank);
}

ECMat left_eigen_basis(const EMat& m, cplx mu, double tol) {
  Eigen::Index d = m.rows();
  ECMat a = m.transpose().cast<cplx>();
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) -= mu;
  double scale = std::max(1.0, m.cwiseAbs().sum());
  return kernel(a, tol * scale);
}

// Eigenvalues grouped when closer than a relative 1e-6.
std::vector<cplx> distinct_eigenvalues(const EMat& m) {
  Eigen::EigenSolver<EMat> es(m, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::kNoConvergence, "eigenvalue iteration failed");
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cplx z = es.eigenvalues()(i);
    bool dup = false;
    for (const auto& w : out)
      if (std::abs(w - z) < 1e-6 * (1.0 + std::abs(z))) dup = true;
    if (!dup) out.push_back(z);
  }
  return out;
}

std::optional<std::vector<double>> as_perron(const CVec& v) {
  if (v.empty()) return std::nullopt;
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  if (std::abs(v[k]) == 0.0) return std::nullopt;
  cplx phase = std::conj(v[k]) / std::abs(v[k]);
  std::vector<double> out(v.size());
  double big = std::abs(v[k]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx z = v[i] * phase;
    if (std::abs(z.imag()) > 1e-8 * big || z.real() < -1e-8 * big)
      return std::nullopt;
    out[i] = std::max(0.0, z.real());
  }
  double s = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& x : out) x /= s;
  return out;
}

// Fallback for reducible matrices: power iteration on M + I.
std::vector<double> shifted_power(const Mat& m) {
  std::size_t d = m.rows();
  std::vector<double> v(d, 1.0 / d), w(d);
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = v[i];
      for (std::size_t j = 0; j < d; ++j) s += m(i, j) * v[j];
      w[i] = s;
    }
    double n = vec_norm1(w);
    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      w[i] /= n;
      diff += std::fabs(w[i] - v[i]);
    }
    v.swap(w);
    if (diff < 1e-15) break;
  }
  return v;
}

}  // namespace

double vec_norm1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

PatternInfo support_pattern(const Mat& m, double zero_tol) {
  if (zero_tol < 0) zero_tol = 1e-12 * entry_norm(m);
  PatternInfo out;
  out.pattern.rows = m.rows();
  out.pattern.cols = m.cols();
  out.pattern.mask.resize(m.rows() * m.cols());
  for (std::size_t k = 0; k < m.data().size(); ++k)
    out.pattern.mask[k] = std::fabs(m.data()[k]) > zero_tol;
  out.distinct_columns = distinct_columns(out.pattern);
  return out;
}

PatternInfo support_pattern(const QMat& m) {
  PatternInfo out;
  out.pattern.rows = m.rows();
  out.pattern.cols = m.cols();
  out.pattern.mask.resize(m.rows() * m.cols());
  for (std::size_t k = 0; k < m.data().size(); ++k)
    out.pattern.mask[k] = !is_zero(m.data()[k]);
  out.distinct_columns = distinct_columns(out.pattern);
  return out;
}

std::size_t distinct_columns(const SupportPattern& p) {
  std::vector<std::vector<char>> seen;
  for (std::size_t j = 0; j < p.cols; ++j) {
    std::vector<char> c(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) c[i] = p.at(i, j);
    if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
  }
  return seen.size();
}

SupportPattern boolean_product(const SupportPattern& a, const SupportPattern& b) {
  if (a.cols != b.rows)
    throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
  SupportPattern out{a.rows, b.cols, std::vector<char>(a.rows * b.cols, 0)};
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k)
      if (a.at(i, k))
        for (std::size_t j = 0; j < b.cols; ++j)
          if (b.at(k, j)) out.mask[i * b.cols + j] = 1;
  return out;
}

double ScaledMat::norm_log() const {
  return log_scale + std::log(entry_norm(unit));
}

ScaledMat scaled_multiply(const ScaledMat& acc, const Mat& a) {
  Mat p = acc.unit * a;
  double n = entry_norm(p);
  if (n == 0.0 || !std::isfinite(n))
    throw Error(ErrorCode::kProductVanished, "product vanished");
  return {p / n, acc.log_scale + std::log(n)};
}

QMat scaled_multiply(const QMat& acc, const QMat& a) {
  QMat p = acc * a;
  for (const auto& x : p.data())
    if (!is_zero(x)) return p;
  throw Error(ErrorCode::kProductVanished, "product vanished");
}

std::vector<double> singular_values(const Mat& m) {
  check_finite(m);
  check_dim(m);
  std::size_t d = m.cols();
  Mat b = m.transpose() * m;
  double scale = entry_norm(b);
  std::vector<double> out(d, 0.0);
  if (scale == 0.0) return out;
  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += 2.0 * std::fabs(b(p, q));
    if (off < 1e-13 * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        double bpq = b(p, q);
        if (bpq == 0.0) continue;
        double tau = (b(q, q) - b(p, p)) / (2.0 * bpq);
        double t = (tau >= 0 ? 1.0 : -1.0) /
                   (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          double bkp = b(k, p), bkq = b(k, q);
          b(k, p) = c * bkp - s * bkq;
          b(k, q) = s * bkp + c * bkq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double bpk = b(p, k), bqk = b(q, k);
          b(p, k) = c * bpk - s * bqk;
          b(q, k) = s * bpk + c * bqk;
        }
      }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += 2.0 * std::fabs(b(p, q));
    if (off >= 1e-13 * scale)
      throw Error(ErrorCode::kNoConvergence, "Jacobi sweeps did not converge");
  }
  for (std::size_t i = 0; i < d; ++i) out[i] = std::sqrt(std::max(0.0, b(i, i)));
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double determinant(const Mat& m) {
  check_square(m);
  return to_eigen(m).partialPivLu().determinant();
}

mpq_class determinant(const QMat& m) {
  if (!m.square()) throw Error(ErrorCode::kNotSquare, "matrix is not square");
  QMat a = m;
  std::size_t d = a.rows();
  mpq_class det = 1;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    while (piv < d && is_zero(a(piv, c))) ++piv;
    if (piv == d) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < d; ++r) {
      if (is_zero(a(r, c))) continue;
      mpq_class f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < d; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

std::optional<QMat> solve(const QMat& m, const QMat& rhs) {
  if (!m.square()) throw Error(ErrorCode::kNotSquare, "matrix is not square");
  if (rhs.rows() != m.rows())
    throw Error(ErrorCode::kInvalidArgument, "dimension mismatch in solve");
  std::size_t d = m.rows(), w = rhs.cols();
  QMat a = m, b = rhs;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    while (piv < d && is_zero(a(piv, c))) ++piv;
    if (piv == d) return std::nullopt;
    if (piv != c) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a(c, j), a(piv, j));
      for (std::size_t j = 0; j < w; ++j) std::swap(b(c, j), b(piv, j));
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || is_zero(a(r, c))) continue;
      mpq_class f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < d; ++j) a(r, j) -= f * a(c, j);
      for (std::size_t j = 0; j < w; ++j) b(r, j) -= f * b(c, j);
    }
  }
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t j = 0; j < w; ++j) b(r, j) /= a(r, r);
  return b;
}

EigenResult eigen_decompose(const Mat& m) {
  check_square(m);
  check_dim(m);
  check_finite(m);
  EMat e = to_eigen(m);
  Eigen::Index d = e.rows();
  Eigen::EigenSolver<EMat> right(e, true);
  Eigen::EigenSolver<EMat> left(e.transpose(), true);
  if (right.info() != Eigen::Success || left.info() != Eigen::Success)
    throw Error(ErrorCode::kNoConvergence, "eigenvalue iteration failed");
  double mnorm = entry_norm(m);
  EigenResult out;
  std::vector<char> used(d, 0);
  for (Eigen::Index i = 0; i < d; ++i) {
    EigenPair p;
    p.value = right.eigenvalues()(i);
    p.right.resize(d);
    for (Eigen::Index k = 0; k < d; ++k) p.right[k] = right.eigenvectors()(k, i);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (used[j]) continue;
      if (best < 0 || std::abs(left.eigenvalues()(j) - p.value) <
                          std::abs(left.eigenvalues()(best) - p.value))
        best = j;
    }
    used[best] = 1;
    p.left.resize(d);
    for (Eigen::Index k = 0; k < d; ++k) p.left[k] = left.eigenvectors()(k, best);
    double rn = 0.0, ln = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) {
      cplx sr = -p.value * p.right[r], sl = -p.value * p.left[r];
      for (Eigen::Index k = 0; k < d; ++k) {
        sr += e(r, k) * p.right[k];
        sl += p.left[k] * e(k, r);
      }
      rn += std::abs(sr);
      ln += std::abs(sl);
    }
    p.right_residual = rn;
    p.left_residual = ln;
    double bound = 1e-9 * std::max(mnorm, 1e-300);
    if (rn > bound * cnorm1(p.right) || ln > bound * cnorm1(p.left))
      throw Error(ErrorCode::kNoConvergence, "eigenpair residual too large");
    out.pairs.push_back(std::move(p));
  }
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) {
                     return std::abs(a.value) > std::abs(b.value);
                   });
  out.spectral_radius = out.pairs.empty() ? 0.0 : std::abs(out.pairs[0].value);
  if (m.nonnegative() && out.spectral_radius > 0.0) {
    double rho = out.spectral_radius;
    for (const auto& p : out.pairs) {
      if (std::abs(p.value - cplx(rho, 0.0)) > 1e-7 * (1.0 + rho)) continue;
      if (!out.perron_right) out.perron_right = as_perron(p.right);
      if (!out.perron_left) out.perron_left = as_perron(p.left);
    }
    if (!out.perron_right) out.perron_right = shifted_power(m);
    if (!out.perron_left) out.perron_left = shifted_power(m.transpose());
  }
  return out;
}

double spectral_radius(const Mat& m) {
  check_square(m);
  check_finite(m);
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<EMat> es(to_eigen(m), false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::kNoConvergence, "eigenvalue iteration failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<CVec> left_eigenspace(const Mat& m, cplx mu, double tol) {
  check_square(m);
  check_dim(m);
  ECMat k = left_eigen_basis(to_eigen(m), mu, tol);
  std::vector<CVec> out;
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    CVec v(k.rows());
    for (Eigen::Index r = 0; r < k.rows(); ++r) v[r] = k(r, c);
    out.push_back(std::move(v));
  }
  return out;
}

CommonLeftEigen common_left_eigenvector(const std::vector<Mat>& mats,
                                        double tol) {
  CommonLeftEigen out;
  if (mats.empty()) return out;
  for (const auto& m : mats) {
    check_square(m);
    check_dim(m);
  }
  struct Candidate {
    ECMat basis;
    std::vector<cplx> values;
  };
  std::vector<Candidate> cands;
  EMat first = to_eigen(mats[0]);
  for (const auto& mu : distinct_eigenvalues(first)) {
    ECMat b = left_eigen_basis(first, mu, tol);
    if (b.cols() > 0) cands.push_back({b, {mu}});
  }
  for (std::size_t t = 1; t < mats.size() && !cands.empty(); ++t) {
    EMat e = to_eigen(mats[t]);
    std::vector<Candidate> next;
    for (const auto& nu : distinct_eigenvalues(e)) {
      ECMat kb = left_eigen_basis(e, nu, tol);
      if (kb.cols() == 0) continue;
      for (const auto& c : cands) {
        ECMat stacked(c.basis.rows(), c.basis.cols() + kb.cols());
        stacked << c.basis, -kb;
        ECMat ker = kernel(stacked, tol);
        if (ker.cols() == 0) continue;
        ECMat w = c.basis * ker.topRows(c.basis.cols());
        Eigen::HouseholderQR<ECMat> qr(w);
        ECMat q = qr.householderQ() * ECMat::Identity(w.rows(), w.cols());
        Candidate nc{q, c.values};
        nc.values.push_back(nu);
        next.push_back(std::move(nc));
      }
    }
    cands.swap(next);
  }
  if (!cands.empty()) {
    out.exists = true;
    const auto& b = cands.front().basis;
    out.witness.resize(b.rows());
    for (Eigen::Index r = 0; r < b.rows(); ++r) out.witness[r] = b(r, 0);
    out.eigenvalues = cands.front().values;
  }
  return out;
}

}  // namespace matprod
