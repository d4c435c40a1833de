// counterexamples.cpp
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

#include "matprod/counterexamples.hpp"

#include <cmath>

#include "matprod/error.hpp"

namespace matprod {

namespace {

mpq_class pow2(long e) {
  mpq_class q = 1;
  if (e >= 0)
    mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}

mpq_class norm1(const QMat& v) { return entry_norm(v); }

constexpr long kMaxExponent = 10000;

std::vector<double> normalized(const Mat& v) {
  double s = entry_norm(v);
  std::vector<double> out;
  for (double x : v.data()) out.push_back(x / s);
  return out;
}

// Direction of lim_n M^n c by repeated normalized squaring (n = 2^62).
// For 2x2 input an eigenvector c is returned as is; squaring would
// underflow its subdominant component to zero.
Mat limit_direction(const Mat& m, const Mat& c) {
  if (m.rows() == 2) {
    Mat mc = m * c;
    double cross = mc(0, 0) * c(1, 0) - mc(1, 0) * c(0, 0);
    if (std::fabs(cross) <= 1e-15 * entry_norm(mc) * entry_norm(c) && entry_norm(mc) > 0.0)
      return c / entry_norm(c);
  }
  Mat b = m / entry_norm(m);
  for (int j = 0; j < 62; ++j) {
    Mat sq = b * b;
    double s = entry_norm(sq);
    if (s == 0.0) throw Error(ErrorCode::kProductVanished, "power vanished");
    b = sq / s;
  }
  Mat v = b * c;
  double s = entry_norm(v);
  if (s == 0.0) throw Error(ErrorCode::kZeroImage, "limit image vanished");
  return v / s;
}

}  // namespace

const std::vector<QMat>& ce12_letters() {
  static const std::vector<QMat> letters = {QMat{{mpq_class(1, 2), 0}, {0, 1}},
                                            QMat{{1, 1}, {1, 0}}};
  return letters;
}

mpq_class ce12_p_upper() {
  mpq_class p = 1;
  for (long j = 0; j <= 40; ++j) p *= 1 + pow2(-j);
  return p * (1 + pow2(-38));
}

Word CE12Build::word() const {
  Word w;
  for (std::size_t k = 0; k < K; ++k) {
    w.insert(w.end(), static_cast<std::size_t>(n[k]), 0);
    w.push_back(1);
  }
  if (K) w.insert(w.end(), static_cast<std::size_t>(h[K - 1]), 0);
  return w;
}

CE12Build ce12_build_and_verify(std::size_t K) {
  if (K < 1 || K > 8) throw Error(ErrorCode::kInvalidArgument, "K must be in 1..8");
  CE12Build b;
  b.K = K;
  b.p_upper = ce12_p_upper();
  b.bound = 1 / (9 * b.p_upper);
  b.v.push_back(QMat::column({1, 0}));
  auto ratio = [&](std::size_t k, long h) -> mpq_class {
    // column-norm ratio of P_{s_k} diag(2^-h, 1)
    return pow2(-h) * norm1(b.v[k]) / (pow2(-b.n[k - 1]) * norm1(b.v[k - 1]));
  };
  for (std::size_t k = 1; k <= K; ++k) {
    long nk = 1;
    if (k == 1) {
      b.v.push_back(QMat::column({pow2(-nk), 1}));
    } else {
      nk = std::max<long>(1, b.h[k - 2]);
      const QMat& v1 = b.v[k - 1];
      const QMat& v2 = b.v[k - 2];
      mpq_class cap = (pow2(-static_cast<long>(k)) + 1) * pow2(-b.n[k - 2]) * norm1(v2);
      for (;; ++nk) {
        if (nk > kMaxExponent)
          throw Error(ErrorCode::kSearchExhausted,
                      "no exponent up to 10^4 meets the norm inequality at k = " +
                          std::to_string(k));
        QMat vk = v1 * pow2(-nk) + v2 * pow2(-b.n[k - 2]);
        if (norm1(vk) <= cap) {
          b.v.push_back(vk);
          break;
        }
      }
    }
    b.n.push_back(nk);
    b.s.push_back((k > 1 ? b.s.back() : 0) + nk + 1);
    // Least h >= 0 putting the ratio into [1, 2].
    long h = 0;
    while (ratio(k, h) > 2 && h <= kMaxExponent) ++h;
    mpq_class r = ratio(k, h);
    if (r < 1 || r > 2) b.ratio_ok = false;
    b.h.push_back(h);
    if (k > 1 && b.h[k - 2] > nk) b.window_ok = false;
  }

  // Independent re-verification from the letter products.
  const auto& L = ce12_letters();
  QMat p = QMat::identity(2);
  std::size_t k = 0;
  for (std::size_t kk = 1; kk <= K; ++kk) {
    for (long i = 0; i < b.n[kk - 1]; ++i) p = p * L[0];
    p = p * L[1];
    k = kk;
    QMat expect(2, 2);
    for (int i = 0; i < 2; ++i) {
      expect(i, 0) = b.v[k](i, 0);
      expect(i, 1) = pow2(-b.n[k - 1]) * b.v[k - 1](i, 0);
    }
    if (p != expect) b.recurrence_ok = false;
    if (k >= 2) {
      QMat rec = b.v[k - 1] * pow2(-b.n[k - 1]) + b.v[k - 2] * pow2(-b.n[k - 2]);
      if (rec != b.v[k]) b.recurrence_ok = false;
      mpq_class cap = (pow2(-static_cast<long>(k)) + 1) * pow2(-b.n[k - 2]) * norm1(b.v[k - 2]);
      if (norm1(b.v[k]) > cap) b.norm_ok = false;
    }
    QMat pn = p;
    for (long i = 0; i < b.h[k - 1]; ++i) pn = pn * L[0];
    mpq_class nrm = entry_norm(pn);
    mpq_class d = abs(determinant(pn)) / (nrm * nrm);
    // Closed form 2^{k - s_k - h_k} / (2^-h ||v_k|| + 2^-n_k ||v_{k-1}||)^2.
    mpq_class denom = pow2(-b.h[k - 1]) * norm1(b.v[k]) + pow2(-b.n[k - 1]) * norm1(b.v[k - 1]);
    mpq_class closed = pow2(static_cast<long>(k) - b.s[k - 1] - b.h[k - 1]) / (denom * denom);
    if (closed != d) b.recurrence_ok = false;
    b.det.push_back(d);
    if (d < b.bound) b.certificates_ok = false;
    auto sv = singular_values(to_float(pn / nrm));
    b.sv_ratio.push_back(sv[0] > 0 ? sv[1] / sv[0] : 0.0);
  }
  return b;
}

const std::vector<QMat>& ce13_letters() {
  static const std::vector<QMat> letters = {QMat{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}},
                                            QMat{{1, 0, 0}, {0, 1, 1}, {0, 0, 1}}};
  return letters;
}

Word ce13_word(std::size_t levels) {
  Word w;
  for (std::size_t i = 1; i <= levels; ++i) {
    w.insert(w.end(), std::size_t{1} << i, 0);
    w.insert(w.end(), std::size_t{1} << i, 1);
  }
  return w;
}

CE13Report ce13_verify(std::size_t k, const CE13Options& opts) {
  if (k < 1 || k > 12) throw Error(ErrorCode::kInvalidArgument, "k must be in 1..12");
  if (opts.tail_levels < 1 || opts.centroid_levels < opts.tail_levels ||
      opts.centroid_levels > 40 || opts.n_lo < 1 || opts.n_hi < opts.n_lo)
    throw Error(ErrorCode::kInvalidArgument, "bad CE13 options");
  const auto& L = ce13_letters();
  CE13Report r;
  r.k = k;
  auto level = [&](std::size_t i) {
    return power(L[0], 1ul << i) * power(L[1], 1ul << i);
  };
  auto closed = [](mpz_class a, mpz_class b) {
    return QMat{{1, 0, mpq_class(a)}, {0, 1, mpq_class(b)}, {0, 0, 1}};
  };
  QMat p = QMat::identity(3);
  for (std::size_t i = 1; i <= k; ++i) p = p * level(i);
  mpz_class t = (mpz_class(1) << (k + 1)) - 2;
  mpz_class t2 = (mpz_class(1) << (k + 2)) - 2;
  r.product = p;
  r.closed_form_match = p == closed(t, t);
  r.extended = p * power(L[0], 1ul << (k + 1));
  r.extended_match = r.extended == closed(t2, t);

  // c_n = P_n u_3 / ||P_n u_3|| at the two checkpoint kinds of the deepest levels.
  std::vector<std::vector<double>> points;
  QMat q = QMat::identity(3);
  for (std::size_t i = 1; i <= opts.centroid_levels; ++i) {
    QMat after_a = q * power(L[0], 1ul << i);
    q = after_a * power(L[1], 1ul << i);
    if (i + opts.tail_levels <= opts.centroid_levels) continue;
    for (const QMat* m : {&q, &after_a}) {
      QMat col(3, 1);
      for (int j = 0; j < 3; ++j) col(j, 0) = (*m)(j, 2);
      points.push_back(normalized(to_float(col)));
    }
  }
  std::vector<std::size_t> counts;
  for (const auto& x : points) {
    bool placed = false;
    for (std::size_t c = 0; c < r.centroids.size() && !placed; ++c) {
      double d = 0.0;
      for (int j = 0; j < 3; ++j) d += std::fabs(r.centroids[c][j] - x[j]);
      if (d < 1e-3) {
        double n = static_cast<double>(counts[c]);
        for (int j = 0; j < 3; ++j) r.centroids[c][j] = (r.centroids[c][j] * n + x[j]) / (n + 1);
        ++counts[c];
        placed = true;
      }
    }
    if (!placed) {
      r.centroids.push_back(x);
      counts.push_back(1);
    }
  }

  // Singular value orders along A^2 B^2 A^4 B^4 ...
  std::size_t levels = 1;
  while (ce13_word(levels).size() < opts.n_hi) ++levels;
  Word w = ce13_word(levels);
  ScaledMat acc = ScaledMat::identity(3);
  Mat A = to_float(L[0]), B = to_float(L[1]);
  bool first = true;
  for (std::size_t n = 1; n <= opts.n_hi; ++n) {
    acc = scaled_multiply(acc, w[n - 1] == 0 ? A : B);
    if (n < opts.n_lo) continue;
    auto sv = singular_values(acc.unit);
    double scale = std::exp(acc.log_scale);
    double dn = static_cast<double>(n);
    double vals[3] = {sv[0] * scale / dn, sv[1] * scale, sv[2] * scale * dn};
    double* slots[3] = {r.d1_over_n, r.d2, r.n_d3};
    for (int j = 0; j < 3; ++j) {
      if (first || vals[j] < slots[j][0]) slots[j][0] = vals[j];
      if (first || vals[j] > slots[j][1]) slots[j][1] = vals[j];
    }
    first = false;
  }
  return r;
}

CE22Report ce22_limits(const std::vector<double>& p) {
  if (p.size() != 4) throw Error(ErrorCode::kInvalidArgument, "need four probabilities");
  double total = 0.0;
  for (double x : p) {
    if (!(x > 0.0)) throw Error(ErrorCode::kInvalidArgument, "probabilities must be positive");
    total += x;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "probabilities must sum to 1");
  Mat m1{{p[1], p[0]}, {0.0, p[3]}};
  Mat m2{{p[2], p[1]}, {0.0, 0.0}};
  Mat c = Mat::column({1.0, 1.0});
  CE22Report r;
  r.limit_11 = limit_direction(m1, c).col(0);
  r.limit_12 = limit_direction(m1, limit_direction(m2, c)).col(0);
  for (int i = 0; i < 2; ++i) r.distance += std::fabs(r.limit_11[i] - r.limit_12[i]);
  r.uniform = r.distance <= 1e-6;
  return r;
}

}  // namespace matprod
