// triangular.cpp
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

#include "matprod/triangular.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "matprod/error.hpp"

namespace matprod {

namespace {

constexpr std::size_t kMaxHorizon = 2000;
constexpr std::size_t kMaxBlockDim = 16;

// Support pattern with one bitmask per row; d <= 16.
struct Bits {
  std::size_t d = 0;
  std::array<std::uint32_t, kMaxBlockDim> row{};

  bool operator==(const Bits& o) const { return d == o.d && row == o.row; }
  bool operator<(const Bits& o) const { return row < o.row; }
};

Bits identity_bits(std::size_t d) {
  Bits b;
  b.d = d;
  for (std::size_t i = 0; i < d; ++i) b.row[i] = 1u << i;
  return b;
}

Bits to_bits(const Mat& m) {
  Bits b;
  b.d = m.rows();
  SupportPattern p = support_pattern(m).pattern;
  for (std::size_t i = 0; i < b.d; ++i)
    for (std::size_t j = 0; j < b.d; ++j)
      if (p.at(i, j)) b.row[i] |= 1u << j;
  return b;
}

Bits times(const Bits& a, const Bits& b) {
  Bits out;
  out.d = a.d;
  for (std::size_t i = 0; i < a.d; ++i) {
    std::uint32_t r = 0;
    for (std::uint32_t m = a.row[i]; m; m &= m - 1) r |= b.row[__builtin_ctz(m)];
    out.row[i] = r;
  }
  return out;
}

std::vector<std::uint32_t> column_masks(const Bits& b) {
  std::vector<std::uint32_t> cols(b.d, 0);
  for (std::size_t i = 0; i < b.d; ++i)
    for (std::size_t j = 0; j < b.d; ++j)
      if (b.row[i] >> j & 1u) cols[j] |= 1u << i;
  return cols;
}

std::size_t distinct(const Bits& b) {
  auto cols = column_masks(b);
  std::sort(cols.begin(), cols.end());
  return static_cast<std::size_t>(std::unique(cols.begin(), cols.end()) - cols.begin());
}

SupportPattern to_pattern(const Bits& b) {
  SupportPattern p{b.d, b.d, std::vector<char>(b.d * b.d, 0)};
  for (std::size_t i = 0; i < b.d; ++i)
    for (std::size_t j = 0; j < b.d; ++j) p.mask[i * b.d + j] = b.row[i] >> j & 1u;
  return p;
}

// Column classes of the pattern ordered so that each class only has
// support in rows of itself and earlier classes. Empty when no such order.
std::vector<std::vector<std::size_t>> triangular_classes(const SupportPattern& p) {
  std::size_t d = p.cols;
  std::map<std::vector<char>, std::vector<std::size_t>> by_column;
  std::vector<std::vector<char>> order_seen;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<char> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = p.at(i, j);
    if (!by_column.count(c)) order_seen.push_back(c);
    by_column[c].push_back(j);
  }
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::vector<char>> supports;
  for (const auto& c : order_seen) {
    classes.push_back(by_column[c]);
    supports.push_back(c);
  }
  std::vector<char> placed_rows(d, 0), used(classes.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  while (out.size() < classes.size()) {
    bool progress = false;
    for (std::size_t h = 0; h < classes.size() && !progress; ++h) {
      if (used[h]) continue;
      std::vector<char> allowed = placed_rows;
      for (std::size_t j : classes[h]) allowed[j] = 1;
      bool ok = true;
      for (std::size_t i = 0; i < d; ++i)
        if (supports[h][i] && !allowed[i]) ok = false;
      if (!ok) continue;
      used[h] = 1;
      placed_rows = allowed;
      out.push_back(classes[h]);
      progress = true;
    }
    if (!progress) return {};
  }
  return out;
}

void check_block_inputs(const std::vector<Mat>& factors, std::size_t horizon) {
  if (horizon > kMaxHorizon)
    throw Error(ErrorCode::kInvalidArgument, "horizon exceeds 2000");
  if (horizon < 8) throw Error(ErrorCode::kInvalidArgument, "horizon must be at least 8");
  if (factors.size() < horizon)
    throw Error(ErrorCode::kInvalidArgument, "fewer factors than the horizon");
  std::size_t d = factors.front().rows();
  if (d == 0 || d > kMaxBlockDim)
    throw Error(ErrorCode::kInvalidArgument, "dimension must be in 1..16");
  for (std::size_t n = 0; n < horizon; ++n) {
    if (factors[n].rows() != d || factors[n].cols() != d)
      throw Error(ErrorCode::kNotSquare, "factors must be square of one size");
    if (!factors[n].nonnegative())
      throw Error(ErrorCode::kInvalidArgument, "factors must be nonnegative");
  }
}

}  // namespace

bool in_T1(const SupportPattern& p, const std::vector<std::vector<std::size_t>>& partition) {
  std::size_t d = p.cols;
  if (p.rows != d || partition.empty()) return false;
  std::vector<int> block_of(d, -1);
  for (std::size_t k = 0; k < partition.size(); ++k)
    for (std::size_t j : partition[k]) {
      if (j >= d || block_of[j] != -1) return false;
      block_of[j] = static_cast<int>(k);
    }
  for (int b : block_of)
    if (b < 0) return false;
  // Block-triangular: column j in J_k has support in J_1..J_k.
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i)
      if (p.at(i, j) && block_of[i] > block_of[j]) return false;
  // One distinct nonzero column per block.
  for (const auto& rows : partition)
    for (const auto& cols : partition) {
      std::vector<std::vector<char>> seen;
      for (std::size_t j : cols) {
        std::vector<char> c;
        bool nonzero = false;
        for (std::size_t i : rows) {
          c.push_back(p.at(i, j));
          nonzero = nonzero || p.at(i, j);
        }
        if (nonzero && std::find(seen.begin(), seen.end(), c) == seen.end())
          seen.push_back(c);
      }
      if (seen.size() > 1) return false;
    }
  return true;
}

BlockFormReport block_form_detect(const std::vector<Mat>& factors, std::size_t horizon) {
  if (factors.empty()) throw Error(ErrorCode::kInvalidArgument, "no factors");
  check_block_inputs(factors, horizon);
  std::size_t d = factors.front().rows();
  std::vector<Bits> z(horizon);
  for (std::size_t n = 0; n < horizon; ++n) z[n] = to_bits(factors[n]);

  // Window maxima L(n) = max_{n' in (horizon/2, horizon]} N(P_{n,n'}), n <= horizon/4.
  std::size_t quarter = horizon / 4;
  std::size_t half = horizon / 2;
  std::vector<std::size_t> window_max(quarter + 1, 0);
  for (std::size_t n = 0; n <= quarter; ++n) {
    Bits acc = identity_bits(d);
    for (std::size_t m = n + 1; m <= horizon; ++m) {
      acc = times(acc, z[m - 1]);
      if (m > half) window_max[n] = std::max(window_max[n], distinct(acc));
    }
  }
  BlockFormReport out;
  out.delta = window_max[quarter];
  std::size_t n1 = quarter;
  while (n1 > 0 && window_max[n1 - 1] == out.delta) --n1;
  if (n1 > quarter / 2)
    throw Error(ErrorCode::kHorizonTooShort, "window maxima have not stabilized");
  out.n1 = n1;

  // Most frequent pattern among P_{n1,n'} with N = delta.
  std::map<Bits, std::vector<std::size_t>> by_pattern;
  {
    Bits acc = identity_bits(d);
    for (std::size_t m = n1 + 1; m <= horizon; ++m) {
      acc = times(acc, z[m - 1]);
      if (distinct(acc) == out.delta) by_pattern[acc].push_back(m);
    }
  }
  if (by_pattern.empty())
    throw Error(ErrorCode::kHorizonTooShort, "no product attains the stabilized count");
  auto best = by_pattern.begin();
  for (auto it = by_pattern.begin(); it != by_pattern.end(); ++it)
    if (it->second.size() > best->second.size()) best = it;
  const Bits common = best->first;

  // Greedy checkpoints: accept a candidate when every earlier checkpoint
  // reaches it with the common pattern.
  struct Running {
    std::size_t start;
    std::size_t pos;
    Bits acc;
  };
  std::vector<Running> running{{n1, n1, identity_bits(d)}};
  out.checkpoints.push_back(n1);
  for (std::size_t c : best->second) {
    bool ok = true;
    for (auto& r : running) {
      while (r.pos < c) r.acc = times(r.acc, z[r.pos++]);
      if (!(r.acc == common)) ok = false;
    }
    if (!ok) continue;
    out.checkpoints.push_back(c);
    running.push_back({c, c, identity_bits(d)});
  }
  if (out.checkpoints.size() < 3)
    throw Error(ErrorCode::kHorizonTooShort, "fewer than three checkpoints within the horizon");

  out.pattern = to_pattern(common);
  out.partition = triangular_classes(out.pattern);
  if (out.partition.empty()) {
    std::vector<std::size_t> all(d);
    for (std::size_t j = 0; j < d; ++j) all[j] = j;
    out.partition = {all};
  }

  // Independent re-check of every checkpoint pair from the factor supports.
  out.t1_membership = true;
  for (std::size_t k = 0; k + 1 < out.checkpoints.size() && out.t1_membership; ++k) {
    SupportPattern acc = support_pattern(Mat::identity(d)).pattern;
    std::size_t pos = out.checkpoints[k];
    for (std::size_t l = k + 1; l < out.checkpoints.size(); ++l) {
      while (pos < out.checkpoints[l])
        acc = boolean_product(acc, support_pattern(factors[pos++]).pattern);
      if (acc != out.pattern || !in_T1(acc, out.partition)) {
        out.t1_membership = false;
        break;
      }
    }
  }
  return out;
}

BlockFormReport block_form_detect(const MatrixFamily& family, const SymbolSequence& seq,
                                  std::size_t horizon) {
  if (family.matrices.empty()) throw Error(ErrorCode::kInvalidArgument, "empty family");
  if (horizon > kMaxHorizon)
    throw Error(ErrorCode::kInvalidArgument, "horizon exceeds 2000");
  auto len = seq.length();
  if (len && *len < horizon)
    throw Error(ErrorCode::kInvalidArgument, "sequence shorter than the horizon");
  std::vector<Mat> factors;
  factors.reserve(horizon);
  for (std::size_t n = 0; n < horizon; ++n) {
    int s = seq.at(n);
    if (s < 0 || static_cast<std::size_t>(s) >= family.alphabet())
      throw Error(ErrorCode::kInvalidArgument, "symbol outside the family");
    factors.push_back(family.matrices[s]);
  }
  return block_form_detect(factors, horizon);
}

// ---- 3x3 upper-triangular ----

const char* finiteness_name(Finiteness f) {
  switch (f) {
    case Finiteness::kFinite: return "finite";
    case Finiteness::kInfinite: return "infinite";
    default: return "inconclusive";
  }
}

const char* prediction_name(LimitPrediction p) {
  switch (p) {
    case LimitPrediction::kPredicted: return "predicted";
    case LimitPrediction::kNoCommonLimit: return "no_common_limit";
    default: return "undetermined";
  }
}

Finiteness finiteness(const std::vector<double>& x) {
  std::size_t n = x.size();
  if (n < 8) return Finiteness::kInconclusive;
  std::size_t q = n / 4;
  double last = x[n - 1];
  if (!std::isfinite(last)) return Finiteness::kInfinite;
  double before = x[n - 1 - q];
  double last_inc = last - before;
  double first_inc = x[q - 1];
  if (last_inc <= 1e-9 * std::fabs(last)) return Finiteness::kFinite;
  if (before > 0 && last >= 2 * before) return Finiteness::kInfinite;
  if (last_inc > 0 && last_inc >= first_inc) return Finiteness::kInfinite;
  return Finiteness::kInconclusive;
}

namespace {

template <class T>
bool is_positive(const T& x) { return x > 0; }

template <class T>
void validate_upper(const std::vector<Matrix<T>>& factors) {
  if (factors.empty()) throw Error(ErrorCode::kInvalidArgument, "no factors");
  for (const auto& a : factors) {
    if (a.rows() != 3 || a.cols() != 3)
      throw Error(ErrorCode::kInvalidArgument, "factors must be 3x3");
    if (a(1, 0) != 0 || a(2, 0) != 0 || a(2, 1) != 0)
      throw Error(ErrorCode::kNotTriangular, "factor is not upper-triangular");
    if (!a.nonnegative()) throw Error(ErrorCode::kInvalidArgument, "factor has a negative entry");
    if (!is_positive(a(0, 0)) || !is_positive(a(1, 1)) || !is_positive(a(2, 2)))
      throw Error(ErrorCode::kZeroDiagonal, "diagonal entries must be positive");
  }
}

template <class T>
SeriesValues<T> compute_series(const std::vector<Matrix<T>>& factors) {
  SeriesValues<T> v;
  T a_prev = 1, d_prev = 1, f_prev = 1, s_prev = 0, t_prev = 0, u_prev = 0, tau_prev = 0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto& m = factors[k];
    T a = a_prev * m(0, 0), d = d_prev * m(1, 1), f = f_prev * m(2, 2);
    T s = s_prev + a_prev * m(0, 1) / d;
    T t = t_prev + a_prev * m(0, 2) / f;
    T u = u_prev + d_prev * m(1, 2) / f;
    T tau = tau_prev;
    if (k >= 1) tau += s_prev * d_prev * m(1, 2) / f;
    v.a_star.push_back(a);
    v.d_star.push_back(d);
    v.f_star.push_back(f);
    v.s.push_back(s);
    v.t.push_back(t);
    v.u.push_back(u);
    v.tau.push_back(tau);
    a_prev = a; d_prev = d; f_prev = f;
    s_prev = s; t_prev = t; u_prev = u; tau_prev = tau;
  }
  return v;
}

}  // namespace

TriangularSeries series3x3(const std::vector<Mat>& factors) {
  validate_upper(factors);
  TriangularSeries out;
  out.factors = factors;
  out.v = compute_series(factors);
  for (const auto& m : factors)
    if (m(0, 1) * m(1, 2) == 0) out.all_be_nonzero = false;

  const auto& v = out.v;
  for (std::size_t i = 1; i < v.s.size(); ++i) {
    if (v.s[i] < v.s[i - 1] || v.t[i] < v.t[i - 1] || v.u[i] < v.u[i - 1])
      out.monotone = false;
    if (v.u[i - 1] > 0 && std::isfinite(v.u[i]) && std::isfinite(v.tau[i])) {
      double prev = v.tau[i - 1] / v.u[i - 1], cur = v.tau[i] / v.u[i];
      if (cur < prev - 1e-12 * std::max(1.0, std::fabs(prev))) out.monotone = false;
    }
  }

  // Closed form against the direct product while the product stays finite.
  Mat direct = Mat::identity(3);
  for (std::size_t n = 1; n <= factors.size(); ++n) {
    direct = direct * factors[n - 1];
    double norm = entry_norm(direct);
    if (!std::isfinite(norm) || norm < 1e-280) break;
    Mat closed = closed_form_product(v, n);
    double err = 0.0;
    for (std::size_t k = 0; k < 9; ++k)
      err = std::max(err, std::fabs(closed.data()[k] - direct.data()[k]));
    if (!std::isfinite(err)) break;
    out.closed_form_error = std::max(out.closed_form_error, err / norm);
  }
  out.s_fin = finiteness(v.s);
  out.t_fin = finiteness(v.t);
  out.u_fin = finiteness(v.u);
  out.tau_fin = finiteness(v.tau);
  return out;
}

ExactSeriesCheck series3x3_exact(const std::vector<QMat>& factors) {
  validate_upper(factors);
  ExactSeriesCheck out;
  out.v = compute_series(factors);
  QMat direct = QMat::identity(3);
  out.equal = true;
  for (std::size_t n = 1; n <= factors.size(); ++n) {
    direct = direct * factors[n - 1];
    if (!(closed_form_product(out.v, n) == direct)) out.equal = false;
  }
  out.direct = direct;
  out.closed = closed_form_product(out.v, factors.size());
  return out;
}

ClassifyReport classify3x3_and_predict(const TriangularSeries& series,
                                       const std::vector<std::vector<double>>& test_vectors) {
  if (series.factors.empty()) throw Error(ErrorCode::kInvalidArgument, "empty series");
  for (const auto& v : test_vectors) {
    if (v.size() != 3) throw Error(ErrorCode::kInvalidArgument, "test vectors must have 3 entries");
    for (double x : v)
      if (!(x > 0)) throw Error(ErrorCode::kInvalidArgument, "test vectors must be positive");
  }
  using F = Finiteness;
  auto undecided = [](F f) { return f == F::kInconclusive; };
  ClassifyReport out;
  if (undecided(series.s_fin))
    throw Error(ErrorCode::kInconclusiveFiniteness, "cannot decide finiteness of s");
  if (series.s_fin == F::kInfinite) {
    if (series.u_fin == F::kInfinite || series.tau_fin == F::kInfinite) {
      out.case_id = 1;
    } else if (undecided(series.u_fin) || undecided(series.tau_fin)) {
      throw Error(ErrorCode::kInconclusiveFiniteness, "cannot decide finiteness of u or tau");
    } else {
      out.case_id = 2;
    }
  } else {
    if (undecided(series.u_fin))
      throw Error(ErrorCode::kInconclusiveFiniteness, "cannot decide finiteness of u");
    out.case_id = series.u_fin == F::kInfinite ? 3 : 4;
  }

  static const char* kShapes[] = {"", "[[a,b,c],[0,0,0],[0,0,0]]", "[[a,b,c],[0,0,e],[0,0,f]]",
                                  "[[a,b,c],[0,d,e],[0,0,0]]", "[[a,b,c],[0,d,e],[0,0,f]]"};
  out.limit_point_shape = kShapes[out.case_id];

  const auto& v = series.v;
  std::size_t n = v.s.size() - 1;
  auto normalized = [](std::vector<double> x) {
    double s = vec_norm1(x);
    for (auto& e : x) e /= s;
    return x;
  };
  // Diagonal of a limit point, estimated from the normalized product.
  ProductTrajectory traj = run_product(series.factors, std::nullopt, {false});
  const Mat& unit = traj.steps.back().product.unit;
  constexpr double kTol = 1e-6;
  bool a0 = unit(0, 0) <= kTol, d0 = unit(1, 1) <= kTol, f0 = unit(2, 2) <= kTol;

  switch (out.case_id) {
    case 1:
      out.prediction = LimitPrediction::kPredicted;
      out.predicted = {1.0, 0.0, 0.0};
      break;
    case 2:
    case 4:
      if (series.all_be_nonzero) {
        out.prediction = LimitPrediction::kPredicted;
        out.predicted = normalized({v.t[n] + v.tau[n], v.u[n], 1.0});
      } else if (out.case_id == 4 && !(a0 && d0) && !(d0 && f0)) {
        out.prediction = LimitPrediction::kNoCommonLimit;
      }
      break;
    case 3:
      if (series.all_be_nonzero) {
        out.prediction = LimitPrediction::kPredicted;
        out.predicted = normalized({v.s[n], 1.0, 0.0});
      } else if (!a0) {
        out.prediction = LimitPrediction::kNoCommonLimit;
      }
      break;
  }

  for (const auto& tv : test_vectors) {
    ProductTrajectory t = run_product(series.factors, tv, {false});
    out.images.push_back(t.steps.back().image);
  }
  if (out.prediction == LimitPrediction::kPredicted) {
    for (const auto& img : out.images) {
      double gap = 0.0;
      for (std::size_t i = 0; i < 3; ++i) gap += std::fabs(img[i] - out.predicted[i]);
      out.validation_gap = std::max(out.validation_gap, gap);
    }
  } else if (out.prediction == LimitPrediction::kNoCommonLimit) {
    // Spread of the images: large when the limit depends on the vector.
    for (const auto& x : out.images)
      for (const auto& y : out.images) {
        double gap = 0.0;
        for (std::size_t i = 0; i < 3; ++i) gap += std::fabs(x[i] - y[i]);
        out.validation_gap = std::max(out.validation_gap, gap);
      }
  }
  return out;
}

// ---- lower-triangular ----

LowerTriReport lower_tri_sv_check(const std::vector<Mat>& factors) {
  if (factors.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two factors");
  std::size_t d = factors.front().rows();
  if (d == 0 || d > 8) throw Error(ErrorCode::kInvalidArgument, "dimension must be in 1..8");
  for (const auto& a : factors) {
    if (a.rows() != d || a.cols() != d)
      throw Error(ErrorCode::kNotSquare, "factors must be square of one size");
    if (!a.nonnegative()) throw Error(ErrorCode::kInvalidArgument, "factor has a negative entry");
    for (std::size_t i = 0; i < d; ++i) {
      if (!(a(i, i) > 0)) throw Error(ErrorCode::kZeroDiagonal, "diagonal entries must be positive");
      for (std::size_t j = i + 1; j < d; ++j)
        if (a(i, j) != 0) throw Error(ErrorCode::kNotTriangular, "factor is not lower-triangular");
    }
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  LowerTriReport out;
  SupportPattern support = support_pattern(Mat::identity(d)).pattern;
  ScaledMat acc{Mat::identity(d), 0.0};
  double ratio_max = 0.0, gap_max = 0.0;
  for (const auto& a : factors) {
    acc = scaled_multiply(acc, a);
    support = boolean_product(support, support_pattern(a).pattern);
    const Mat& m = acc.unit;

    // Entry ratios m_{i,j} / m_{i',j'} with j >= j' and m_{i',j'} structurally nonzero.
    std::vector<double> col_max(d, 0.0), col_min(d, kInf);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) {
        col_max[j] = std::max(col_max[j], m(i, j));
        if (support.at(i, j)) col_min[j] = std::min(col_min[j], m(i, j));
      }
    double suffix = 0.0;
    for (std::size_t jp = d; jp-- > 0;) {
      suffix = std::max(suffix, col_max[jp]);
      if (col_min[jp] == kInf) continue;
      double r = col_min[jp] > 0 ? std::log(suffix / col_min[jp]) : kInf;
      ratio_max = std::max(ratio_max, r);
    }
    out.log_ratio_max.push_back(ratio_max);

    // Singular values against column norms; the smallest from the determinant.
    Eigen::MatrixXd e(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) e(i, j) = m(i, j);
    Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues();
    double det = 1.0, rest = 1.0;
    for (std::size_t i = 0; i < d; ++i) det *= m(i, i);
    for (std::size_t k = 0; k + 1 < d; ++k) rest *= sv(k);
    if (d > 1 && rest > 0) sv(d - 1) = det / rest;
    for (std::size_t k = 0; k < d; ++k) {
      double col = 0.0;
      for (std::size_t i = 0; i < d; ++i) col += m(i, k);
      double g = (sv(k) > 0 && col > 0) ? std::fabs(std::log(sv(k) / col)) : kInf;
      gap_max = std::max(gap_max, g);
    }
    out.log_sv_gap_max.push_back(gap_max);
  }
  auto bounded = [](const std::vector<double>& run) {
    double end = run.back(), mid = run[run.size() / 2 - 1];
    return std::isfinite(end) && end <= mid + std::log(2.0);
  };
  out.ratio_bounded = bounded(out.log_ratio_max);
  out.sv_column_match = bounded(out.log_sv_gap_max);
  out.agree = out.ratio_bounded == out.sv_column_match;
  return out;
}

}  // namespace matprod
