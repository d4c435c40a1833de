// trajectory.cpp
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

#include "matprod/trajectory.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "matprod/error.hpp"
#include "matprod/rng.hpp"

namespace matprod {

namespace {

std::string at_step(const char* what, std::size_t n) {
  return std::string(what) + " at n = " + std::to_string(n);
}

void check_nonneg_finite(const Mat& m, const char* what) {
  check_finite(m);
  if (!m.nonnegative())
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " has a negative entry");
}

std::vector<double> mat_vec(const Mat& m, const std::vector<double>& v) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

double dist1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double mat_dist(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s += std::fabs(a.data()[i] - b.data()[i]);
  return s;
}

std::size_t window_size(std::size_t depth, double frac, std::size_t at_least) {
  auto w = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(depth)));
  w = std::max(w, at_least);
  return std::min(w, depth);
}

std::vector<double> validated_start(const std::vector<double>& v, std::size_t d) {
  if (v.size() != d)
    throw Error(ErrorCode::kInvalidArgument, "start vector has wrong length");
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      throw Error(ErrorCode::kInvalidArgument, "start vector must be positive");
  return v;
}

// Suffix diameter bound: sum over coordinates of the range of c_p, p >= n.
std::vector<double> suffix_gaps(const std::vector<std::vector<double>>& images) {
  std::size_t depth = images.size();
  std::vector<double> gaps(depth, 0.0);
  if (depth == 0) return gaps;
  std::size_t d = images[0].size();
  std::vector<double> lo = images.back(), hi = images.back();
  for (std::size_t k = depth; k-- > 0;) {
    double g = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], images[k][i]);
      hi[i] = std::max(hi[i], images[k][i]);
      g += hi[i] - lo[i];
    }
    gaps[k] = g;
  }
  return gaps;
}

// Images c_{xi,n} for n = 1..depth without per-step diagnostics.
std::vector<std::vector<double>> fast_images(const MatrixFamily& f,
                                             const Word& w,
                                             const std::vector<double>& c) {
  std::vector<std::vector<double>> out;
  out.reserve(w.size());
  ScaledMat acc = ScaledMat::identity(f.order());
  for (std::size_t n = 0; n < w.size(); ++n) {
    acc = scaled_multiply(acc, f.matrices[w[n]]);
    auto v = mat_vec(acc.unit, c);
    double s = vec_norm1(v);
    if (s == 0.0) throw Error(ErrorCode::kZeroImage, at_step("P_n c = 0", n + 1));
    for (auto& x : v) x /= s;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

void MatrixFamily::validate(double tol) const {
  if (matrices.empty())
    throw Error(ErrorCode::kInvalidArgument, "family has no matrices");
  std::size_t d = order();
  if (d == 0 || d > kMaxDim)
    throw Error(ErrorCode::kInvalidArgument, "matrix order must be in 1..32");
  for (const auto& m : matrices) {
    if (!m.square()) throw Error(ErrorCode::kNotSquare, "family matrix not square");
    if (m.rows() != d)
      throw Error(ErrorCode::kInvalidArgument, "family matrices differ in order");
    check_nonneg_finite(m, "family matrix");
  }
  if (!row_vectors.empty()) {
    if (row_vectors.size() != matrices.size())
      throw Error(ErrorCode::kInvalidArgument, "need one row vector per symbol");
    for (const auto& r : row_vectors) {
      if (r.rows() != 1 || r.cols() != d)
        throw Error(ErrorCode::kInvalidArgument, "row vector has wrong shape");
      check_nonneg_finite(r, "row vector");
    }
  }
  if (terminal) {
    if (terminal->rows() != d || terminal->cols() != 1)
      throw Error(ErrorCode::kInvalidArgument, "terminal vector has wrong shape");
    check_nonneg_finite(*terminal, "terminal vector");
  }
  if (!row_vectors.empty() && terminal) {
    double total = 0.0;
    Mat sum(d, 1);
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      total += (row_vectors[i] * *terminal)(0, 0);
      sum += matrices[i] * *terminal;
    }
    if (std::fabs(total - 1.0) > tol)
      throw Error(ErrorCode::kInvalidArgument, "sum_i r_i c must be 1");
    for (std::size_t i = 0; i < d; ++i)
      if (std::fabs(sum(i, 0) - (*terminal)(i, 0)) > tol)
        throw Error(ErrorCode::kInvalidArgument, "sum_i M_i c must equal c");
  }
}

void QMatrixFamily::validate() const {
  MatrixFamily f = to_float();
  f.row_vectors.clear();
  f.validate();
  if (!row_vectors.empty() && terminal) {
    std::size_t d = matrices[0].rows();
    mpq_class total = 0;
    QMat sum(d, 1);
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      if (row_vectors[i].rows() != 1 || row_vectors[i].cols() != d)
        throw Error(ErrorCode::kInvalidArgument, "row vector has wrong shape");
      total += (row_vectors[i] * *terminal)(0, 0);
      sum += matrices[i] * *terminal;
    }
    if (total != 1)
      throw Error(ErrorCode::kInvalidArgument, "sum_i r_i c must be exactly 1");
    if (sum != *terminal)
      throw Error(ErrorCode::kInvalidArgument, "sum_i M_i c must equal c exactly");
  }
}

MatrixFamily QMatrixFamily::to_float() const {
  MatrixFamily f;
  for (const auto& m : matrices) f.matrices.push_back(matprod::to_float(m));
  for (const auto& r : row_vectors) f.row_vectors.push_back(matprod::to_float(r));
  if (terminal) f.terminal = matprod::to_float(*terminal);
  return f;
}

ProductTrajectory run_product(const std::vector<Mat>& factors,
                              const std::optional<std::vector<double>>& start,
                              const TrajectoryOptions& opts) {
  if (factors.empty())
    throw Error(ErrorCode::kInvalidArgument, "depth must be at least 1");
  ProductTrajectory t;
  t.order = factors[0].rows();
  if (t.order == 0 || t.order > kMaxDim)
    throw Error(ErrorCode::kInvalidArgument, "matrix order must be in 1..32");
  for (const auto& a : factors) {
    if (!a.square() || a.rows() != t.order)
      throw Error(ErrorCode::kInvalidArgument, "factors must be square of equal order");
    check_finite(a);
  }
  if (start) t.start = validated_start(*start, t.order);
  t.factors = factors;
  t.steps.reserve(factors.size());
  ScaledMat acc = ScaledMat::identity(t.order);
  for (std::size_t n = 1; n <= factors.size(); ++n) {
    const Mat& a = factors[n - 1];
    double an = entry_norm(a);
    if (an == 0.0) throw Error(ErrorCode::kProductVanished, at_step("P_n = 0", n));
    TrajectoryStep s;
    try {
      s.product = scaled_multiply(acc, a);
    } catch (const Error&) {
      throw Error(ErrorCode::kProductVanished, at_step("P_n = 0", n));
    }
    s.factor_log_norm = std::log(an);
    // With a unit-norm P_{n-1}, ||P_n|| / (||P_{n-1}|| ||A_n||) = ||U A_n|| / ||A_n||.
    s.lambda = n == 1 ? 1.0 : std::exp(s.product.log_scale - acc.log_scale - s.factor_log_norm);
    if (n > 1) s.lambda = std::min(s.lambda, 1.0);
    if (!t.start.empty()) {
      s.image = mat_vec(s.product.unit, t.start);
      double norm = vec_norm1(s.image);
      if (norm == 0.0) throw Error(ErrorCode::kZeroImage, at_step("P_n c = 0", n));
      for (auto& x : s.image) x /= norm;
    }
    if (opts.singular_values) {
      s.singular = singular_values(s.product.unit);
      s.det_normalized = determinant(s.product.unit);
    }
    acc = s.product;
    t.steps.push_back(std::move(s));
  }
  return t;
}

ProductTrajectory run_trajectory(const MatrixFamily& family,
                                 const SymbolSequence& seq, std::size_t depth,
                                 const std::optional<std::vector<double>>& start,
                                 const TrajectoryOptions& opts) {
  family.validate();
  if (depth == 0) throw Error(ErrorCode::kInvalidArgument, "depth must be at least 1");
  if (seq.alphabet() > static_cast<int>(family.alphabet()))
    throw Error(ErrorCode::kInvalidArgument, "sequence alphabet exceeds family size");
  Word w = seq.take(depth);
  std::vector<Mat> factors;
  factors.reserve(depth);
  for (int x : w) factors.push_back(family.matrices[x]);
  std::optional<std::vector<double>> c = start;
  if (!c && family.terminal) {
    c = family.terminal->col(0);
  }
  ProductTrajectory t;
  if (c && !start) {
    // The family's own terminal vector may have zero entries.
    t = run_product(factors, std::nullopt, opts);
    t.start = *c;
    for (std::size_t n = 1; n <= depth; ++n) {
      auto& s = t.steps[n - 1];
      s.image = mat_vec(s.product.unit, t.start);
      double norm = vec_norm1(s.image);
      if (norm == 0.0) throw Error(ErrorCode::kZeroImage, at_step("P_n c = 0", n));
      for (auto& x : s.image) x /= norm;
    }
  } else {
    t = run_product(factors, c, opts);
  }
  t.symbols = std::move(w);
  return t;
}

QMat exact_product(const std::vector<QMat>& mats, const Word& w) {
  if (mats.empty()) throw Error(ErrorCode::kInvalidArgument, "no matrices");
  QMat p = QMat::identity(mats[0].rows());
  for (int x : w) {
    if (x < 0 || static_cast<std::size_t>(x) >= mats.size())
      throw Error(ErrorCode::kInvalidArgument, "symbol outside alphabet");
    p = p * mats[x];
  }
  return p;
}

std::string trajectory_csv(const ProductTrajectory& t) {
  std::ostringstream os;
  std::size_t d = t.order;
  os << "n,log_norm,det_normalized";
  for (std::size_t i = 1; i <= d; ++i) os << ",delta" << i;
  if (t.has_image())
    for (std::size_t i = 1; i <= d; ++i) os << ",c" << i;
  os << "\n";
  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    os << buf;
  };
  for (std::size_t n = 1; n <= t.depth(); ++n) {
    const auto& s = t.at(n);
    os << n;
    put(s.product.norm_log());
    put(s.det_normalized);
    for (std::size_t i = 0; i < d; ++i) put(i < s.singular.size() ? s.singular[i] : 0.0);
    for (double x : s.image) put(x);
    os << "\n";
  }
  return os.str();
}

const char* rank_verdict_name(RankVerdict v) {
  switch (v) {
    case RankVerdict::kRankOneCollapse: return "rank-one-collapse";
    case RankVerdict::kPersistentRank2: return "persistent-rank>=2";
    case RankVerdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

RankOneReport rank_one_diagnostic(const ProductTrajectory& t,
                                  const RankOneOptions& opts) {
  if (t.depth() == 0) throw Error(ErrorCode::kInvalidArgument, "empty trajectory");
  RankOneReport r;
  for (const auto& s : t.steps) {
    if (s.singular.empty())
      throw Error(ErrorCode::kInvalidArgument, "trajectory lacks singular values");
    double ratio = s.singular.size() < 2 || s.singular[0] == 0.0
                       ? 0.0
                       : s.singular[1] / s.singular[0];
    r.ratio_series.push_back(ratio);
    r.det_series.push_back(s.det_normalized);
  }
  std::vector<std::size_t> idx;
  if (!opts.checkpoints.empty()) {
    for (auto n : opts.checkpoints) {
      if (n == 0 || n > t.depth())
        throw Error(ErrorCode::kBadCheckpoints, "checkpoint outside trajectory");
      idx.push_back(n - 1);
    }
  } else {
    std::size_t w = window_size(t.depth(), opts.window, 1);
    for (std::size_t k = t.depth() - w; k < t.depth(); ++k) idx.push_back(k);
  }
  r.window_min = r.window_max = r.ratio_series[idx[0]];
  for (auto k : idx) {
    r.window_min = std::min(r.window_min, r.ratio_series[k]);
    r.window_max = std::max(r.window_max, r.ratio_series[k]);
  }
  if (r.window_max < opts.tol_collapse)
    r.verdict = RankVerdict::kRankOneCollapse;
  else if (r.window_min > opts.floor_persist)
    r.verdict = RankVerdict::kPersistentRank2;
  return r;
}

LimitImage image_window_gap(const ProductTrajectory& t, double tol,
                            double window) {
  if (!t.has_image())
    throw Error(ErrorCode::kInvalidArgument, "trajectory carries no image vectors");
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  std::size_t depth = t.depth();
  std::size_t w = window_size(depth, window, 2);
  LimitImage out;
  out.vector = t.steps.back().image;
  double gap = 0.0;
  for (std::size_t a = depth - w; a < depth; ++a)
    for (std::size_t b = a + 1; b < depth; ++b)
      gap = std::max(gap, dist1(t.steps[a].image, t.steps[b].image));
  out.cauchy_gap = gap;
  out.converged = gap < tol;
  out.achieved_at = depth;
  for (std::size_t k = depth; k-- > 0;) {
    if (dist1(t.steps[k].image, out.vector) >= tol / 2) break;
    out.achieved_at = k + 1;
  }
  return out;
}

LimitImage limit_image(const ProductTrajectory& t, double tol, double window) {
  LimitImage out = image_window_gap(t, tol, window);
  if (!out.converged) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "image not converged at depth %zu (gap %.3g)",
                  t.depth(), out.cauchy_gap);
    throw Error(ErrorCode::kNotConverged, buf);
  }
  return out;
}

std::vector<double> uniform_convergence_probe(const MatrixFamily& family,
                                              const Word& prefix,
                                              const UniformProbeOptions& opts) {
  family.validate();
  if (!family.terminal)
    throw Error(ErrorCode::kInvalidArgument, "probe needs a terminal vector");
  auto c = validated_start(family.terminal->col(0), family.order());
  if (prefix.empty() || opts.depth <= prefix.size())
    throw Error(ErrorCode::kInvalidArgument, "depth must exceed the prefix length");
  for (int x : prefix)
    if (x < 0 || static_cast<std::size_t>(x) >= family.alphabet())
      throw Error(ErrorCode::kInvalidArgument, "prefix symbol outside alphabet");
  if (opts.extension_samples == 0)
    throw Error(ErrorCode::kInvalidArgument, "need at least one extension sample");
  std::size_t a = family.alphabet();
  std::size_t ext_len = opts.depth - prefix.size();
  std::size_t e = std::min(opts.exhaust_len, ext_len);
  std::size_t exhaustive = 1;
  for (std::size_t i = 0; i < e && exhaustive <= opts.extension_samples; ++i)
    exhaustive *= a;
  std::vector<double> profile(prefix.size(), 0.0);
  for (std::size_t s = 0; s < opts.extension_samples; ++s) {
    Word w = prefix;
    CounterRng rng(opts.seed, s);
    std::size_t k0 = 0;
    if (s < exhaustive) {
      std::size_t code = s;
      for (std::size_t i = 0; i < e; ++i, ++k0) {
        w.push_back(static_cast<int>(code % a));
        code /= a;
      }
    }
    for (std::size_t k = k0; k < ext_len; ++k)
      w.push_back(static_cast<int>(rng.below(a)));
    auto gaps = suffix_gaps(fast_images(family, w, c));
    for (std::size_t n = 1; n <= prefix.size(); ++n)
      profile[n - 1] = std::max(profile[n - 1], gaps[n - 1]);
  }
  return profile;
}

std::vector<double> uniform_convergence_sweep(const MatrixFamily& family,
                                              std::size_t prefixes,
                                              std::size_t prefix_len,
                                              const UniformProbeOptions& opts) {
  if (prefixes == 0 || prefix_len == 0)
    throw Error(ErrorCode::kInvalidArgument, "need at least one nonempty prefix");
  std::vector<double> profile(prefix_len, 0.0);
  std::size_t a = family.alphabet();
  for (std::size_t j = 0; j < prefixes; ++j) {
    CounterRng rng(opts.seed ^ 0x5bd1e995ULL, j);
    Word prefix(prefix_len);
    for (auto& x : prefix) x = static_cast<int>(rng.below(a));
    UniformProbeOptions o = opts;
    o.seed = mix64(opts.seed + j);
    auto p = uniform_convergence_probe(family, prefix, o);
    for (std::size_t n = 0; n < prefix_len; ++n) profile[n] = std::max(profile[n], p[n]);
  }
  return profile;
}

Theorem15Report theorem15_check(const ProductTrajectory& t,
                                const std::vector<std::size_t>& checkpoints,
                                const Theorem15Options& opts) {
  if (checkpoints.size() < 3)
    throw Error(ErrorCode::kBadCheckpoints, "need at least three checkpoints");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (checkpoints[k] > t.depth())
      throw Error(ErrorCode::kBadCheckpoints, "checkpoint beyond depth");
    if (k && checkpoints[k] <= checkpoints[k - 1])
      throw Error(ErrorCode::kBadCheckpoints, "checkpoints must increase");
  }
  std::size_t d = t.order;
  auto log_norm_P = [&](std::size_t n) {
    return n == 0 ? std::log(static_cast<double>(d)) : t.at(n).product.norm_log();
  };
  Theorem15Report r;
  r.h1_min = INFINITY;
  for (std::size_t k = 0; k + 2 < checkpoints.size(); ++k) {
    std::size_t nk = checkpoints[k];
    ScaledMat w = ScaledMat::identity(d);
    for (std::size_t n = nk + 1; n < checkpoints[k + 2]; ++n) {
      w = scaled_multiply(w, t.factors[n - 1]);
      if (n < checkpoints[k + 1]) continue;
      double v = std::exp(log_norm_P(n) - log_norm_P(nk) - w.norm_log());
      if (v < r.h1_min) {
        r.h1_min = v;
        r.h1_argmin = n;
      }
    }
  }
  for (std::size_t k = 0; k + 1 < checkpoints.size(); ++k) {
    ScaledMat w = ScaledMat::identity(d);
    for (std::size_t n = checkpoints[k] + 1; n <= checkpoints[k + 1]; ++n)
      w = scaled_multiply(w, t.factors[n - 1]);
    const Mat& u = w.unit;
    auto zero = [&](double x) { return std::fabs(x) <= opts.pattern_tol; };
    auto big = [&](double x) { return std::fabs(x) > opts.pattern_floor; };
    bool found = false;
    for (std::size_t i = 0; i < d && !found; ++i)
      for (std::size_t ip = i + 1; ip < d && !found; ++ip)
        for (std::size_t j = 0; j < d && !found; ++j)
          for (std::size_t jp = j + 1; jp < d && !found; ++jp) {
            if (big(u(i, j)) && big(u(ip, jp)) && zero(u(i, jp)) && zero(u(ip, j))) {
              r.h2_violations.push_back({k, i, ip, j, jp, false});
              found = true;
            } else if (big(u(i, jp)) && big(u(ip, j)) && zero(u(i, j)) &&
                       zero(u(ip, jp))) {
              r.h2_violations.push_back({k, i, ip, j, jp, true});
              found = true;
            }
          }
  }
  for (const auto& v : opts.test_vectors) {
    if (v.size() != d)
      throw Error(ErrorCode::kInvalidArgument, "test vector has wrong length");
    double inf = INFINITY;
    for (const auto& s : t.steps) inf = std::min(inf, vec_norm1(mat_vec(s.product.unit, v)));
    r.v_membership.push_back(inf);
  }
  return r;
}

const char* divergence_verdict_name(DivergenceVerdict v) {
  return v == DivergenceVerdict::kDiverges ? "diverges" : "inconclusive";
}

DivergenceReport divergence_detector(const std::vector<Mat>& factors,
                                     const DivergenceOptions& opts) {
  TrajectoryOptions topts;
  topts.singular_values = false;
  ProductTrajectory t = run_product(factors, std::nullopt, topts);
  std::size_t d = t.order;
  std::size_t depth = t.depth();
  DivergenceReport r;
  for (std::size_t n = 1; n <= depth; ++n) {
    Mat b = factors[n - 1] / entry_norm(factors[n - 1]);
    bool placed = false;
    for (auto& c : r.clusters) {
      if (mat_dist(c.centroid, b) < opts.radius) {
        double k = static_cast<double>(c.count);
        c.centroid = (c.centroid * k + b) / (k + 1.0);
        ++c.count;
        c.last_index = n;
        placed = true;
        break;
      }
    }
    if (!placed) r.clusters.push_back({b, 1, n});
    if (n >= 2) {
      const Mat& prev = t.at(n - 1).product.unit;
      std::size_t best = 0;
      double best_norm = -1.0;
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += std::fabs(prev(i, j));
        if (s > best_norm) {
          best_norm = s;
          best = i;
        }
      }
      double lam = t.at(n).lambda;
      double res = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double x = -lam * prev(best, j);
        for (std::size_t i = 0; i < d; ++i) x += prev(best, i) * b(i, j);
        res += std::fabs(x);
      }
      r.residual_series.push_back(res / best_norm);
    }
  }
  std::size_t tail = depth - window_size(depth, opts.window, 1);
  std::vector<Mat> points;
  for (std::size_t i = 0; i < r.clusters.size(); ++i)
    if (r.clusters[i].count >= 2 && r.clusters[i].last_index > tail) {
      r.limit_points.push_back(i);
      points.push_back(r.clusters[i].centroid);
    }
  if (points.size() >= 2) {
    r.common = common_left_eigenvector(points, opts.eigen_tol);
    for (std::size_t a = 0; a < points.size(); ++a)
      for (std::size_t b = a + 1; b < points.size(); ++b)
        if (common_left_eigenvector({points[a], points[b]}, opts.eigen_tol).exists)
          r.pairs_sharing.emplace_back(r.limit_points[a], r.limit_points[b]);
    if (!r.common.exists) r.verdict = DivergenceVerdict::kDiverges;
  }
  return r;
}

DivergenceReport divergence_detector(const MatrixFamily& family,
                                     const SymbolSequence& seq,
                                     std::size_t depth,
                                     const DivergenceOptions& opts) {
  family.validate();
  if (depth == 0) throw Error(ErrorCode::kInvalidArgument, "depth must be at least 1");
  std::vector<Mat> factors;
  for (int x : seq.take(depth)) {
    if (static_cast<std::size_t>(x) >= family.alphabet())
      throw Error(ErrorCode::kInvalidArgument, "symbol outside alphabet");
    factors.push_back(family.matrices[x]);
  }
  return divergence_detector(factors, opts);
}

MonteCarloReport monte_carlo_divergence(std::size_t d, std::size_t trials,
                                        std::size_t depth, std::uint64_t seed,
                                        const MonteCarloOptions& opts) {
  if (d < 2)
    throw Error(ErrorCode::kDimensionTooSmall,
                "d = 1 is excluded: the normalized 1x1 product is a pure phase");
  if (d > 8) throw Error(ErrorCode::kInvalidArgument, "d must be at most 8");
  if (trials == 0 || trials > 10000)
    throw Error(ErrorCode::kInvalidArgument, "trials must be in 1..10000");
  if (depth < 2) throw Error(ErrorCode::kInvalidArgument, "depth must be at least 2");
  using CM = Eigen::MatrixXcd;
  auto norm1 = [](const CM& m) { return m.cwiseAbs().sum(); };
  std::size_t w = window_size(depth, opts.window, 2);
  MonteCarloReport r;
  r.trials = trials;
  const double sd = std::sqrt(0.5);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, trial);
    CM p = CM::Identity(d, d);
    std::vector<CM> tail;
    tail.reserve(w);
    for (std::size_t n = 1; n <= depth; ++n) {
      CM a(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          double re = sd * rng.normal();
          double im = sd * rng.normal();
          a(i, j) = cplx(re, im);
        }
      p = p * a;
      double s = norm1(p);
      if (s == 0.0 || !std::isfinite(s))
        throw Error(ErrorCode::kProductVanished, at_step("P_n = 0", n));
      p /= s;
      if (n > depth - w) tail.push_back(p);
    }
    double osc = 0.0;
    for (const auto& m : tail) osc = std::max(osc, norm1(m - tail.back()));
    r.oscillation.push_back(osc);
    if (osc > opts.osc_floor) ++r.diverging;
  }
  r.fraction = static_cast<double>(r.diverging) / static_cast<double>(trials);
  return r;
}

Stochastic2x2Report stochastic2x2_series(const std::vector<Mat>& factors,
                                         std::size_t depth) {
  if (factors.empty() || depth == 0)
    throw Error(ErrorCode::kInvalidArgument, "need factors and depth >= 1");
  for (const auto& s : factors) {
    if (s.rows() != 2 || s.cols() != 2)
      throw Error(ErrorCode::kNotStochastic, "factor is not 2x2");
    for (double x : s.data())
      if (!(x > 0.0 && x < 1.0))
        throw Error(ErrorCode::kNotStochastic, "entries must lie in (0,1)");
    for (std::size_t i = 0; i < 2; ++i)
      if (std::fabs(s(i, 0) + s(i, 1) - 1.0) > 1e-12)
        throw Error(ErrorCode::kNotStochastic, "rows must sum to 1");
  }
  Stochastic2x2Report r;
  double det_prod = 1.0;
  Mat left = Mat::identity(2);
  for (std::size_t n = 1; n <= depth; ++n) {
    const Mat& s = factors[(n - 1) % factors.size()];
    r.series_value += s(1, 0) * det_prod;
    det_prod *= s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    left = s * left;
  }
  r.direct_entry = left(1, 0);
  r.gap = std::fabs(r.series_value - r.direct_entry);
  return r;
}

}  // namespace matprod
