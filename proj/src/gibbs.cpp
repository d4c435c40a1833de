// gibbs.cpp
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

#include "matprod/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "matprod/error.hpp"

namespace matprod {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(r_{w_0} M_{w_1} ... M_{w_{n-1}} c), -inf for a null cylinder.
double log_measure(const MatrixFamily& f, const Word& w, std::size_t n) {
  if (n == 0) return 0.0;
  Mat v = f.row_vectors[w[0]];
  double log_scale = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    v = v * f.matrices[w[i]];
    double s = entry_norm(v);
    if (s == 0.0) return kNegInf;
    v = v / s;
    log_scale += std::log(s);
  }
  double x = (v * *f.terminal)(0, 0);
  return x > 0.0 ? log_scale + std::log(x) : kNegInf;
}

// M_{w_begin} ... M_{w_{end-1}} c normalized; throws on a vanishing image.
Mat image(const MatrixFamily& f, const Word& w, std::size_t begin, std::size_t end) {
  Mat v = *f.terminal;
  for (std::size_t i = end; i > begin; --i) {
    v = f.matrices[w[i - 1]] * v;
    double s = entry_norm(v);
    if (s == 0.0) throw Error(ErrorCode::kZeroImage, "tail image vanished");
    v = v / s;
  }
  return v;
}

void require_complete(const MatrixFamily& f) {
  f.validate();
  if (!f.terminal || f.row_vectors.size() != f.alphabet())
    throw Error(ErrorCode::kInvalidArgument, "family needs row vectors and a terminal vector");
}

void check_symbols(const MatrixFamily& f, const Word& w) {
  for (int x : w)
    if (x < 0 || static_cast<std::size_t>(x) >= f.alphabet())
      throw Error(ErrorCode::kInvalidArgument, "word symbol outside alphabet");
}

}  // namespace

MatrixFamily gibbs_family(const BernoulliSpec& spec, int h) {
  if (h < 0 || h > spec.q) throw Error(ErrorCode::kInvalidArgument, "translate out of range");
  MatrixFamily f = spec.family();
  mpq_class ch = spec.c(h, 0);
  for (const auto& m : spec.matrices) {
    QMat row(1, spec.order());
    for (std::size_t j = 0; j < spec.order(); ++j) row(0, j) = m(h, j) / ch;
    f.row_vectors.push_back(to_float(row));
  }
  return f;
}

GibbsReport potential_and_ratio(const MatrixFamily& family, const Word& w,
                                const GibbsOptions& opts) {
  require_complete(family);
  check_symbols(family, w);
  if (opts.n_min < 1 || opts.n_max < opts.n_min || opts.tail_depth < 2)
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= n_min <= n_max and tail_depth >= 2");
  if (w.size() < opts.n_max + opts.tail_depth)
    throw Error(ErrorCode::kInvalidArgument, "word shorter than n_max + tail_depth");
  GibbsReport r;
  auto phi = [&](std::size_t k, std::size_t tail) {
    Mat v = family.matrices[w[k]] * image(family, w, k + 1, k + 1 + tail);
    double s = entry_norm(v);
    if (s < 1e-12)
      throw Error(ErrorCode::kZeroImage, "M_i c_w vanishes at shift " + std::to_string(k));
    return std::log(s);
  };
  for (std::size_t k = 0; k < opts.n_max; ++k) {
    double full = phi(k, opts.tail_depth);
    r.potential.push_back(full);
    r.potential_oscillation =
        std::max(r.potential_oscillation, std::fabs(full - phi(k, opts.tail_depth / 2)));
  }
  double sum = 0.0;
  for (std::size_t n = 1; n <= opts.n_max; ++n) {
    sum += r.potential[n - 1];
    double lm = log_measure(family, w, n);
    double root = lm == kNegInf ? 0.0 : std::exp((lm - sum) / static_cast<double>(n));
    r.ratio_root.push_back(root);
    if (n >= opts.n_min) r.sup_deviation = std::max(r.sup_deviation, std::fabs(root - 1.0));
  }
  return r;
}

TheoremB3Report theoremB3_check(const MatrixFamily& family,
                                const std::vector<Word>& samples,
                                std::size_t depth, const TheoremB3Options& opts) {
  require_complete(family);
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "need sample words");
  if (depth < 4) throw Error(ErrorCode::kInvalidArgument, "depth must be at least 4");
  TheoremB3Report r;
  r.cond3_min_image = std::numeric_limits<double>::infinity();
  UniformProbeOptions probe = opts.probe;
  probe.depth = depth;
  std::size_t half = depth / 2;
  double inv = 1.0 / static_cast<double>(depth);
  for (const Word& w : samples) {
    check_symbols(family, w);
    if (w.size() < depth) throw Error(ErrorCode::kInvalidArgument, "sample shorter than depth");
    Word prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(half));
    auto profile = uniform_convergence_probe(family, prefix, probe);
    r.cond1_sup_gap = std::max(r.cond1_sup_gap, profile.back());
    Mat c = image(family, w, 0, depth);
    for (std::size_t i = 0; i < family.alphabet(); ++i) {
      double rc = (family.row_vectors[i] * c)(0, 0);
      double root = rc > 0.0 ? std::pow(rc, inv) : 0.0;
      r.cond2_root_gap = std::max(r.cond2_root_gap, std::fabs(root - 1.0));
      r.cond3_min_image = std::min(r.cond3_min_image, entry_norm(family.matrices[i] * c));
    }
  }
  r.cond1 = r.cond1_sup_gap < opts.tol;
  r.cond2 = r.cond2_root_gap < opts.tol;
  r.cond3 = r.cond3_min_image > opts.floor;
  r.verdict = r.cond1 && r.cond2 && r.cond3;
  return r;
}

Condition24Series condition24_probe(const BernoulliSpec& spec, std::size_t n_max, int h) {
  if (spec.r + 1 > spec.base - 1)
    throw Error(ErrorCode::kInvalidArgument, "probe needs r + 1 <= k - 1");
  if (n_max < 1) throw Error(ErrorCode::kInvalidArgument, "n_max must be positive");
  MatrixFamily f = gibbs_family(spec, h);
  Condition24Series s;
  for (std::size_t n = 1; n <= n_max; ++n) {
    Word a(n, spec.r), b(n, spec.r + 1), ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    double joint = log_measure(f, ab, ab.size());
    double la = log_measure(f, a, n), lb = log_measure(f, b, n);
    double g = (joint == kNegInf || la == kNegInf || lb == kNegInf)
                   ? 0.0
                   : std::exp((joint - la - lb) / static_cast<double>(n));
    s.g.push_back(g);
  }
  std::size_t m = s.g.size();
  if (m >= 3) {
    double d1 = s.g[m - 1] - s.g[m - 2], d0 = s.g[m - 2] - s.g[m - 3];
    s.rate = d0 != 0.0 ? std::fabs(d1 / d0) : 0.0;
  }
  if (m >= 2 && s.g[m - 1] > 0.0 && s.g[m - 2] > 0.0) {
    double n = static_cast<double>(m);
    s.limit_estimate = std::exp(n * std::log(s.g[m - 1]) - (n - 1) * std::log(s.g[m - 2]));
  } else {
    s.limit_estimate = s.g.back();
  }
  return s;
}

ScaleSpectrum scale_spectrum_and_legendre(const MatrixFamily& family,
                                          const std::vector<double>& q_grid,
                                          std::size_t level,
                                          const std::vector<double>& alpha_grid) {
  require_complete(family);
  if (q_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty q grid");
  std::size_t b = family.alphabet();
  if (level < 1 || level > 18 || b < 2 ||
      std::pow(static_cast<double>(b), static_cast<double>(level)) > double(1 << 24))
    throw Error(ErrorCode::kInvalidArgument, "level too deep for cylinder enumeration");

  // Depth-first over cylinders in lexicographic order; log measures.
  std::vector<double> logs;
  std::vector<Mat> stack(level);
  std::vector<double> scale(level, 0.0);
  // Iterative DFS: next[i] is the next symbol to try at position i.
  std::vector<std::size_t> next(level, 0);
  std::size_t pos = 0;
  while (true) {
    if (next[pos] == b) {
      if (pos == 0) break;
      --pos;
      continue;
    }
    std::size_t sym = next[pos]++;
    Mat v = pos == 0 ? family.row_vectors[sym] : stack[pos - 1] * family.matrices[sym];
    double s = entry_norm(v);
    double ls = (pos == 0 ? 0.0 : scale[pos - 1]);
    if (s == 0.0) continue;  // null cylinder and all its children
    stack[pos] = v / s;
    scale[pos] = ls + std::log(s);
    if (pos + 1 == level) {
      double x = (stack[pos] * *family.terminal)(0, 0);
      if (x > 0.0) logs.push_back(scale[pos] + std::log(x));
    } else {
      ++pos;
      next[pos] = 0;
    }
  }
  ScaleSpectrum out;
  out.cylinders = logs.size();
  double log_diam = -static_cast<double>(level) * std::log(static_cast<double>(b));
  for (double q : q_grid) {
    // log-sum-exp in index order
    double top = kNegInf;
    for (double l : logs) top = std::max(top, q * l);
    double acc = 0.0;
    for (double l : logs) acc += std::exp(q * l - top);
    out.q.push_back(q);
    out.tau.push_back((top + std::log(acc)) / log_diam);
  }
  for (double a : alpha_grid) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.q.size(); ++i) best = std::min(best, a * out.q[i] - out.tau[i]);
    out.alpha.push_back(a);
    out.legendre.push_back(best);
  }
  return out;
}

ScaleSpectrum scale_spectrum_and_legendre(const BernoulliSpec& spec,
                                          const std::vector<double>& q_grid,
                                          std::size_t level,
                                          const std::vector<double>& alpha_grid, int h) {
  return scale_spectrum_and_legendre(gibbs_family(spec, h), q_grid, level, alpha_grid);
}

std::vector<double> parse_grid(const std::string& text) {
  auto bad = [&] { return Error(ErrorCode::kInvalidArgument, "grid must be lo:hi:step, got " + text); };
  auto a = text.find(':');
  auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw bad();
  double lo, hi, step;
  try {
    lo = std::stod(text.substr(0, a));
    hi = std::stod(text.substr(a + 1, b - a - 1));
    step = std::stod(text.substr(b + 1));
  } catch (const std::exception&) {
    throw bad();
  }
  if (!(step > 0.0) || hi < lo || (hi - lo) / step > 1e6) throw bad();
  std::vector<double> g;
  auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) g.push_back(lo + step * static_cast<double>(i));
  return g;
}

}  // namespace matprod
