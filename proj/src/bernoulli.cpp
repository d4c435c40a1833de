// bernoulli.cpp
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

#include "matprod/bernoulli.hpp"

#include <algorithm>
#include <cmath>

#include "matprod/error.hpp"
#include "matprod/rng.hpp"

namespace matprod {

namespace {

QMat letter(const std::array<const char*, 7>& rows) {
  QMat m(7, 7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) m(i, j) = rows[i][j] == '1' ? 1 : 0;
  return m;
}

void check_word(const Word& w, int alphabet) {
  for (int x : w)
    if (x < 0 || x >= alphabet)
      throw Error(ErrorCode::kInvalidArgument, "symbol outside alphabet");
}

double scaled_row_times(const std::vector<Mat>& mats, const Word& w,
                        std::size_t row, const std::vector<double>& c) {
  std::size_t d = c.size();
  ScaledMat acc = ScaledMat::identity(d);
  for (int x : w) acc = scaled_multiply(acc, mats[x]);
  double v = 0.0;
  for (std::size_t j = 0; j < d; ++j) v += acc.unit(row, j) * c[j];
  return v * std::exp(acc.log_scale);
}

}  // namespace

std::vector<Mat> BernoulliSpec::float_matrices() const {
  std::vector<Mat> out;
  for (const auto& m : matrices) out.push_back(to_float(m));
  return out;
}

MatrixFamily BernoulliSpec::family() const {
  MatrixFamily f;
  f.matrices = float_matrices();
  f.terminal = to_float(c);
  return f;
}

BernoulliSpec build_representation(int k, std::vector<mpq_class> p) {
  for (auto& x : p) x.canonicalize();
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "base must be at least 2");
  if (p.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "need at least two probabilities");
  mpq_class total = 0;
  for (const auto& x : p) {
    if (sgn(x) <= 0) throw Error(ErrorCode::kInvalidArgument, "probabilities must be positive");
    total += x;
  }
  if (total != 1) throw Error(ErrorCode::kInvalidArgument, "probabilities must sum to 1");
  BernoulliSpec s;
  s.base = k;
  s.p = p;
  s.N = static_cast<int>(p.size()) - 1;
  if (s.N < k - 1)
    throw Error(ErrorCode::kInvalidArgument, "need N >= k (or N = k - 1)");
  s.q = (s.N + k - 2) / (k - 1) - 1;
  s.r = s.N - (k - 1) * s.q;
  if (s.q + 1 > static_cast<int>(kMaxDim))
    throw Error(ErrorCode::kInvalidArgument, "matrix order exceeds 32");
  std::size_t d = s.order();
  auto pn = [&](int n) { return n < 0 || n > s.N ? mpq_class(0) : p[n]; };
  QMat sum(d, d);
  for (int i = 0; i < k; ++i) {
    QMat m(d, d);
    for (std::size_t h = 0; h < d; ++h)
      for (std::size_t j = 0; j < d; ++j)
        m(h, j) = pn(i + k * static_cast<int>(h) - static_cast<int>(j));
    sum += m;
    s.matrices.push_back(std::move(m));
  }
  if (s.q > 0) {
    std::size_t b = d - 1;
    for (int i = 0; i < k; ++i) {
      const QMat& m = s.matrices[i];
      QMat blk(b, b), v(b, 1);
      std::size_t off = i == 0 ? 1 : 0;
      for (std::size_t a = 0; a < b; ++a) {
        for (std::size_t j = 0; j < b; ++j) blk(a, j) = m(a + off, j + off);
        v(a, 0) = i == 0 ? m(a + 1, 0) : m(a, b);
      }
      s.blocks.push_back(std::move(blk));
      s.block_vectors.push_back(std::move(v));
    }
    s.rho_r = spectral_radius(to_float(s.blocks[s.r]));
  }
  // Fixed vector of sum_i M_i with total mass 1: replace the last equation of
  // (S - I) c = 0 by the normalization.
  QMat a = sum - QMat::identity(d);
  QMat rhs(d, 1);
  for (std::size_t j = 0; j < d; ++j) a(d - 1, j) = 1;
  rhs(d - 1, 0) = 1;
  auto c = solve(a, rhs);
  if (!c || sum * *c != *c || !c->nonnegative())
    throw Error(ErrorCode::kEigenvalueNotOne,
                "sum of the matrices has no nonnegative fixed vector");
  s.c = *c;
  s.divisible = s.N % (k - 1) == 0;
  s.condition_H = s.divisible || (s.q > 0 && p.back().get_d() <= s.rho_r + 1e-12);
  return s;
}

mpq_class cylinder_measure_exact(const BernoulliSpec& spec, const Word& w, int h) {
  if (h < 0 || h > spec.q) throw Error(ErrorCode::kInvalidArgument, "translate out of range");
  check_word(w, spec.base);
  QMat v = exact_product(spec.matrices, w) * spec.c;
  return v(h, 0);
}

double cylinder_measure(const BernoulliSpec& spec, const Word& w, int h) {
  if (h < 0 || h > spec.q) throw Error(ErrorCode::kInvalidArgument, "translate out of range");
  check_word(w, spec.base);
  return scaled_row_times(spec.float_matrices(), w, h, to_float(spec.c).col(0));
}

std::pair<mpq_class, mpq_class> cylinder_interval(int k, const Word& w, int h) {
  check_word(w, k);
  mpq_class lo = h, step = 1;
  for (int x : w) {
    step /= k;
    lo += step * x;
  }
  return {lo, lo + step};
}

QMatrixFamily markov_representation(const QMat& P, const QMat& pi) {
  std::size_t a = P.rows();
  if (a == 0 || !P.square() || a > kMaxDim)
    throw Error(ErrorCode::kInvalidArgument, "transition matrix must be square, order 1..32");
  if (pi.data().size() != a)
    throw Error(ErrorCode::kInvalidArgument, "initial law has wrong length");
  if (!P.nonnegative() || !pi.nonnegative())
    throw Error(ErrorCode::kNotStochastic, "negative probability");
  for (std::size_t i = 0; i < a; ++i) {
    mpq_class s = 0;
    for (std::size_t j = 0; j < a; ++j) s += P(i, j);
    if (s != 1) throw Error(ErrorCode::kNotStochastic, "row does not sum to 1");
  }
  mpq_class s = 0;
  for (const auto& x : pi.data()) s += x;
  if (s != 1) throw Error(ErrorCode::kNotStochastic, "initial law does not sum to 1");
  QMatrixFamily f;
  for (std::size_t k = 0; k < a; ++k) {
    QMat r(1, a), m(a, a);
    r(0, k) = pi.data()[k];
    for (std::size_t i = 0; i < a; ++i) m(i, k) = P(i, k);
    f.row_vectors.push_back(std::move(r));
    f.matrices.push_back(std::move(m));
  }
  f.terminal = QMat(a, 1, mpq_class(1));
  return f;
}

mpq_class representation_measure(const QMatrixFamily& f, const Word& w) {
  if (w.empty()) return 1;
  if (f.row_vectors.size() != f.matrices.size() || !f.terminal)
    throw Error(ErrorCode::kInvalidArgument, "family lacks row vectors or terminal vector");
  check_word(w, static_cast<int>(f.matrices.size()));
  QMat v = f.row_vectors[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) v = v * f.matrices[w[i]];
  return (v * *f.terminal)(0, 0);
}

double representation_measure(const MatrixFamily& f, const Word& w) {
  if (w.empty()) return 1.0;
  if (f.row_vectors.size() != f.matrices.size() || !f.terminal)
    throw Error(ErrorCode::kInvalidArgument, "family lacks row vectors or terminal vector");
  check_word(w, static_cast<int>(f.matrices.size()));
  Mat v = f.row_vectors[w[0]];
  double log_scale = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    v = v * f.matrices[w[i]];
    double n = entry_norm(v);
    if (n == 0.0) return 0.0;
    v = v / n;
    log_scale += std::log(n);
  }
  return (v * *f.terminal)(0, 0) * std::exp(log_scale);
}

double beta_root() {
  auto f = [](double b) { return ((b - 2.0) * b + 1.0) * b - 1.0; };
  double lo = 1.7, hi = 1.8;
  if (!(f(lo) < 0.0 && f(hi) > 0.0))
    throw Error(ErrorCode::kInternal, "bisection bracket lost its sign change");
  while (hi - lo > 1e-15) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const std::vector<QMat>& beta_letter_matrices() {
  static const std::vector<QMat> letters = {
      letter({"1000000", "0010000", "0001100", "0000000", "1000001", "0000100",
              "0100000"}),
      letter({"0011000", "0000010", "0001100", "1000000", "0010000", "0000000",
              "0000000"}),
      // Row 6 is zero: the translate (b+1)/b^2 has no successor under the
      // digit word 1100.
      letter({"1000101", "0000000", "1000001", "0001100", "0000100", "0000000",
              "0000000"}),
  };
  return letters;
}

MatrixFamily BetaSpec::family() const {
  MatrixFamily f;
  for (const auto& m : matrices) f.matrices.push_back(to_float(m));
  f.terminal = to_float(c);
  const std::array<std::pair<std::size_t, double>, 3> sel = {
      std::pair<std::size_t, double>{0, 1.0}, {2, 0.5}, {4, 0.125}};
  for (const auto& [slot, scale] : sel) {
    Mat r(1, 7);
    r(0, slot) = scale;
    f.row_vectors.push_back(r);
  }
  return f;
}

const BetaSpec& beta_representation() {
  static const BetaSpec spec = [] {
    BetaSpec s;
    s.beta = beta_root();
    s.words = {Word{0}, Word{1, 0}, Word{1, 1, 0, 0}};
    s.letters = beta_letter_matrices();
    const mpq_class scale[3] = {mpq_class(1, 2), mpq_class(1, 4), mpq_class(1, 16)};
    for (int i = 0; i < 3; ++i) s.matrices.push_back(s.letters[i] * scale[i]);
    s.c = QMat::column({12, 8, 13, 4, 12, 6, 4}) / mpq_class(20);
    double b = s.beta;
    s.translates = {0.0, b - 1.0, 1.0 / (b * b), (1.0 - b) / b, 1.0 / b,
                    (b + 1.0) / (b * b), 1.0};
    QMat sum = s.matrices[0] + s.matrices[1] + s.matrices[2];
    if (sum * s.c != s.c)
      throw Error(ErrorCode::kInternal, "beta representation lost its fixed vector");
    return s;
  }();
  return spec;
}

mpq_class beta_cylinder_measure_exact(const Word& w) {
  check_word(w, 3);
  if (w.empty()) return 1;
  const BetaSpec& s = beta_representation();
  Word rest(w.begin() + 1, w.end());
  QMat v = exact_product(s.matrices, rest) * s.c;
  switch (w[0]) {
    case 0: return v(0, 0);
    case 1: return v(2, 0) / 2;
    default: return v(4, 0) / 8;
  }
}

double beta_cylinder_measure(const Word& w) {
  check_word(w, 3);
  if (w.empty()) return 1.0;
  const BetaSpec& s = beta_representation();
  std::vector<Mat> mats;
  for (const auto& m : s.matrices) mats.push_back(to_float(m));
  Word rest(w.begin() + 1, w.end());
  static const std::size_t rows[3] = {0, 2, 4};
  static const double scale[3] = {1.0, 0.5, 0.125};
  return scale[w[0]] * scaled_row_times(mats, rest, rows[w[0]], to_float(s.c).col(0));
}

Word substitute_word(const Word& w) {
  check_word(w, 3);
  const BetaSpec& s = beta_representation();
  Word out;
  for (int x : w) out.insert(out.end(), s.words[x].begin(), s.words[x].end());
  return out;
}

std::pair<double, double> beta_interval(const Word& w) {
  Word e = substitute_word(w);
  double b = beta_representation().beta;
  double lo = 0.0, step = 1.0;
  for (int x : e) {
    step /= b;
    lo += x * step;
  }
  return {lo, lo + step};
}

WordPositivityReport word_positivity(const BernoulliSpec& spec, const Word& w) {
  check_word(w, spec.base);
  if (static_cast<int>(w.size()) < spec.q || w.empty())
    throw Error(ErrorCode::kWordTooShort, "word shorter than the matrix order minus one");
  std::size_t d = spec.order();
  WordPositivityReport r;
  QMat m = exact_product(spec.matrices, w);
  for (std::size_t i = 0; i < d; ++i) {
    bool pos = true;
    for (std::size_t j = 0; j < d; ++j) pos = pos && sgn(m(i, j)) > 0;
    r.row_positive.push_back(pos);
    if (i != 0 && i + 1 != d) r.interior_rows_positive = r.interior_rows_positive && pos;
  }
  r.first_row_positive = r.row_positive.front();
  r.last_row_positive = r.row_positive.back();
  r.first_row_predicted = w[0] != 0;
  r.last_row_predicted = w[0] < spec.r;
  r.claims_hold = r.interior_rows_positive &&
                  (!r.first_row_predicted || r.first_row_positive) &&
                  (!r.last_row_predicted || r.last_row_positive);

  // K over every word of length q+1.
  std::size_t len = static_cast<std::size_t>(spec.q) + 1;
  std::size_t count = 1;
  for (std::size_t i = 0; i < len; ++i) {
    count *= static_cast<std::size_t>(spec.base);
    if (count > 2000000)
      throw Error(ErrorCode::kInvalidArgument, "too many words to compute K");
  }
  r.K = 1;
  for (std::size_t code = 0; code < count; ++code) {
    Word u(len);
    std::size_t c = code;
    for (auto& x : u) {
      x = static_cast<int>(c % spec.base);
      c /= spec.base;
    }
    QMat mu = exact_product(spec.matrices, u);
    for (const auto& x : mu.data()) {
      if (is_zero(x)) continue;
      if (x > r.K) r.K = x;
      if (1 / x > r.K) r.K = 1 / x;
    }
  }

  if (w.size() == len) {
    r.sandwich_checked = true;
    int w1 = w[0];
    int w2 = w.size() > 1 ? w[1] : -1;
    r.sandwich_full_case = (w1 == 0 && w2 == spec.r) || (0 < w1 && w1 < spec.r);
    r.sandwich_rows_case = w1 != 0;
    mpq_class lo = 1 / r.K;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const mpq_class& x = m(i, j);
        if (x > r.K) r.sandwich_holds = false;
        bool need = r.sandwich_full_case || (r.sandwich_rows_case && i + 1 < d);
        if (need && x < lo) r.sandwich_holds = false;
      }
    r.claims_hold = r.claims_hold && r.sandwich_holds;
  }
  return r;
}

bool DigitDistribution::feasible(int k, std::size_t N, int T) {
  if (T < 1 || T > 24) return false;
  double bins = static_cast<double>(N) * (std::pow(k, T) - 1.0) / (k - 1) + 1.0;
  return bins <= static_cast<double>(1u << 24);
}

DigitDistribution::DigitDistribution(int k, const std::vector<double>& p, int T)
    : k_(k), T_(T), N_(p.size() - 1) {
  if (!feasible(k, N_, T))
    throw Error(ErrorCode::kInvalidArgument, "value grid too large for exhaustive mode");
  std::vector<double> dist{1.0};
  for (int t = 0; t < T; ++t) {
    std::vector<double> next(dist.size() * k + N_, 0.0);
    for (std::size_t y = 0; y < dist.size(); ++y) {
      if (dist[y] == 0.0) continue;
      for (std::size_t w = 0; w <= N_; ++w) next[y * k + w] += dist[y] * p[w];
    }
    dist.swap(next);
  }
  cdf_.assign(dist.size() + 1, 0.0);
  for (std::size_t y = 0; y < dist.size(); ++y) cdf_[y + 1] = cdf_[y] + dist[y];
  mpz_ui_pow_ui(scale_.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(T));
}

EnumerationBracket DigitDistribution::bracket(const mpq_class& lo,
                                              const mpq_class& hi) const {
  // Values are y / k^T; the tail adds [0, W] with W = N/(k-1) in grid units.
  mpq_class L = lo * scale_, H = hi * scale_;
  mpq_class W(static_cast<long>(N_), static_cast<long>(k_ - 1));
  W.canonicalize();
  long top = static_cast<long>(cdf_.size()) - 2;
  auto sum = [&](mpz_class a, mpz_class b) {
    if (a < 0) a = 0;
    if (b > top) b = top;
    if (a > b) return 0.0;
    return cdf_[b.get_si() + 1] - cdf_[a.get_si()];
  };
  auto ceil_q = [](const mpq_class& x) {
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return z;
  };
  auto floor_q = [](const mpq_class& x) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return z;
  };
  EnumerationBracket out;
  out.lower = std::max(0.0, sum(ceil_q(L), floor_q(mpq_class(H - W))));
  out.upper = std::min(1.0, sum(floor_q(mpq_class(L - W)) + 1, ceil_q(H) - 1));
  return out;
}

EnumerationBracket enumeration_oracle(int k, const std::vector<double>& p,
                                      int T, const mpq_class& lo,
                                      const mpq_class& hi, std::size_t samples,
                                      std::uint64_t seed) {
  if (k < 2 || p.size() < 2 || T < 1)
    throw Error(ErrorCode::kInvalidArgument, "need k >= 2, two digits and T >= 1");
  double total = 0.0;
  for (double x : p) {
    if (!(x > 0.0)) throw Error(ErrorCode::kInvalidArgument, "probabilities must be positive");
    total += x;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "probabilities must sum to 1");
  if (DigitDistribution::feasible(k, p.size() - 1, T))
    return DigitDistribution(k, p, T).bracket(lo, hi);
  if (samples == 0) throw Error(ErrorCode::kInvalidArgument, "need samples");
  // Monte Carlo over T digits; the tail is still bracketed deterministically.
  std::vector<double> cum;
  double acc = 0.0;
  for (double x : p) cum.push_back(acc += x);
  double N = static_cast<double>(p.size() - 1);
  double tail = N / (k - 1) * std::pow(static_cast<double>(k), -T);
  double a = lo.get_d(), b = hi.get_d();
  CounterRng rng(seed);
  std::size_t inside = 0, touching = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    double x = 0.0, step = 1.0;
    for (int t = 0; t < T; ++t) {
      step /= k;
      double u = rng.uniform();
      std::size_t dgt = 0;
      while (dgt + 1 < cum.size() && u >= cum[dgt]) ++dgt;
      x += step * static_cast<double>(dgt);
    }
    if (x >= a && x + tail <= b) ++inside;
    if (x < b && x + tail > a) ++touching;
  }
  double n = static_cast<double>(samples);
  double margin = std::sqrt(std::log(2.0 / 1e-9) / (2.0 * n));
  EnumerationBracket out;
  out.exhaustive = false;
  out.samples = samples;
  out.lower = std::max(0.0, inside / n - margin);
  out.upper = std::min(1.0, touching / n + margin);
  return out;
}

}  // namespace matprod
