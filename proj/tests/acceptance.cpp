// acceptance.cpp
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

// Acceptance runner: one PASS/FAIL line per criterion, each with its wall
// time against the allowed budget. Reference values are rebuilt here from
// first principles where that is cheap; library reports are cross-checked.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matprod/bernoulli.hpp"
#include "matprod/counterexamples.hpp"
#include "matprod/curves.hpp"
#include "matprod/error.hpp"
#include "matprod/factorize.hpp"
#include "matprod/gibbs.hpp"
#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"
#include "matprod/trajectory.hpp"
#include "matprod/triangular.hpp"

using namespace matprod;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

// Criteria whose failure is understood and recorded: the expected value is
// not what the construction produces. They still print FAIL.
const std::set<int> kKnownFailures = {4};

mpq_class pow2(long e) {
  mpq_class r = 1;
  if (e >= 0) mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

// Largest column ratio max/min over nonzero entries.
mpq_class column_ratio_max(const QMat& m) {
  mpq_class best = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    mpq_class lo = 0, hi = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const mpq_class& x = m(i, j);
      if (sgn(x) == 0) continue;
      if (sgn(lo) == 0 || x < lo) lo = x;
      if (x > hi) hi = x;
    }
    if (sgn(lo) != 0 && hi / lo > best) best = hi / lo;
  }
  return best;
}

std::vector<mpq_class> q(std::initializer_list<const char*> xs) {
  std::vector<mpq_class> out;
  for (const char* x : xs) out.push_back(parse_rational(x));
  return out;
}

Word word_of(std::size_t code, std::size_t len, int base) {
  Word w(len);
  for (std::size_t i = len; i-- > 0;) {
    w[i] = static_cast<int>(code % static_cast<std::size_t>(base));
    code /= static_cast<std::size_t>(base);
  }
  return w;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// ---- criteria ----

void c1_beta_eigenvector(Outcome& o) {
  const auto& beta = beta_representation();
  QMat c = QMat::column({12, 8, 13, 4, 12, 6, 4}) / mpq_class(20);
  QMat sum = beta.matrices[0] + beta.matrices[1] + beta.matrices[2];
  o.require(sum * c == c, "(M'_0+M'_1+M'_2) c == c");
  o.require(beta.c == c, "stored c matches");
  o.require(c(0, 0) + c(1, 0) == 1, "c_1 + c_2 == 1");
  // The scaled matrices are the 0/1 letters times 1/2, 1/4, 1/16.
  const auto& L = beta_letter_matrices();
  o.require(beta.matrices[0] == L[0] / mpq_class(2) && beta.matrices[1] == L[1] / mpq_class(4) &&
                beta.matrices[2] == L[2] / mpq_class(16),
            "scaling of the letters");
  o.detail << "sum*c = c exactly, c_1+c_2 = " << format_rational(c(0, 0) + c(1, 0));
}

void c2_ce13(Outcome& o) {
  QMat A{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}};
  QMat B{{1, 0, 0}, {0, 1, 1}, {0, 0, 1}};
  QMat p = QMat::identity(3);
  for (long k = 1; k <= 10; ++k) {
    p = p * power(A, 1ul << k) * power(B, 1ul << k);
    mpq_class e = pow2(k + 1) - 2;
    QMat want{{1, 0, e}, {0, 1, e}, {0, 0, 1}};
    o.require(p == want, "closed form at k = " + std::to_string(k));
    auto r = ce13_verify(static_cast<std::size_t>(k), CE13Options{6, 2, 10, 40});
    o.require(r.closed_form_match && r.product == want, "library product at k = " + std::to_string(k));
  }
  auto r = ce13_verify(10);
  std::vector<std::vector<double>> want = {{0.5, 0.5, 0.0}, {2.0 / 3, 1.0 / 3, 0.0}};
  o.require(r.centroids.size() == 2, "two limit points");
  double worst = 0.0;
  for (const auto& w : want) {
    double best = 1e9;
    for (const auto& c : r.centroids) best = std::min(best, l1(c, w));
    worst = std::max(worst, best);
  }
  o.require(worst < 1e-6, "centroids within 1e-6");
  o.detail << "closed form k=1..10 exact, centroid gap " << worst;
}

void c3_ce12(Outcome& o) {
  const std::size_t K = 4;
  auto b = ce12_build_and_verify(K);
  o.require(b.recurrence_ok && b.norm_ok && b.ratio_ok && b.window_ok && b.certificates_ok,
            "builder flags");
  o.require(b.n.size() == K && b.h.size() == K && b.v.size() == K + 1, "build sizes");
  if (!o.pass) return;

  // Upper bound of prod_{j>=0} (1 + 2^-j): 41 factors times exp(2^-39) <= 1 + x + x^2.
  mpq_class head = 1;
  for (long j = 0; j <= 40; ++j) head *= 1 + pow2(-j);
  mpq_class x = pow2(-39);
  mpq_class p_upper = head * (1 + x + x * x);
  o.require(b.p_upper >= head, "library p_upper bounds the product");
  mpq_class bound = 1 / (9 * p_upper);

  auto norm1 = [](const QMat& v) -> mpq_class { return abs(v(0, 0)) + abs(v(1, 0)); };
  std::vector<QMat> v = {QMat::column({1, 0}), QMat::column({pow2(-b.n[0]), 1})};
  for (std::size_t k = 2; k <= K; ++k)
    v.push_back(v[k - 1] * pow2(-b.n[k - 1]) + v[k - 2] * pow2(-b.n[k - 2]));
  for (std::size_t k = 0; k <= K; ++k) o.require(v[k] == b.v[k], "recurrence v_" + std::to_string(k));
  for (std::size_t k = 2; k <= K; ++k) {
    mpq_class cap = (pow2(-static_cast<long>(k)) + 1) * pow2(-b.n[k - 2]) * norm1(v[k - 2]);
    o.require(norm1(v[k]) <= cap, "norm bound at k = " + std::to_string(k));
  }
  for (std::size_t k = 1; k <= K; ++k) {
    mpq_class r = pow2(-b.h[k - 1]) * norm1(v[k]) / (pow2(-b.n[k - 1]) * norm1(v[k - 1]));
    o.require(r >= 1 && r <= 2, "ratio in [1,2] at k = " + std::to_string(k));
    if (k < K) o.require(b.h[k - 1] <= b.n[k], "window h_k <= n_{k+1}");
  }

  // Walk the word once and certify at each checkpoint.
  std::vector<long> checkpoints;
  long s = 0;
  for (std::size_t k = 0; k < K; ++k) {
    s += b.n[k] + 1;
    o.require(s == b.s[k], "s_k");
    checkpoints.push_back(s + b.h[k]);
  }
  Word w = b.word();
  o.require(static_cast<long>(w.size()) == checkpoints.back(), "word length");
  const auto& L = ce12_letters();
  QMat p = QMat::identity(2);
  std::size_t next = 0;
  mpq_class worst = 1;
  for (std::size_t n = 1; n <= w.size() && next < checkpoints.size(); ++n) {
    p = p * L[static_cast<std::size_t>(w[n - 1])];
    if (static_cast<long>(n) != checkpoints[next]) continue;
    mpq_class nrm = entry_norm(p);
    mpq_class d = abs(determinant(p)) / (nrm * nrm);
    o.require(d == b.det[next], "library det at checkpoint");
    o.require(d >= bound, "det >= 1/(9 p_upper) at n = " + std::to_string(n));
    if (d < worst) worst = d;
    ++next;
  }
  o.require(next == checkpoints.size(), "all checkpoints reached");
  o.detail << "n = (" << b.n[0] << "," << b.n[1] << "," << b.n[2] << "," << b.n[3]
           << "), min det " << worst.get_d() << " >= " << bound.get_d();
}

void c4_growth(Outcome& o) {
  const auto& L = beta_letter_matrices();
  mpq_class best = 0;
  std::string best_name;
  for (std::size_t t = 0; t < body_templates().size(); ++t) {
    bool repeats = body_templates()[t].repeat >= 0;
    for (long a = repeats ? 1 : 0; a <= (repeats ? 40 : 0); ++a) {
      Word lit = token_literal(false, static_cast<int>(t), a);
      mpq_class v = column_ratio_max(exact_product(L, lit));
      if (v > best) {
        best = v;
        best_name = word_to_string(lit);
      }
    }
  }
  QMat m2m04 = L[2] * power(L[0], 4);
  mpq_class lam_target = column_ratio_max(m2m04);
  auto g = growth_and_bounds();
  o.require(std::fabs(g.max_Lambda_E - best.get_d()) < 1e-12, "library max Lambda agrees");
  o.require(best == 3, "max Lambda over body tokens == 3");
  o.require(lam_target == 3, "Lambda(M_2 M_0^4) == 3");
  o.require(g.max_lambda_E == 2.0, "max lambda == 2");
  bool closed = true, displayed = true;
  for (long a = 1; a <= 10; ++a) {
    QMat actual = power(L[0], static_cast<unsigned long>(4 * a));
    closed = closed && actual == m0_power4_closed_form(a);
    displayed = displayed && actual == m0_power4_displayed(a);
  }
  o.require(closed && g.eq27_ok, "corrected closed form of M_0^{4a}");
  o.require(displayed, "displayed closed form of M_0^{4a}");
  o.detail << "max Lambda " << best.get_d() << " at word " << best_name << ", Lambda(M_2 M_0^4) "
           << lam_target.get_d() << ", max lambda " << g.max_lambda_E << ", displayed mismatches: "
           << g.eq27_display_mismatch.size();
}

void c5_structure(Outcome& o) {
  auto s = structure_checks();
  o.require(s.triples_ok && s.triple_failures.empty(), "27 triples");
  o.require(s.stability_ok, "M u_135 >= u_135");
  // Stability rechecked from the letters.
  const auto& L = beta_letter_matrices();
  QMat u = QMat::column({1, 0, 1, 0, 1, 0, 0});
  for (const auto& m : L) {
    QMat img = m * u;
    for (std::size_t i = 0; i < 7; ++i) o.require(img(i, 0) >= u(i, 0), "u_135 stability");
  }
  std::mt19937_64 gen(20240501);
  std::size_t checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 1 + gen() % 300;
    Word w(n);
    for (auto& x : w) x = static_cast<int>(gen() % 3);
    auto f = tokenize(w);
    if (!verify_factorization(w, f)) {
      o.require(false, "round trip " + word_to_string(w));
      break;
    }
    // Spot check through an independent rational product.
    if (trial % 100 == 0) {
      QMat via = f.head.literal.empty() ? QMat::identity(7) : token_matrix_exact(f.head);
      for (const auto& t : f.body) via = via * token_matrix_exact(t);
      o.require(via == exact_product(L, w), "rational product equality");
    }
    ++checked;
  }
  o.detail << checked << " random words round-tripped";
}

void c6_convergence(Outcome& o) {
  auto f = beta_representation().family();
  UniformProbeOptions opts;
  opts.depth = 300;
  opts.extension_samples = 8;
  opts.seed = 6;
  auto sweep = uniform_convergence_sweep(f, 200, 80, opts);
  o.require(sweep.back() < 1e-4, "sweep below 1e-4 at depth 80");
  std::vector<std::vector<double>> starts = {
      {1, 1, 1, 1, 1, 1, 1}, {12, 8, 13, 4, 12, 6, 4}, {1, 2, 3, 4, 5, 6, 7},
      {7, 1, 5, 2, 9, 3, 4}, {0.1, 3, 0.5, 2, 0.01, 1, 8}};
  double worst = 0.0;
  for (std::uint64_t seed : {3u, 11u}) {
    auto seq = SymbolSequence::uniform(3, seed);
    std::vector<std::vector<double>> limits;
    for (const auto& s : starts)
      limits.push_back(limit_image(run_trajectory(f, seq, 300, s), 1e-6).vector);
    for (std::size_t i = 1; i < limits.size(); ++i) worst = std::max(worst, l1(limits[0], limits[i]));
  }
  o.require(worst < 1e-6, "limit images agree within 1e-6");
  o.detail << "sup gap at n=80 " << sweep.back() << ", start-vector spread " << worst;
}

void c7_dichotomy(Outcome& o) {
  auto skew = build_representation(3, q({".4", ".1", ".2", ".3"}));
  auto uni = build_representation(3, q({"1/4", "1/4", "1/4", "1/4"}));
  o.require(!skew.condition_H, "condition (H) fails for the skew law");
  o.require(uni.condition_H, "condition (H) holds for the uniform law");
  auto series = condition24_probe(skew, 40);
  double g40 = series.g.back();
  o.require(std::fabs(g40 - 1.0 / 3) < 0.02, "g_40 within 0.02 of 1/3");
  auto ce = ce22_limits({0.4, 0.1, 0.2, 0.3});
  o.require(!ce.uniform, "non-uniform limits detected");
  auto f = gibbs_family(uni);
  Word w = SymbolSequence::uniform(3, 7).take(200);
  auto r = potential_and_ratio(f, w, GibbsOptions{64, 1, 20});
  auto dev = [&](std::size_t n) { return std::fabs(r.ratio_root[n - 1] - 1.0); };
  o.require(dev(20) < 0.05, "|ratio_root - 1| < 0.05 at n = 20");
  o.require(dev(20) <= dev(10) && dev(10) <= dev(5), "deviation decreasing");
  o.detail << "g_40 = " << g40 << ", limit distance " << ce.distance << ", deviation n=5/10/20: "
           << dev(5) << "/" << dev(10) << "/" << dev(20);
}

void c8_measures(Outcome& o) {
  double worst = 0.0;
  for (const auto& spec : {build_representation(2, q({"1/4", "1/2", "1/4"})),
                           build_representation(3, q({"1/4", "1/4", "1/4", "1/4"})),
                           build_representation(3, q({".4", ".1", ".2", ".3"}))}) {
    for (std::size_t len = 0; len <= 5; ++len)
      for (std::size_t code = 0; code < ipow(static_cast<std::size_t>(spec.base), len); ++code) {
        Word w = word_of(code, len, spec.base);
        double parts = 0.0;
        for (int i = 0; i < spec.base; ++i) {
          Word wi = w;
          wi.push_back(i);
          parts += cylinder_measure(spec, wi);
        }
        worst = std::max(worst, std::fabs(parts - cylinder_measure(spec, w)));
      }
  }
  o.require(worst <= 1e-12, "additivity to 1e-12");

  auto binom = build_representation(2, q({"1/4", "1/2", "1/4"}));
  DigitDistribution dist(2, {0.25, 0.5, 0.25}, 16);
  std::mt19937_64 gen(8);
  int inside = 0;
  for (int t = 0; t < 20; ++t) {
    Word w(1 + gen() % 8);
    for (auto& x : w) x = static_cast<int>(gen() % 2);
    auto iv = cylinder_interval(2, w);
    auto br = dist.bracket(iv.first, iv.second);
    double m = cylinder_measure(binom, w);
    if (br.lower <= m && m <= br.upper) ++inside;
  }
  // The one-shot oracle agrees with the cached distribution.
  auto one = enumeration_oracle(2, {0.25, 0.5, 0.25}, 16, 0, mpq_class(1, 2));
  o.require(one.exhaustive && one.lower <= 0.125 && one.upper >= 0.125, "oracle on [0, 1/2)");
  o.require(inside == 20, "20 cylinders bracketed");

  std::mt19937_64 g2(12);
  std::uniform_int_distribution<int> draw(1, 9);
  std::size_t words = 0;
  bool exact = true;
  for (std::size_t a : {2u, 3u}) {
    QMat P(a, a), pi(a, 1);
    for (std::size_t i = 0; i < a; ++i) {
      mpq_class s = 0;
      for (std::size_t j = 0; j < a; ++j) s += (P(i, j) = draw(g2));
      for (std::size_t j = 0; j < a; ++j) P(i, j) /= s;
    }
    mpq_class s = 0;
    for (std::size_t i = 0; i < a; ++i) s += (pi(i, 0) = draw(g2));
    for (std::size_t i = 0; i < a; ++i) pi(i, 0) /= s;
    auto f = markov_representation(P, pi);
    for (std::size_t len = 1; len <= 8; ++len)
      for (std::size_t code = 0; code < ipow(a, len); ++code) {
        Word w = word_of(code, len, static_cast<int>(a));
        mpq_class classical = pi(static_cast<std::size_t>(w[0]), 0);
        for (std::size_t i = 1; i < w.size(); ++i)
          classical *= P(static_cast<std::size_t>(w[i - 1]), static_cast<std::size_t>(w[i]));
        exact = exact && representation_measure(f, w) == classical;
        ++words;
      }
  }
  o.require(exact, "Markov representation exact");
  o.detail << "additivity gap " << worst << ", brackets " << inside << "/20, " << words
           << " Markov words exact";
}

void c9_spectrum(Outcome& o) {
  MatrixFamily leb;
  leb.matrices = {Mat{{0.5}}, Mat{{0.5}}};
  leb.row_vectors = {Mat{{0.5}}, Mat{{0.5}}};
  leb.terminal = Mat{{1.0}};
  auto grid = parse_grid("-5:5:0.25");
  auto sp = scale_spectrum_and_legendre(leb, grid, 12);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::fabs(sp.tau[i] - (grid[i] - 1)));
  o.require(worst < 1e-10, "Lebesgue tau(q) = q - 1");
  std::size_t i1 = 24;
  o.require(grid[i1] == 1.0, "grid contains q = 1");
  double tau1 = 0.0;
  bool concave = true;
  for (const auto& spec : {build_representation(2, q({"1/4", "1/2", "1/4"})),
                           build_representation(3, q({"1/4", "1/4", "1/4", "1/4"})),
                           build_representation(3, q({".4", ".1", ".2", ".3"})),
                           build_representation(2, q({"1/8", "3/8", "1/4", "1/8", "1/8"}))}) {
    auto s = scale_spectrum_and_legendre(spec, grid, 10);
    tau1 = std::max(tau1, std::fabs(s.tau[i1]));
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      double left = (s.tau[i] - s.tau[i - 1]) / (grid[i] - grid[i - 1]);
      double right = (s.tau[i + 1] - s.tau[i]) / (grid[i + 1] - grid[i]);
      concave = concave && right <= left + 1e-9;
    }
  }
  o.require(tau1 <= 1e-12, "tau(1) = 0");
  o.require(concave, "finite-difference slopes nonincreasing");
  o.detail << "Lebesgue gap " << worst << ", max |tau(1)| " << tau1;
}

Mat upper(double a, double b, double c, double d, double e, double f) {
  return Mat{{a, b, c}, {0, d, e}, {0, 0, f}};
}

void c10_triangular(Outcome& o) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> num(0, 8), den_exp(0, 3), pos(1, 8);
  auto dy = [&](bool positive) -> mpq_class {
    mpq_class x(positive ? pos(rng) : num(rng), 1 << den_exp(rng));
    x.canonicalize();
    return x;
  };
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<QMat> f;
    for (int n = 0; n < 30; ++n) {
      QMat m(3, 3);
      m(0, 0) = dy(true); m(1, 1) = dy(true); m(2, 2) = dy(true);
      m(0, 1) = dy(false); m(0, 2) = dy(false); m(1, 2) = dy(false);
      f.push_back(m);
    }
    auto r = series3x3_exact(f);
    QMat direct = QMat::identity(3);
    for (const auto& m : f) direct = direct * m;
    if (r.equal && r.closed == direct && closed_form_product(r.v, 30) == direct) ++equal;
  }
  o.require(equal == 100, "exact closed form on 100 instances");

  struct Ex {
    Mat m;
    int expect_case;
  };
  std::vector<Ex> ex = {{upper(2, 1, 0, 1, 1, 0.5), 1},
                        {upper(0.5, 1, 1, 0.25, 1, 1), 2},
                        {upper(0.5, 1, 0, 1, 1, 1.0 / 3), 3},
                        {upper(0.25, 1, 1, 0.5, 1, 1), 4}};
  std::vector<std::vector<double>> tv = {{1, 1, 1}, {0.2, 3, 1}, {4, 0.5, 0.1}};
  double worst = 0.0;
  for (const auto& e : ex) {
    auto s = series3x3(std::vector<Mat>(200, e.m));
    auto c = classify3x3_and_predict(s, tv);
    o.require(c.case_id == e.expect_case, "case " + std::to_string(e.expect_case));
    if (c.prediction != LimitPrediction::kPredicted) continue;
    // Deep product computed directly, independent of the series.
    Mat p = Mat::identity(3);
    for (int n = 0; n < 400; ++n) {
      p = p * e.m;
      p = p / entry_norm(p);
    }
    for (const auto& v : tv) {
      Mat img = p * Mat::column(v);
      std::vector<double> x(img.data().begin(), img.data().end());
      double n1 = vec_norm1(x);
      for (auto& y : x) y /= n1;
      worst = std::max(worst, l1(x, c.predicted));
    }
  }
  o.require(worst < 1e-6, "predictions within 1e-6");

  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> diag(0.3, 2.0), off(0.0, 2.0);
  bool mono = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Mat> f;
    for (int n = 0; n < 100; ++n)
      f.push_back(upper(diag(g), off(g), off(g), diag(g), off(g), diag(g)));
    auto s = series3x3(f);
    mono = mono && s.monotone;
    const auto& v = s.v;
    for (std::size_t n = 1; n < v.s.size(); ++n) {
      mono = mono && v.s[n] >= v.s[n - 1] && v.t[n] >= v.t[n - 1] && v.u[n] >= v.u[n - 1];
      if (v.u[n - 1] > 0) mono = mono && v.tau[n] / v.u[n] >= v.tau[n - 1] / v.u[n - 1] * (1 - 1e-12);
    }
  }
  o.require(mono, "s, t, u, tau/u nondecreasing");
  o.detail << equal << "/100 exact, prediction gap " << worst;
}

void c11_divergence(Outcome& o) {
  auto f = beta_representation().family();
  int diverging = 0, mixing = 0;
  std::vector<SymbolSequence> seqs = {SymbolSequence::uniform(3, 17), SymbolSequence::uniform(3, 29),
                                      SymbolSequence::random({0.5, 0.25, 0.25}, 5),
                                      SymbolSequence::random({0.6, 0.3, 0.1}, 41)};
  for (const auto& seq : seqs) {
    ++mixing;
    if (divergence_detector(f, seq, 300).verdict == DivergenceVerdict::kDiverges) ++diverging;
  }
  o.require(diverging == mixing, "mixed beta sequences diverge");

  int false_alarms = 0, constants = 0;
  std::mt19937_64 g(111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t d = 2; d <= 5; ++d)
    for (int t = 0; t < 5; ++t) {
      Mat m(d, d);
      for (auto& x : m.data()) x = u(g);
      MatrixFamily c;
      c.matrices = {m};
      ++constants;
      if (divergence_detector(c, SymbolSequence::uniform(1, 1), 200).verdict ==
          DivergenceVerdict::kDiverges)
        ++false_alarms;
    }
  for (int letter = 0; letter < 3; ++letter) {
    ++constants;
    auto seq = SymbolSequence::periodic({}, {letter}, 3);
    if (divergence_detector(f, seq, 300).verdict == DivergenceVerdict::kDiverges) ++false_alarms;
  }
  o.require(false_alarms == 0, "no divergence on constant sequences");
  auto mc = monte_carlo_divergence(2, 200, 300, 20240601);
  o.require(mc.fraction >= 0.95, "Monte Carlo fraction >= 0.95");
  o.detail << diverging << "/" << mixing << " mixed diverge, " << false_alarms << "/" << constants
           << " constant false alarms, MC fraction " << mc.fraction;
}

void c12_curves(Outcome& o) {
  auto hat = build_refinement_matrices(2, {0.5, 1.0, 0.5});
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(64);
  for (auto& x : xs) x = u(g);
  auto r = residual_checks(hat, xs, 40);
  o.require(r.self_similarity_residual < 1e-8, "self-similarity residual < 1e-8");
  auto mid = sample_curve(hat, {0.5}, 40);
  double gap = std::fabs(mid[0].psi[0] - 0.5) + std::fabs(mid[0].psi[1] - 0.5);
  o.require(std::fabs(mid[0].psi[0] - 0.5) < 1e-8 && std::fabs(mid[0].psi[1] - 0.5) < 1e-8,
            "psi(1/2) = (1/2, 1/2)");
  // The hat function gives psi(x) = (x, 1 - x) everywhere.
  double shape = 0.0;
  for (const auto& s : sample_curve(hat, xs, 40))
    shape = std::max(shape, std::fabs(s.psi[0] - s.x) + std::fabs(s.psi[1] - (1 - s.x)));
  o.require(shape < 1e-8, "psi(x) = (x, 1 - x)");
  o.detail << "residual " << r.self_similarity_residual << ", psi(1/2) gap " << gap;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> all = {
      {1, "beta eigenvector, exact", 1, c1_beta_eigenvector},
      {2, "rank-two closed form and limit points", 5, c2_ce13},
      {3, "rank-one determinant certificates", 30, c3_ce12},
      {4, "column-ratio scan and M_0 powers", 10, c4_growth},
      {5, "structure suite and tokenizer", 60, c5_structure},
      {6, "uniform convergence evidence", 60, c6_convergence},
      {7, "condition (H) dichotomy", 60, c7_dichotomy},
      {8, "measure consistency", 120, c8_measures},
      {9, "scale spectrum", 30, c9_spectrum},
      {10, "triangular suite", 60, c10_triangular},
      {11, "divergence suite", 120, c11_divergence},
      {12, "refinement curves", 10, c12_curves},
  };
  int passed = 0, unexpected = 0;
  for (const auto& c : all) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const Error& e) {
      o.pass = false;
      o.failures += std::string(" [error ") + error_name(e.code()) + ": " + e.what() + "]";
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures += std::string(" [exception: ") + e.what() + "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool timely = secs < c.budget_s;
    bool ok = o.pass && timely;
    if (!timely) o.failures += " [over budget]";
    std::printf("criterion %2d %s  %-40s %7.2fs (< %gs)  %s\n", c.id, ok ? "PASS" : "FAIL", c.name,
                secs, c.budget_s, (o.detail.str() + o.failures).c_str());
    std::fflush(stdout);
    if (ok) ++passed;
    if (ok == (kKnownFailures.count(c.id) > 0)) ++unexpected;
  }
  std::printf("%d/%zu criteria pass", passed, all.size());
  if (!kKnownFailures.empty()) {
    std::printf("; documented failures:");
    for (int id : kKnownFailures) std::printf(" %d", id);
  }
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
