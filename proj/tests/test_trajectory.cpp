// test_trajectory.cpp
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

#include <cmath>
#include <random>

#include "doctest.h"
#include "matprod/bernoulli.hpp"
#include "matprod/error.hpp"
#include "matprod/trajectory.hpp"

using namespace matprod;

namespace {

MatrixFamily beta_family() { return beta_representation().family(); }

MatrixFamily ternary_family(const char* p0, const char* p1, const char* p2,
                            const char* p3) {
  return build_representation(3, {parse_rational(p0), parse_rational(p1),
                                   parse_rational(p2), parse_rational(p3)})
      .family();
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

Mat random_nonneg(std::mt19937_64& g, std::size_t d, bool positive) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mat m(d, d);
  for (auto& x : m.data()) {
    x = u(g);
    if (!positive && x < 0.3) x = 0.0;
  }
  if (entry_norm(m) == 0.0) m(0, 0) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("family validation") {
  MatrixFamily f;
  CHECK_THROWS_AS(f.validate(), Error);
  f.matrices = {Mat{{1, 0}, {0, 1}}, Mat{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK_THROWS_AS(f.validate(), Error);
  f.matrices = {Mat{{1, -1}, {0, 1}}};
  CHECK_THROWS_AS(f.validate(), Error);
  beta_family().validate();
  MatrixFamily g = beta_family();
  g.terminal = Mat::column({1, 1, 1, 1, 1, 1, 1});
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("identity family keeps the start direction") {
  MatrixFamily f;
  f.matrices = {Mat::identity(3)};
  auto t = run_trajectory(f, SymbolSequence::uniform(1, 3), 5,
                          std::vector<double>{1, 2, 5});
  for (const auto& s : t.steps) {
    CHECK(s.image[0] == doctest::Approx(0.125));
    CHECK(s.image[2] == doctest::Approx(0.625));
  }
  // ||I|| / (||I|| ||I||) = 1/d after the first step.
  CHECK(t.at(1).lambda == 1.0);
  CHECK(t.at(3).lambda == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(run_trajectory(f, SymbolSequence::uniform(1, 3), 5,
                                 std::vector<double>{1, 0, 5}),
                  Error);
  CHECK_THROWS_AS(run_trajectory(f, SymbolSequence::uniform(1, 3), 0), Error);
}

TEST_CASE("vanishing products are reported with their position") {
  MatrixFamily f;
  f.matrices = {Mat{{0, 1}, {0, 0}}};
  try {
    run_trajectory(f, SymbolSequence::uniform(1, 1), 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kProductVanished);
    CHECK(std::string(e.what()).find("n = 2") != std::string::npos);
  }
}

TEST_CASE("three-letter family along (012)^inf is Cauchy from n = 40") {
  auto f = beta_family();
  auto seq = SymbolSequence::periodic({}, {0, 1, 2}, 3);
  auto t = run_trajectory(f, seq, 60);
  auto deep = run_trajectory(f, seq, 200);
  double gap = 0.0;
  for (std::size_t m = 40; m <= 60; ++m)
    for (std::size_t n = m; n <= 60; ++n)
      gap = std::max(gap, dist(t.at(m).image, t.at(n).image));
  CHECK(gap < 1e-6);
  CHECK(dist(t.at(60).image, deep.at(200).image) < 1e-6);
}

TEST_CASE("positive 2x2 family converges along a random sequence") {
  MatrixFamily f;
  f.matrices = {Mat{{2, 1}, {1, 2}} / 6.0, Mat{{1, 3}, {3, 1}} / 8.0};
  auto seq = SymbolSequence::uniform(2, 99);
  auto t = run_trajectory(f, seq, 100, std::vector<double>{1, 1});
  auto deep = run_trajectory(f, seq, 400, std::vector<double>{1, 1});
  auto lim = limit_image(t, 1e-9);
  CHECK(dist(lim.vector, deep.steps.back().image) < 1e-9);
}

TEST_CASE("rank-one diagnostic") {
  MatrixFamily f;
  f.matrices = {Mat{{1, 2}, {2, 4}}};
  auto t = run_trajectory(f, SymbolSequence::uniform(1, 1), 20);
  auto r = rank_one_diagnostic(t);
  CHECK(r.verdict == RankVerdict::kRankOneCollapse);
  for (double x : r.ratio_series) CHECK(x < 1e-12);

  MatrixFamily g;
  g.matrices = {Mat::identity(2), Mat{{0, 1}, {1, 0}}};
  auto u = run_trajectory(g, SymbolSequence::uniform(2, 4), 30);
  CHECK(rank_one_diagnostic(u).verdict == RankVerdict::kPersistentRank2);
  RankOneOptions o;
  o.checkpoints = {31};
  CHECK_THROWS_AS(rank_one_diagnostic(u, o), Error);
}

TEST_CASE("limit image examples") {
  MatrixFamily f;
  // Column-stochastic with common Perron vector (1/2, 1/2).
  f.matrices = {Mat{{0.5, 0.5}, {0.5, 0.5}}, Mat{{0.7, 0.3}, {0.3, 0.7}}};
  f.terminal = Mat::column({0.5, 0.5});
  auto t = run_trajectory(f, SymbolSequence::uniform(2, 3), 10);
  auto lim = limit_image(t, 1e-12);
  CHECK(lim.achieved_at == 1);
  CHECK(lim.vector[0] == doctest::Approx(0.5));

  auto ce = ternary_family(".4", ".1", ".2", ".3");
  auto ones = run_trajectory(ce, SymbolSequence::periodic({}, {1}, 3), 400);
  auto l1 = limit_image(ones, 1e-10);
  // Dominant eigenvector of [[p1, p0], [0, p3]]: (p0, p3 - p1) / (p0 + p3 - p1).
  CHECK(l1.vector[0] == doctest::Approx(0.4 / 0.6).epsilon(1e-10));
  CHECK(l1.vector[1] == doctest::Approx(0.2 / 0.6).epsilon(1e-10));
  for (std::size_t m : {0u, 3u, 10u}) {
    auto t2 = run_trajectory(ce, SymbolSequence::periodic(Word(m, 1), {2}, 3), 400);
    auto l2 = limit_image(t2, 1e-10);
    CHECK(l2.vector[0] == doctest::Approx(1.0));
    CHECK(l2.vector[1] == doctest::Approx(0.0));
  }

  MatrixFamily swap;
  swap.matrices = {Mat{{0, 1}, {1, 0}}};
  auto osc = run_trajectory(swap, SymbolSequence::uniform(1, 1), 20,
                            std::vector<double>{1, 2});
  try {
    limit_image(osc, 1e-6);
    FAIL("expected NOT_CONVERGED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
  }
}

TEST_CASE("uniform convergence probe") {
  MatrixFamily scalar;
  scalar.matrices = {Mat{{0.5}}, Mat{{0.5}}};
  scalar.terminal = Mat{{1.0}};
  UniformProbeOptions o;
  o.extension_samples = 8;
  o.depth = 40;
  for (double g : uniform_convergence_probe(scalar, Word(10, 1), o)) CHECK(g == 0.0);

  // Non-uniform case: for prefixes 1^n the extension 2^inf drives the image
  // to (1, 0) while 1^inf gives (2/3, 1/3).
  auto ce = ternary_family(".4", ".1", ".2", ".3");
  o.depth = 300;
  o.extension_samples = 16;
  auto prof = uniform_convergence_probe(ce, Word(30, 1), o);
  double limit_gap = 2.0 * (1.0 - 0.4 / 0.6);
  // Extension 2^inf is sampled deterministically only when exhausted, so
  // test with an explicit extension as well.
  auto t = run_trajectory(ce, SymbolSequence::periodic(Word(30, 1), {2}, 3), 300);
  CHECK(dist(t.at(30).image, t.at(300).image) > 0.9 * limit_gap);
  CHECK(prof.back() > 0.01);

  auto f = beta_family();
  o.extension_samples = 8;
  auto sweep = uniform_convergence_sweep(f, 10, 80, o);
  CHECK(sweep.back() < 1e-4);
  CHECK(sweep.back() <= sweep.front());
}

TEST_CASE("theorem 1.5 conditions") {
  std::mt19937_64 g(5);
  MatrixFamily f;
  f.matrices = {random_nonneg(g, 3, true), random_nonneg(g, 3, true)};
  auto t = run_trajectory(f, SymbolSequence::uniform(2, 8), 60);
  auto r = theorem15_check(t, {0, 10, 20, 30, 40, 50});
  CHECK(r.h1_min > 0.0);
  CHECK(r.h2_violations.empty());

  MatrixFamily perm;
  perm.matrices = {Mat::identity(2), Mat{{0, 1}, {1, 0}}};
  auto u = run_trajectory(perm, SymbolSequence::periodic({}, {0, 1}, 2), 20);
  Theorem15Options o;
  o.test_vectors = {{1, 1}, {1, 0}};
  auto v = theorem15_check(u, {0, 2, 4, 6, 8, 10}, o);
  CHECK(v.h2_violations.size() == 5);
  CHECK(v.h2_violations[0].antidiagonal);
  CHECK(v.v_membership[0] == doctest::Approx(1.0));
  CHECK(v.v_membership[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(theorem15_check(u, {0, 2}), Error);
  CHECK_THROWS_AS(theorem15_check(u, {0, 4, 2}), Error);
  CHECK_THROWS_AS(theorem15_check(u, {0, 4, 21}), Error);
}

TEST_CASE("divergence detector") {
  MatrixFamily c;
  c.matrices = {Mat{{1, 2}, {3, 4}}};
  auto r = divergence_detector(c, SymbolSequence::uniform(1, 1), 50);
  CHECK(r.clusters.size() == 1);
  CHECK(r.verdict == DivergenceVerdict::kInconclusive);

  auto f = beta_family();
  auto d = divergence_detector(f, SymbolSequence::uniform(3, 17), 300);
  CHECK(d.limit_points.size() == 3);
  CHECK(!d.common.exists);
  CHECK(d.verdict == DivergenceVerdict::kDiverges);

  // Column-stochastic pair: the all-ones row is a common left eigenvector.
  MatrixFamily s;
  s.matrices = {Mat{{0.9, 0.3}, {0.1, 0.7}}, Mat{{0.2, 0.6}, {0.8, 0.4}}};
  auto e = divergence_detector(s, SymbolSequence::uniform(2, 2), 200);
  CHECK(e.common.exists);
  CHECK(e.verdict == DivergenceVerdict::kInconclusive);
}

TEST_CASE("Monte Carlo divergence") {
  try {
    monte_carlo_divergence(1, 10, 50, 1);
    FAIL("expected DIMENSION_TOO_SMALL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionTooSmall);
  }
  CHECK_THROWS_AS(monte_carlo_divergence(9, 10, 50, 1), Error);
  CHECK_THROWS_AS(monte_carlo_divergence(2, 10001, 50, 1), Error);
  auto r = monte_carlo_divergence(3, 100, 300, 2024);
  CHECK(r.fraction >= 0.95);
  auto again = monte_carlo_divergence(3, 100, 300, 2024);
  CHECK(again.oscillation == r.oscillation);
}

TEST_CASE("stochastic 2x2 series") {
  auto idem = stochastic2x2_series({Mat{{0.5, 0.5}, {0.5, 0.5}}}, 10);
  CHECK(idem.series_value == doctest::Approx(0.5));
  CHECK(idem.direct_entry == doctest::Approx(0.5));

  auto geo = stochastic2x2_series({Mat{{0.9, 0.1}, {0.2, 0.8}}}, 50);
  CHECK(geo.gap < 1e-10);
  CHECK(geo.series_value == doctest::Approx(0.2 * (1 - std::pow(0.7, 50)) / 0.3));

  auto alt = stochastic2x2_series({Mat{{0.9, 0.1}, {0.2, 0.8}}, Mat{{0.3, 0.7}, {0.6, 0.4}}}, 60);
  CHECK(alt.gap < 1e-9);

  CHECK_THROWS_AS(stochastic2x2_series({Mat{{1.0, 0.0}, {0.2, 0.8}}}, 5), Error);
  CHECK_THROWS_AS(stochastic2x2_series({Mat{{0.5, 0.4}, {0.2, 0.8}}}, 5), Error);
}

TEST_CASE("property: image lies in the hull of the normalized columns") {
  std::mt19937_64 g(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 2 + trial % 4;
    MatrixFamily f;
    f.matrices = {random_nonneg(g, d, false), random_nonneg(g, d, true)};
    std::vector<double> c(d);
    for (auto& x : c) x = 0.1 + std::uniform_real_distribution<double>(0, 1)(g);
    auto t = run_trajectory(f, SymbolSequence::uniform(2, trial), 25, c);
    for (std::size_t n : {1u, 7u, 25u}) {
      const Mat& u = t.at(n).product.unit;
      // c_n = sum_j w_j col_j/||col_j|| with w_j = ||col_j|| c_j / ||P c||.
      std::vector<double> rebuilt(d, 0.0);
      double total = 0.0, pc = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) pc += u(i, j) * c[j];
      for (std::size_t j = 0; j < d; ++j) {
        double cn = 0.0;
        for (std::size_t i = 0; i < d; ++i) cn += u(i, j);
        if (cn == 0.0) continue;
        double w = cn * c[j] / pc;
        total += w;
        for (std::size_t i = 0; i < d; ++i) rebuilt[i] += w * u(i, j) / cn;
      }
      CHECK(total == doctest::Approx(1.0));
      CHECK(dist(rebuilt, t.at(n).image) < 1e-12);
    }
  }
}

TEST_CASE("property: lambda_n <= 1 and the norm telescopes") {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 2 + trial % 5;
    std::vector<Mat> factors;
    for (int n = 0; n < 40; ++n) factors.push_back(random_nonneg(g, d, trial % 2 == 0));
    ProductTrajectory t;
    try {
      t = run_product(factors);
    } catch (const Error&) {
      continue;  // a vanishing product is a legitimate outcome here
    }
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= t.depth(); ++n) {
      const auto& s = t.at(n);
      CHECK(s.lambda <= 1.0);
      CHECK(s.lambda > 0.0);
      log_sum += std::log(s.lambda) + s.factor_log_norm;
      double direct = n == 1 ? s.product.norm_log() : s.product.norm_log();
      CHECK(std::fabs(std::exp(log_sum - direct) - 1.0) < 1e-8);
    }
  }
  // Exact telescoping in rational arithmetic.
  std::vector<QMat> qs = {QMat{{1, 2}, {0, 3}}, QMat{{2, 1}, {1, 1}}, QMat{{1, 0}, {5, 1}}};
  QMat p = QMat::identity(2);
  mpq_class prod = 1;
  for (std::size_t n = 0; n < qs.size(); ++n) {
    QMat next = p * qs[n];
    mpq_class lam = n == 0 ? mpq_class(1) : entry_norm(next) / (entry_norm(p) * entry_norm(qs[n]));
    CHECK(lam <= 1);
    prod *= lam * entry_norm(qs[n]);
    CHECK(prod == entry_norm(next));
    p = next;
  }
}

TEST_CASE("property: rank-one collapse implies start-independent limits") {
  std::mt19937_64 g(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t d = 2 + trial % 3;
    MatrixFamily f;
    f.matrices = {random_nonneg(g, d, true), random_nonneg(g, d, true)};
    auto seq = SymbolSequence::uniform(2, 100 + trial);
    auto t = run_trajectory(f, seq, 200, std::vector<double>(d, 1.0));
    auto r = rank_one_diagnostic(t);
    if (r.verdict != RankVerdict::kRankOneCollapse) continue;
    std::vector<double> other(d);
    for (std::size_t i = 0; i < d; ++i) other[i] = 1.0 + i * 3.0;
    auto t2 = run_trajectory(f, seq, 200, other);
    double tol = 1e-8;
    auto a = limit_image(t, tol), b = limit_image(t2, tol);
    CHECK(dist(a.vector, b.vector) < 10 * tol);
  }
}

TEST_CASE("property: constant families never diverge") {
  std::mt19937_64 g(13);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixFamily f;
    f.matrices = {random_nonneg(g, 2 + trial % 4, true)};
    auto r = divergence_detector(f, SymbolSequence::uniform(1, 1), 40);
    CHECK(r.verdict == DivergenceVerdict::kInconclusive);
  }
}

TEST_CASE("property: series gap shrinks with depth") {
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Mat> fs;
    for (int i = 0; i < 3; ++i) {
      double x = u(g), y = u(g);
      fs.push_back(Mat{{x, 1 - x}, {y, 1 - y}});
    }
    double last = INFINITY;
    for (std::size_t depth : {5u, 20u, 80u}) {
      auto r = stochastic2x2_series(fs, depth);
      CHECK(r.gap <= std::max(last, 1e-14) + 1e-15);
      last = r.gap;
    }
    CHECK(last < 1e-12);
  }
}

TEST_CASE("trajectory CSV layout") {
  auto f = beta_family();
  auto t = run_trajectory(f, SymbolSequence::periodic({}, {0, 1, 2}, 3), 4);
  std::string csv = trajectory_csv(t);
  CHECK(csv.rfind("n,log_norm,det_normalized,delta1", 0) == 0);
  CHECK(csv.find(",c7\n") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
