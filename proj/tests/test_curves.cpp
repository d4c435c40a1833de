// test_curves.cpp
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
#include "matprod/curves.hpp"
#include "matprod/error.hpp"

using namespace matprod;

namespace {

const std::vector<double> kHat = {0.5, 1.0, 0.5};

std::vector<double> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = u(rng);
  return xs;
}

}  // namespace

TEST_CASE("build_refinement_matrices: index rule") {
  auto ind = build_refinement_matrices(2, {1, 1});
  CHECK(ind.q == 0);
  REQUIRE(ind.matrices.size() == 2);
  CHECK(ind.matrices[0] == Mat{{1}});
  CHECK(ind.matrices[1] == Mat{{1}});
  CHECK(ind.coeff_sum == 2.0);
  CHECK(ind.parity_balanced);
  CHECK(ind.seed_is_fixed);

  auto hat = build_refinement_matrices(2, kHat);
  CHECK(hat.q == 1);
  CHECK(hat.matrices[0] == Mat{{0.5, 0}, {0.5, 1}});
  CHECK(hat.matrices[1] == Mat{{1, 0.5}, {0, 0.5}});
  CHECK(hat.parity_balanced);
  CHECK(hat.seed[0] == doctest::Approx(0.5));
  CHECK(hat.seed[1] == doctest::Approx(0.5));

  auto three = build_refinement_matrices(3, {1, 2, 3, 2, 1});
  CHECK(three.q == 1);
  // B_2(1, 0) = c_{2 + 3 - 0} = c_5 = 0; B_2(1, 1) = c_4.
  CHECK(three.matrices[2](1, 0) == 0.0);
  CHECK(three.matrices[2](1, 1) == 1.0);
  CHECK_FALSE(three.parity_balanced);
}

TEST_CASE("sample_curve: scalar and hat systems") {
  auto ind = build_refinement_matrices(2, {1, 1});
  for (const auto& s : sample_curve(ind, random_points(20, 1), 30)) {
    CHECK(s.psi[0] == 1.0);
    CHECK(s.gap == 0.0);
  }

  auto hat = build_refinement_matrices(2, kHat);
  auto mid = sample_curve(hat, {0.5}, 40);
  CHECK(std::fabs(mid[0].psi[0] - 0.5) < 1e-8);
  CHECK(std::fabs(mid[0].psi[1] - 0.5) < 1e-8);
  // Hat function f(x) = x on [0,1], 2 - x on [1,2]: psi(x) = (x, 1 - x).
  for (const auto& s : sample_curve(hat, random_points(50, 2), 45)) {
    CHECK(std::fabs(s.psi[0] - s.x) < 1e-8);
    CHECK(std::fabs(s.psi[1] - (1 - s.x)) < 1e-8);
  }
}

TEST_CASE("sample_curve: psi(0) is the limit of B_0^n seed") {
  auto sys = build_refinement_matrices(2, {0.25, 0.75, 0.75, 0.25});
  std::vector<double> v = sys.seed;
  for (int n = 0; n < 2000; ++n) {
    std::vector<double> w(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) w[i] += sys.matrices[0](i, j) * v[j];
    v = w;
  }
  auto s = sample_curve(sys, {0.0}, 60);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(s[0].psi[i] == doctest::Approx(v[i]).epsilon(1e-9));
}

TEST_CASE("residual_checks: hat, scalar and broken endpoints") {
  auto hat = build_refinement_matrices(2, kHat);
  auto r = residual_checks(hat, random_points(50, 3), 40);
  CHECK(r.self_similarity_residual < 1e-8);
  CHECK(r.self_similar);
  REQUIRE(r.endpoint_gaps.size() == 1);
  CHECK(r.endpoint_gaps[0] < 1e-12);

  auto ind = residual_checks(build_refinement_matrices(2, {1, 1}), random_points(10, 4), 20);
  CHECK(ind.self_similarity_residual == 0.0);
  CHECK(ind.endpoint_gaps[0] == 0.0);

  auto broken_sys = build_refinement_matrices(2, {1, 0.5});
  CHECK_FALSE(broken_sys.seed_is_fixed);
  auto broken = residual_checks(broken_sys, random_points(10, 5), 20);
  CHECK(broken.endpoint_gaps[0] > 0.1);
}

TEST_CASE("curves property: Bernoulli densities integrate back to the stationary column") {
  struct Case {
    int k;
    std::vector<mpq_class> p;
  };
  std::vector<Case> cases = {
      {2, {mpq_class(1, 4), mpq_class(1, 2), mpq_class(1, 4)}},
      {3, {mpq_class(1, 9), mpq_class(2, 9), mpq_class(3, 9), mpq_class(2, 9), mpq_class(1, 9)}},
      {2, {mpq_class(1, 8), mpq_class(3, 8), mpq_class(3, 8), mpq_class(1, 8)}}};
  for (const auto& cs : cases) {
    BernoulliSpec spec = build_representation(cs.k, cs.p);
    std::vector<double> coeffs;
    for (const auto& x : spec.p) coeffs.push_back(cs.k * x.get_d());
    auto sys = build_refinement_matrices(cs.k, coeffs);
    REQUIRE(sys.seed_is_fixed);
    std::size_t d = sys.order();
    for (std::size_t i = 0; i < d; ++i)
      CHECK(sys.seed[i] == doctest::Approx(spec.c(i, 0).get_d()).epsilon(1e-12));

    // Left-endpoint Riemann sums on the level-n grid.
    int level = cs.k == 2 ? 14 : 9;
    std::size_t cells = 1;
    for (int j = 0; j < level; ++j) cells *= cs.k;
    std::vector<double> xs(cells);
    for (std::size_t m = 0; m < cells; ++m) xs[m] = static_cast<double>(m) / cells;
    std::vector<double> integral(d, 0.0);
    for (const auto& s : sample_curve(sys, xs, 40))
      for (std::size_t i = 0; i < d; ++i) integral[i] += s.psi[i] / cells;
    for (std::size_t i = 0; i < d; ++i) CHECK(std::fabs(integral[i] - spec.c(i, 0).get_d()) < 1e-4);

    auto r = residual_checks(sys, random_points(100, 6), 40);
    CHECK(r.self_similarity_residual <= 3 * r.max_truncation_gap + 1e-12);
  }
}

TEST_CASE("curves: errors") {
  CHECK_THROWS_AS(build_refinement_matrices(1, {1, 1}), Error);
  CHECK_THROWS_AS(build_refinement_matrices(2, {1}), Error);
  auto hat = build_refinement_matrices(2, kHat);
  CHECK_THROWS_AS(sample_curve(hat, {0.5}, 61), Error);
  CHECK_THROWS_AS(sample_curve(hat, {1.0}, 20), Error);
  CHECK_THROWS_AS(sample_curve(hat, {0.5}, 20, std::vector<double>{1, 2, 3}), Error);
}
