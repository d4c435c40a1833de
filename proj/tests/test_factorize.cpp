// test_factorize.cpp
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

#include <random>

#include "doctest.h"
#include "matprod/bernoulli.hpp"
#include "matprod/error.hpp"
#include "matprod/factorize.hpp"

using namespace matprod;

namespace {

FactorizationResult tok(const std::string& s) { return tokenize(parse_word(s, 3)); }

}  // namespace

TEST_CASE("tokenize: worked examples") {
  auto a = tok("00000");
  CHECK(a.head.literal == Word(5, 0));
  CHECK(a.head.template_index == 0);
  CHECK(a.head.alpha == 5);
  CHECK(a.body.empty());

  auto b = tok("010");
  CHECK(b.head.literal.empty());
  REQUIRE(b.body.size() == 1);
  CHECK(b.body[0].template_index == 0);
  CHECK(b.body[0].alpha == 1);
  CHECK(b.body[0].name() == "M_0 M_1 M_0^1");

  auto c = tok("1");
  CHECK(c.head.literal.empty());
  REQUIRE(c.body.size() == 1);
  CHECK(c.body[0].template_index == 4);
  CHECK(c.head.name() == "I");

  auto d = tok("1100000101211000001012");
  std::vector<std::string> names;
  for (const auto& t : d.body) names.push_back(t.name());
  CHECK(names == std::vector<std::string>{"M_1 M_1 M_0^5", "M_1", "M_0 M_1 M_2^1",
                                          "M_1 M_1 M_0^5", "M_1", "M_0 M_1 M_2^1"});
  CHECK(d.boundaries.front() == 0);
  CHECK(d.boundaries.back() == 22);
}

TEST_CASE("tokenize: every head template appears") {
  std::vector<std::pair<std::string, int>> cases = {
      {"000", 0}, {"100", 1}, {"222", 2}, {"022", 3}, {"1022", 4}, {"01022", 5}, {"122", 6}};
  for (const auto& [w, idx] : cases) {
    auto f = tok(w);
    CHECK(f.body.empty());
    CHECK(f.head.template_index == idx);
  }
}

TEST_CASE("tokenize: errors") {
  CHECK_THROWS_AS(tokenize(Word{}), Error);
  CHECK_THROWS_AS(tokenize(Word{0, 3}), Error);
}

TEST_CASE("tokenize round trip with exact product equality (property)") {
  std::mt19937_64 gen(2024);
  for (int s = 0; s < 1000; ++s) {
    std::size_t n = 1 + gen() % 300;
    Word w(n);
    for (auto& x : w) x = static_cast<int>(gen() % 3);
    auto f = tokenize(w);
    CHECK(verify_factorization(w, f));
    for (const auto& t : f.body) {
      CHECK(t.literal == token_literal(false, t.template_index, t.alpha));
      if (body_templates()[static_cast<std::size_t>(t.template_index)].repeat >= 0)
        CHECK(t.alpha >= 1);
    }
  }
}

TEST_CASE("verify_factorization rejects tampered results") {
  Word w = parse_word("0122100", 3);
  auto f = tokenize(w);
  CHECK(verify_factorization(w, f));
  auto g = f;
  g.body.back().alpha += 1;
  CHECK_FALSE(verify_factorization(w, g));
  CHECK_FALSE(verify_factorization(parse_word("0122101", 3), f));
}

TEST_CASE("token matrices") {
  FactorToken e;  // empty head
  e.head = true;
  CHECK(token_matrix_exact(e) == QMat::identity(7));

  FactorToken p;
  p.head = true;
  p.template_index = 0;
  p.alpha = 4;
  CHECK(token_matrix_exact(p) == m0_power4_closed_form(1));

  // M_1 M_0^2 M_1 M_0^2 has rank one.
  Word w = parse_word("100100", 3);
  QMat m = QMat::identity(7);
  for (const auto& t : tokenize(w).body) m = m * token_matrix_exact(t);
  m = tokenize(w).head.literal.empty() ? m : token_matrix_exact(tokenize(w).head) * m;
  auto sv = singular_values(to_float(m));
  CHECK(sv[0] > 0.1);
  CHECK(sv[1] < 1e-12);

  // Scaled convention multiplies by 1/2, 1/4, 1/16 per letter.
  FactorToken t;
  t.template_index = 3;  // M_2 M_0^alpha
  t.alpha = 2;
  CHECK(token_matrix_exact(t, true) == token_matrix_exact(t) * mpq_class(1, 64));
}

TEST_CASE("M_0^{4 alpha} closed form") {
  const QMat& m0 = beta_letter_matrices()[0];
  for (long a = 1; a <= 10; ++a)
    CHECK(power(m0, static_cast<unsigned long>(4 * a)) == m0_power4_closed_form(a));
  CHECK(power(m0, 4) != m0_power4_displayed(1));
}

TEST_CASE("structure checks") {
  auto r = structure_checks(2);
  CHECK(r.triples_ok);
  CHECK(r.stability_ok);
  CHECK(r.closure_ok);
  CHECK(r.blocks_ok);
  CHECK(r.block_words > 0);
  CHECK(r.all_ok());
  // M_2 u_135 with the corrected M_2.
  CHECK(r.images_u135[2] == QMat::column({2, 0, 1, 1, 1, 0, 0}));
  // Single letters: every column is in S or S'.
  for (const auto& m : beta_letter_matrices())
    for (std::size_t j = 0; j < 7; ++j) {
      std::vector<long> v;
      bool s = true;
      for (std::size_t i = 0; i < 7; ++i) {
        v.push_back(m(i, j).get_num().get_si());
        if ((i == 0 || i == 2 || i == 4) && m(i, j) < 1) s = false;
      }
      bool listed = std::find(r.s_prime.begin(), r.s_prime.end(), v) != r.s_prime.end();
      CHECK((s || listed));
    }
  CHECK(r.s_prime.size() == 19);
  CHECK(r.s_prime_missing.size() == 2);
}

TEST_CASE("growth and bounds") {
  auto g = growth_and_bounds(GrowthOptions{40, 100, 50, 8, 1});
  CHECK(g.Lambda_M2M0_4 == 3.0);
  CHECK(g.max_lambda_E == 2.0);
  CHECK(g.max_Lambda_E >= 3.0);
  CHECK(g.K_lemmaA7 == 11);
  CHECK(g.entry_floor_ok);
  CHECK(g.entry_ceiling_ok);
  CHECK(g.Lambda_bound_ok);
  CHECK(g.sup_Lambda_products < g.Lambda_bound);
  CHECK(g.eq27_ok);
  CHECK(g.eq27_display_mismatch.size() == 12);
  CHECK_THROWS_AS(growth_and_bounds(GrowthOptions{5, 100, 10, 8, 1}), Error);
  CHECK_THROWS_AS(growth_and_bounds(GrowthOptions{40, 201, 10, 8, 1}), Error);
}
