// factorize.hpp
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

#ifndef MATPROD_FACTORIZE_HPP_
#define MATPROD_FACTORIZE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"

namespace matprod {

// Token grammar over the three beta-case letters. Body templates (index 0..14)
// and head templates (index 0..6) read left to right as matrix products; the
// trailing letter of a template may repeat alpha times.
struct TokenTemplate {
  const char* fixed;  // fixed letters, e.g. "21"
  int repeat;         // letter raised to alpha, -1 when there is none
};

const std::vector<TokenTemplate>& body_templates();
const std::vector<TokenTemplate>& head_templates();

struct FactorToken {
  bool head = false;
  int template_index = 0;
  long alpha = 0;
  Word literal;

  std::string name() const;  // e.g. "M_2 M_1 M_0^3"
};

struct FactorizationResult {
  FactorToken head;                 // empty literal for the identity head
  std::vector<FactorToken> body;    // E_1 .. E_k, left to right
  std::vector<std::size_t> boundaries;  // start of head, of each body token, then |w|
};

// Right-to-left scan. Each step takes the shortest body-template suffix; every
// repeat block absorbs the whole trailing run of its letter. What remains must
// be a head template. Throws kNoFactorization otherwise.
FactorizationResult tokenize(const Word& w);

Word token_literal(bool head, int template_index, long alpha);

// 0/1 letters, or the letters scaled by 1/2, 1/4, 1/16.
QMat token_matrix_exact(const FactorToken& t, bool scaled = false);
Mat token_matrix(const FactorToken& t, bool scaled = false);

// Exact integer check that the token product equals the letter product and
// that the literals concatenate to w.
bool verify_factorization(const Word& w, const FactorizationResult& f);

struct StructureReport {
  bool triples_ok = true;           // every triple product has column 1, 3 or 5 in S
  std::vector<Word> triple_failures;
  bool stability_ok = true;         // M u_135 >= u_135
  std::vector<QMat> images_u135;    // M_i u_135
  bool closure_ok = true;           // product columns up to length 6 in S or S'
  std::vector<std::vector<long>> s_prime;          // computed closure (non-S columns)
  std::vector<std::vector<long>> s_prime_extra;    // computed, not in the printed list
  std::vector<std::vector<long>> s_prime_missing;  // printed, never produced
  bool blocks_ok = true;            // block words with 9 blocks map S into S_2
  std::size_t block_words = 0;
  std::vector<Word> block_failures;
  bool all_ok() const { return triples_ok && stability_ok && closure_ok && blocks_ok; }
};

// Exhaustive checks on the 0/1 letters. Block words use exponents up to
// max_block_exponent for the letters 0 and 2.
StructureReport structure_checks(int max_block_exponent = 4);

struct GrowthOptions {
  long alpha_cap = 40;
  std::size_t k_products = 100;
  std::size_t samples = 200;
  long sample_alpha_max = 8;
  std::uint64_t seed = 1;
};

struct GrowthReport {
  double max_Lambda_E = 0.0;
  FactorToken argmax_Lambda;
  double max_lambda_E = 0.0;
  FactorToken argmax_lambda;
  double Lambda_M2M0_4 = 0.0;
  double sup_Lambda_products = 0.0;
  long k0 = -1;                       // first k with lambda(E_1..E_k) <= 1/2, max over samples
  double Lambda_bound = 0.0;          // 2 max_Lambda_E 2^k0
  bool Lambda_bound_ok = true;
  mpz_class K_lemmaA7;                // max entry over products of 6 letters
  bool entry_floor_ok = true;         // some column in {1,3,5}: entries >= floor(k/15)
  bool entry_ceiling_ok = true;       // columns outside S: entries <= 12
  bool eq27_ok = true;                // corrected closed form of M_0^{4a}, a = 1..10
  std::vector<std::pair<int, int>> eq27_display_mismatch;  // 1-based, displayed vs actual
};

GrowthReport growth_and_bounds(const GrowthOptions& opts = {});

// Closed form of M_0^{4 alpha}.
QMat m0_power4_closed_form(long alpha);
// The displayed variant (first column alpha, other unit entries as printed).
QMat m0_power4_displayed(long alpha);

}  // namespace matprod

#endif  // MATPROD_FACTORIZE_HPP_
