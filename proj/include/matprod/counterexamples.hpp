// counterexamples.hpp
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
//
// Exact reproductions of three explicit product constructions: a 2x2 product
// whose normalized determinant stays bounded away from zero, a 3x3 unipotent
// product with two limit directions, and a 2x2 family whose limit image is
// discontinuous in the sequence.

#ifndef MATPROD_COUNTEREXAMPLES_HPP_
#define MATPROD_COUNTEREXAMPLES_HPP_

#include <cstddef>
#include <vector>

#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"

namespace matprod {

// Letters of the 2x2 construction: 0 = diag(1/2, 1), 1 = [[1,1],[1,0]].
const std::vector<QMat>& ce12_letters();

struct CE12Build {
  std::size_t K = 0;
  std::vector<long> n;        // n_1 .. n_K
  std::vector<long> s;        // s_k = sum_{i<=k} (n_i + 1)
  std::vector<long> h;        // h_1 .. h_K
  std::vector<QMat> v;        // v_0 .. v_K (2x1)
  std::vector<mpq_class> det;  // |det(P_n/||P_n||)| at n = s_k + h_k
  std::vector<double> sv_ratio;  // delta_2/delta_1 there, float
  mpq_class p_upper;          // rational upper bound of prod_j (1 + 2^-j)
  mpq_class bound;            // 1 / (9 p_upper)
  bool recurrence_ok = true;
  bool norm_ok = true;
  bool ratio_ok = true;
  bool window_ok = true;      // h_k <= n_{k+1}
  bool certificates_ok = true;

  // Letters of P_{s_K + h_K}.
  Word word() const;
};

// Minimal exponents: n_1 = 1, then the least n_k >= max(1, h_{k-1}) meeting
// the norm inequality. Throws kSearchExhausted past 10^4.
CE12Build ce12_build_and_verify(std::size_t K);

// Upper bound of prod_{j>=0} (1 + 2^-j): the first 41 factors times
// 1 + 2^-38 >= exp(2^-39).
mpq_class ce12_p_upper();

struct CE13Report {
  std::size_t k = 0;
  QMat product;                  // prod_{i=1}^k A^{2^i} B^{2^i}
  bool closed_form_match = false;
  QMat extended;                 // product times A^{2^{k+1}}
  bool extended_match = false;
  std::vector<std::vector<double>> centroids;  // limit points of c_n
  // Over n in [n_lo, n_hi]: min and max of delta_1/n, delta_2, n delta_3.
  double d1_over_n[2] = {0, 0};
  double d2[2] = {0, 0};
  double n_d3[2] = {0, 0};
};

struct CE13Options {
  std::size_t centroid_levels = 26;  // checkpoint levels used for c_n
  std::size_t tail_levels = 3;       // deepest levels that enter the centroids
  std::size_t n_lo = 50;
  std::size_t n_hi = 400;
};

const std::vector<QMat>& ce13_letters();  // A, B
// A^2 B^2 A^4 B^4 ... as a symbol sequence (0 = A, 1 = B).
Word ce13_word(std::size_t levels);
CE13Report ce13_verify(std::size_t k, const CE13Options& opts = {});

struct CE22Report {
  std::vector<double> limit_11;  // lim M_1^n c
  std::vector<double> limit_12;  // lim_m lim_n M_1^m M_2^n c
  double distance = 0.0;
  bool uniform = true;
};

// p = (p_0, p_1, p_2, p_3), base 3.
CE22Report ce22_limits(const std::vector<double>& p);

}  // namespace matprod

#endif  // MATPROD_COUNTEREXAMPLES_HPP_
