// bernoulli.hpp
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
// Matrix representations of Bernoulli convolutions: integer bases, the
// Markov-chain representation and the three-letter representation attached
// to the real root of b^3 = 2b^2 - b + 1.

#ifndef MATPROD_BERNOULLI_HPP_
#define MATPROD_BERNOULLI_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"
#include "matprod/trajectory.hpp"

namespace matprod {

struct BernoulliSpec {
  int base = 2;                  // k
  std::vector<mpq_class> p;      // p_0 .. p_N
  int N = 0;
  int q = 0;                     // ceil(N/(k-1)) - 1; matrices have order q+1
  int r = 0;                     // N - (k-1) q, in 1..k-1
  std::vector<QMat> matrices;    // M_i(h, j) = p_{i + k h - j}
  std::vector<QMat> blocks;      // q x q blocks M'_i (empty when q = 0)
  std::vector<QMat> block_vectors;  // the column v_i next to each block
  QMat c;                        // stationary column, total mass 1
  double rho_r = 0.0;            // spectral radius of M'_r
  bool divisible = false;        // (k-1) | N
  bool condition_H = false;      // p_N <= rho_r or divisible

  std::size_t order() const { return static_cast<std::size_t>(q) + 1; }
  std::vector<Mat> float_matrices() const;
  // Float family with terminal vector c (no row vectors).
  MatrixFamily family() const;
};

// k >= 2, p positive summing to 1, N >= k except the scalar case N = k - 1.
// Throws kEigenvalueNotOne when sum_i M_i has no nonnegative fixed vector.
BernoulliSpec build_representation(int k, std::vector<mpq_class> p);

// t(u_{h+1}) M_{i_1} ... M_{i_n} c.
mpq_class cylinder_measure_exact(const BernoulliSpec& spec, const Word& w, int h = 0);
double cylinder_measure(const BernoulliSpec& spec, const Word& w, int h = 0);

// [h + sum i_j k^-j, h + sum i_j k^-j + k^-n)
std::pair<mpq_class, mpq_class> cylinder_interval(int k, const Word& w, int h = 0);

// Remark-style Markov chain representation; exact.
QMatrixFamily markov_representation(const QMat& transition, const QMat& initial);
// r_{w_1} M_{w_2} ... M_{w_n} c for a family with row vectors.
mpq_class representation_measure(const QMatrixFamily& f, const Word& w);
double representation_measure(const MatrixFamily& f, const Word& w);

struct BetaSpec {
  double beta = 0.0;
  std::array<Word, 3> words;          // 0, 10, 1100
  std::vector<QMat> letters;          // 0/1 letter matrices (order 7)
  std::vector<QMat> matrices;         // letters scaled by 1/2, 1/4, 1/16
  QMat c;                             // (12,8,13,4,12,6,4)/20
  std::array<double, 7> translates{}; // 0, b-1, 1/b^2, (1-b)/b, 1/b, (b+1)/b^2, 1

  // Float family: scaled matrices, terminal c and the row selectors
  // u_1, u_3/2, u_5/8.
  MatrixFamily family() const;
};

const BetaSpec& beta_representation();
// Root of b^3 - 2b^2 + b - 1 on [1.7, 1.8] by bisection.
double beta_root();
// The 0/1 letter matrices, shared with the factorization module.
const std::vector<QMat>& beta_letter_matrices();

mpq_class beta_cylinder_measure_exact(const Word& w);
double beta_cylinder_measure(const Word& w);
Word substitute_word(const Word& w);
// [sum e_i b^-i, b^-m + sum e_i b^-i) for the substituted word e.
std::pair<double, double> beta_interval(const Word& w);

struct WordPositivityReport {
  std::vector<bool> row_positive;
  bool interior_rows_positive = true;  // rows other than first and last
  bool first_row_positive = false;
  bool first_row_predicted = false;    // w_1 != 0
  bool last_row_positive = false;
  bool last_row_predicted = false;     // w_1 < r
  mpq_class K;                         // over all words of length q+1
  bool sandwich_checked = false;       // only for length q+1
  bool sandwich_full_case = false;     // (w_1,w_2) = (0,r) or 0 < w_1 < r
  bool sandwich_rows_case = false;     // w_1 != 0
  bool sandwich_holds = true;
  bool claims_hold = true;             // all stated implications verified
};

// Throws kWordTooShort when |w| < q.
WordPositivityReport word_positivity(const BernoulliSpec& spec, const Word& w);

struct EnumerationBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool exhaustive = true;
  std::size_t samples = 0;
};

// Probability that sum_n w_n k^-n lies in [lo, hi), digits i.i.d. with law p,
// bracketed by truncating at T digits. Exhaustive (aggregated by value) when
// the value grid fits in memory, else Monte Carlo with a Hoeffding margin.
EnumerationBracket enumeration_oracle(int k, const std::vector<double>& p,
                                      int T, const mpq_class& lo,
                                      const mpq_class& hi,
                                      std::size_t samples = 1000000,
                                      std::uint64_t seed = 1);

// Reusable exhaustive distribution for many queries.
class DigitDistribution {
 public:
  DigitDistribution(int k, const std::vector<double>& p, int T);
  EnumerationBracket bracket(const mpq_class& lo, const mpq_class& hi) const;
  static bool feasible(int k, std::size_t N, int T);

 private:
  int k_;
  int T_;
  std::size_t N_;
  mpz_class scale_;            // k^T
  std::vector<double> cdf_;    // cdf_[y] = P(value * k^T < y)
};

}  // namespace matprod

#endif  // MATPROD_BERNOULLI_HPP_
