// triangular.hpp
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

#ifndef MATPROD_TRIANGULAR_HPP_
#define MATPROD_TRIANGULAR_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"
#include "matprod/trajectory.hpp"

namespace matprod {

// ---- block-triangular stabilization ----

struct BlockFormReport {
  std::size_t delta = 0;                      // stabilized number of distinct columns
  std::size_t n1 = 0;                         // first checkpoint
  std::vector<std::size_t> checkpoints;       // n_1 < n_2 < ...
  std::vector<std::vector<std::size_t>> partition;  // J_1 .. J_delta, 0-based
  SupportPattern pattern;                     // common Z(P_{n_k, n_l})
  bool t1_membership = false;                 // every checkpoint pair product in T^1_J
};

// Greedy (not lexicographically minimal) checkpoints. Throws kHorizonTooShort
// when the window maxima have not settled or fewer than three checkpoints fit.
BlockFormReport block_form_detect(const std::vector<Mat>& factors, std::size_t horizon);
BlockFormReport block_form_detect(const MatrixFamily& family, const SymbolSequence& seq,
                                  std::size_t horizon);

// True when every product in the list is block-triangular for the partition
// and each block has one distinct column.
bool in_T1(const SupportPattern& p, const std::vector<std::vector<std::size_t>>& partition);

// ---- 3x3 upper-triangular products ----

enum class Finiteness { kFinite, kInfinite, kInconclusive };
const char* finiteness_name(Finiteness f);

// Finite when the last-quarter increment is below 1e-9 of the value; infinite
// when the sum at least doubles over the last quarter or the last-quarter
// increment is at least the first-quarter increment; inconclusive otherwise.
Finiteness finiteness(const std::vector<double>& partial_sums);

template <class T>
struct SeriesValues {
  std::vector<T> a_star, d_star, f_star;  // entry n-1 describes P_n
  std::vector<T> s, t, u, tau;
};

struct TriangularSeries {
  std::vector<Mat> factors;
  SeriesValues<double> v;
  Finiteness s_fin = Finiteness::kInconclusive;
  Finiteness t_fin = Finiteness::kInconclusive;
  Finiteness u_fin = Finiteness::kInconclusive;
  Finiteness tau_fin = Finiteness::kInconclusive;
  bool monotone = true;           // s, t, u and tau/u nondecreasing
  double closed_form_error = 0.0; // max |closed - direct| / ||direct|| over n
  bool all_be_nonzero = true;     // b_n e_n != 0 for every n
};

TriangularSeries series3x3(const std::vector<Mat>& factors);

struct ExactSeriesCheck {
  SeriesValues<mpq_class> v;
  QMat closed;   // P_n from the series
  QMat direct;   // P_n by multiplication
  bool equal = false;
};

ExactSeriesCheck series3x3_exact(const std::vector<QMat>& factors);

// Closed form of P_n from the series at step n (1-based).
template <class T>
Matrix<T> closed_form_product(const SeriesValues<T>& v, std::size_t n) {
  std::size_t i = n - 1;
  Matrix<T> p(3, 3);
  p(0, 0) = v.a_star[i];
  p(0, 1) = v.d_star[i] * v.s[i];
  p(0, 2) = v.f_star[i] * (v.t[i] + v.tau[i]);
  p(1, 1) = v.d_star[i];
  p(1, 2) = v.f_star[i] * v.u[i];
  p(2, 2) = v.f_star[i];
  return p;
}

enum class LimitPrediction { kPredicted, kNoCommonLimit, kUndetermined };
const char* prediction_name(LimitPrediction p);

struct ClassifyReport {
  int case_id = 0;                   // 1..4
  std::string limit_point_shape;
  LimitPrediction prediction = LimitPrediction::kUndetermined;
  std::vector<double> predicted;     // normalized image limit when predicted
  double validation_gap = 0.0;       // max over test vectors of ||P_n v/||P_n v|| - predicted||
  std::vector<std::vector<double>> images;  // P_n v / ||P_n v|| at the last step
};

// Throws kInconclusiveFiniteness when the case cannot be decided.
ClassifyReport classify3x3_and_predict(const TriangularSeries& series,
                                       const std::vector<std::vector<double>>& test_vectors);

// ---- lower-triangular singular values ----

struct LowerTriReport {
  bool ratio_bounded = false;        // right side: entry ratios with j >= j'
  bool sv_column_match = false;      // left side: delta_k(n) comparable to ||P_n u_k||
  bool agree = false;
  std::vector<double> log_ratio_max;  // running max of the entry log ratio, per n
  std::vector<double> log_sv_gap_max; // running max over k of |log(delta_k / ||P_n u_k||)|
};

// Boundedness is read off the running maxima: bounded when the second half
// of the horizon raises the maximum by at most log 2.
LowerTriReport lower_tri_sv_check(const std::vector<Mat>& factors);

}  // namespace matprod

#endif  // MATPROD_TRIANGULAR_HPP_
