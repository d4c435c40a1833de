// curves.hpp
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

#ifndef MATPROD_CURVES_HPP_
#define MATPROD_CURVES_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"

namespace matprod {

// Matrices of the lattice two-scale difference equation
// f(x) = sum_n c_n f(kx - n), with B_i(h, j) = c_{i + k h - j}.
struct RefinementSystem {
  int base = 2;
  std::vector<double> coeffs;   // c_0 .. c_N
  int N = 0;
  int q = 0;                    // ceil(N/(k-1)) - 1
  std::vector<Mat> matrices;    // B_0 .. B_{k-1}, order q+1
  double coeff_sum = 0.0;
  bool parity_balanced = false; // k = 2 only: even and odd coefficient sums agree
  // Fixed vector of sum_i B_i / k normalized to sum 1, or all ones / (q+1)
  // when there is none (seed_is_fixed false).
  std::vector<double> seed;
  bool seed_is_fixed = false;

  std::size_t order() const { return static_cast<std::size_t>(q) + 1; }
};

RefinementSystem build_refinement_matrices(int k, const std::vector<double>& coeffs);

// Base-k digits of x in [0,1); values within 1e-12 of a digit boundary snap up
// so that terminating expansions stay terminating.
Word base_digits(double x, int k, std::size_t depth);

struct CurveSample {
  double x = 0.0;
  std::vector<double> psi;   // B_{x_1} ... B_{x_depth} seed
  double gap = 0.0;          // L1 distance to the depth-5 truncation
};

// depth in 6..60.
std::vector<CurveSample> sample_curve(const RefinementSystem& sys, const std::vector<double>& xs,
                                      std::size_t depth,
                                      const std::optional<std::vector<double>>& seed = {});

struct ResidualReport {
  double self_similarity_residual = 0.0;  // max_x ||psi(x) - B_i psi(kx - i)||
  double max_truncation_gap = 0.0;
  std::vector<double> endpoint_gaps;      // i = 0 .. k-2
  bool self_similar = false;              // residual <= 3 * gap + 1e-12
};

// psi(kx - i) reuses the digits x_2 .. x_{depth+1} of x, so both sides use
// one expansion. Endpoint limits use 'power' factors of B_{k-1} or B_0.
ResidualReport residual_checks(const RefinementSystem& sys, const std::vector<double>& xs,
                               std::size_t depth,
                               const std::optional<std::vector<double>>& seed = {},
                               std::size_t power = 400);

}  // namespace matprod

#endif  // MATPROD_CURVES_HPP_
