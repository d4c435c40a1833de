// gibbs.hpp
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

#ifndef MATPROD_GIBBS_HPP_
#define MATPROD_GIBBS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "matprod/bernoulli.hpp"
#include "matprod/trajectory.hpp"

namespace matprod {

// Representation of nu_{k,p}(. + h) restricted to [0,1): row vectors
// u_h M_i / c_h, the spec's matrices and terminal c.
MatrixFamily gibbs_family(const BernoulliSpec& spec, int h = 0);

struct GibbsOptions {
  std::size_t tail_depth = 64;  // symbols used to approximate c_{sigma^k w}
  std::size_t n_min = 1;
  std::size_t n_max = 20;
};

struct GibbsReport {
  std::vector<double> potential;   // Phi(sigma^k w), k = 0 .. n_max-1
  std::vector<double> ratio_root;  // entry n-1: (nu[w_1..w_n] / exp sum Phi)^(1/n)
  double sup_deviation = 0.0;      // max |ratio_root - 1| over [n_min, n_max]
  // Continuity probe: max_k |Phi with tail_depth - Phi with tail_depth/2|.
  double potential_oscillation = 0.0;
};

// The word needs at least n_max + tail_depth symbols. Throws kZeroImage when
// some M_i c_{sigma w, tail} has norm below 1e-12.
GibbsReport potential_and_ratio(const MatrixFamily& family, const Word& w,
                                const GibbsOptions& opts = {});

struct TheoremB3Options {
  double tol = 1e-3;
  double floor = 1e-9;
  UniformProbeOptions probe;  // probe.depth is replaced by the check depth
};

struct TheoremB3Report {
  double cond1_sup_gap = 0.0;    // uniform-convergence probe at level depth/2
  double cond2_root_gap = 0.0;   // max |(r_i c_{w,depth})^(1/depth) - 1|
  double cond3_min_image = 0.0;  // min ||M_i c_{w,depth}||
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  bool verdict = false;
};

// Statistics are taken over the supplied words only; each needs at least
// depth symbols.
TheoremB3Report theoremB3_check(const MatrixFamily& family,
                                const std::vector<Word>& samples,
                                std::size_t depth,
                                const TheoremB3Options& opts = {});

struct Condition24Series {
  std::vector<double> g;          // entry n-1: g_n
  double rate = 0.0;              // ratio of the last two successive differences
  double limit_estimate = 0.0;    // exp(n log g_n - (n-1) log g_{n-1}) at n_max
};

// g_n = (nu[r^n (r+1)^n] / (nu[r^n] nu[(r+1)^n]))^(1/n) for nu = nu_{k,p}(. + h).
Condition24Series condition24_probe(const BernoulliSpec& spec, std::size_t n_max,
                                    int h = 0);

struct ScaleSpectrum {
  std::vector<double> q;
  std::vector<double> tau;        // tau_n(q)
  std::vector<double> alpha;
  std::vector<double> legendre;   // min over q of (alpha q - tau(q))
  std::size_t cylinders = 0;      // cylinders of positive measure
};

// Natural cylinder partition at level n of a b-adic family with row vectors
// and terminal vector; b^n must not exceed 2^24.
ScaleSpectrum scale_spectrum_and_legendre(const MatrixFamily& family,
                                          const std::vector<double>& q_grid,
                                          std::size_t level,
                                          const std::vector<double>& alpha_grid = {});
ScaleSpectrum scale_spectrum_and_legendre(const BernoulliSpec& spec,
                                          const std::vector<double>& q_grid,
                                          std::size_t level,
                                          const std::vector<double>& alpha_grid = {},
                                          int h = 0);

// Parses "lo:hi:step" into an inclusive grid.
std::vector<double> parse_grid(const std::string& text);

}  // namespace matprod

#endif  // MATPROD_GIBBS_HPP_
