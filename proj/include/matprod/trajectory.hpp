// trajectory.hpp
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
// Products P_n = A_1 ... A_n along a symbol sequence, and the convergence and
// divergence diagnostics run on them.

#ifndef MATPROD_TRAJECTORY_HPP_
#define MATPROD_TRAJECTORY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matprod/linalg.hpp"
#include "matprod/sequence.hpp"

namespace matprod {

// An indexed set of square nonnegative matrices, optionally with the row
// vectors and terminal column vector of a linear representation
//   mu[w_1 ... w_n] = r_{w_1} M_{w_2} ... M_{w_n} c.
struct MatrixFamily {
  std::vector<Mat> matrices;
  std::vector<Mat> row_vectors;  // empty or one 1 x d row per symbol
  std::optional<Mat> terminal;   // d x 1

  std::size_t alphabet() const { return matrices.size(); }
  std::size_t order() const { return matrices.empty() ? 0 : matrices[0].rows(); }
  // Throws kInvalidArgument on shape or sign problems; when row vectors and
  // the terminal vector are both present also checks sum_i r_i c = 1 and
  // sum_i M_i c = c within tol.
  void validate(double tol = 1e-10) const;
};

struct QMatrixFamily {
  std::vector<QMat> matrices;
  std::vector<QMat> row_vectors;
  std::optional<QMat> terminal;

  void validate() const;  // exact normalization checks
  MatrixFamily to_float() const;
};

struct TrajectoryStep {
  ScaledMat product;               // P_n
  std::vector<double> image;       // P_n c / ||P_n c||, empty without c
  std::vector<double> singular;    // of P_n / ||P_n||, descending
  double det_normalized = 0.0;     // det(P_n / ||P_n||)
  double lambda = 1.0;             // ||P_n|| / (||P_{n-1}|| ||A_n||), 1 at n = 1
  double factor_log_norm = 0.0;    // log ||A_n||
};

struct ProductTrajectory {
  std::size_t order = 0;
  Word symbols;                    // empty for raw factor lists
  std::vector<Mat> factors;        // A_1 .. A_depth
  std::vector<TrajectoryStep> steps;  // steps[n-1] describes P_n
  std::vector<double> start;       // the vector c used for images

  std::size_t depth() const { return steps.size(); }
  bool has_image() const { return !start.empty(); }
  const TrajectoryStep& at(std::size_t n) const { return steps.at(n - 1); }
};

struct TrajectoryOptions {
  bool singular_values = true;
};

// Start vector overrides the family's terminal vector; both optional.
ProductTrajectory run_trajectory(const MatrixFamily& family,
                                 const SymbolSequence& seq, std::size_t depth,
                                 const std::optional<std::vector<double>>& start = {},
                                 const TrajectoryOptions& opts = {});
ProductTrajectory run_product(const std::vector<Mat>& factors,
                              const std::optional<std::vector<double>>& start = {},
                              const TrajectoryOptions& opts = {});

// Exact product of the family matrices along a word (identity when empty).
QMat exact_product(const std::vector<QMat>& mats, const Word& w);

std::string trajectory_csv(const ProductTrajectory& t);

enum class RankVerdict { kRankOneCollapse, kPersistentRank2, kInconclusive };
const char* rank_verdict_name(RankVerdict v);

struct RankOneOptions {
  double tol_collapse = 1e-6;
  double floor_persist = 1e-3;
  double window = 0.2;  // trailing fraction of the depth
  // When set, the verdict is taken over these steps instead of the window.
  std::vector<std::size_t> checkpoints;
};

struct RankOneReport {
  std::vector<double> ratio_series;  // delta_2 / delta_1 per step
  std::vector<double> det_series;
  RankVerdict verdict = RankVerdict::kInconclusive;
  double window_min = 0.0;
  double window_max = 0.0;
};

RankOneReport rank_one_diagnostic(const ProductTrajectory& t,
                                  const RankOneOptions& opts = {});

struct LimitImage {
  std::vector<double> vector;
  std::size_t achieved_at = 0;  // first n with ||c_m - c_depth|| < tol/2 for all m >= n
  double cauchy_gap = 0.0;      // sup of pairwise gaps over the trailing window
  bool converged = false;
};

// Non-throwing form; limit_image throws kNotConverged when the gap is >= tol.
LimitImage image_window_gap(const ProductTrajectory& t, double tol,
                            double window = 0.2);
LimitImage limit_image(const ProductTrajectory& t, double tol,
                       double window = 0.2);

struct UniformProbeOptions {
  std::size_t extension_samples = 64;
  std::size_t depth = 300;
  std::size_t exhaust_len = 3;  // all extensions of this length come first
  std::uint64_t seed = 1;
};

// Entry n-1 estimates sup over sampled xi in [w_1..w_n] and p, q in [n, depth]
// of ||c_{xi,p} - c_{xi,q}||. Requires the family's terminal vector, positive.
std::vector<double> uniform_convergence_probe(const MatrixFamily& family,
                                              const Word& prefix,
                                              const UniformProbeOptions& opts);

// Same estimate over random prefixes of length prefix_len: the profile is the
// entrywise max over prefixes.
std::vector<double> uniform_convergence_sweep(const MatrixFamily& family,
                                              std::size_t prefixes,
                                              std::size_t prefix_len,
                                              const UniformProbeOptions& opts);

struct H2Violation {
  std::size_t window = 0;  // k: the product over (n_k, n_{k+1}]
  std::size_t i = 0, ip = 0, j = 0, jp = 0;
  bool antidiagonal = false;
};

struct Theorem15Options {
  double pattern_tol = 1e-9;
  double pattern_floor = 1e-3;
  std::vector<std::vector<double>> test_vectors;
};

struct Theorem15Report {
  double h1_min = 0.0;
  std::size_t h1_argmin = 0;
  std::vector<H2Violation> h2_violations;
  std::vector<double> v_membership;  // inf_n ||P_n v|| / ||P_n|| per test vector
};

// Checkpoints n_0 < n_1 < ... (n_0 = 0 allowed) within the depth.
Theorem15Report theorem15_check(const ProductTrajectory& t,
                                const std::vector<std::size_t>& checkpoints,
                                const Theorem15Options& opts = {});

enum class DivergenceVerdict { kDiverges, kInconclusive };
const char* divergence_verdict_name(DivergenceVerdict v);

struct LimitPointCluster {
  Mat centroid;  // unit entry norm
  std::size_t count = 0;
  std::size_t last_index = 0;  // 1-based position of the last member
};

struct DivergenceOptions {
  double radius = 1e-3;
  double eigen_tol = 1e-8;
  double window = 0.2;  // a cluster is a limit point if it recurs in this tail
};

struct DivergenceReport {
  std::vector<LimitPointCluster> clusters;
  std::vector<std::size_t> limit_points;  // indices into clusters
  std::vector<double> residual_series;    // ||r (A_n/||A_n|| - lambda_n I)|| / ||r||
  CommonLeftEigen common;
  // For each pair of limit points (a, b): whether they share a left eigenvector.
  std::vector<std::pair<std::size_t, std::size_t>> pairs_sharing;
  DivergenceVerdict verdict = DivergenceVerdict::kInconclusive;
};

DivergenceReport divergence_detector(const std::vector<Mat>& factors,
                                     const DivergenceOptions& opts = {});
DivergenceReport divergence_detector(const MatrixFamily& family,
                                     const SymbolSequence& seq,
                                     std::size_t depth,
                                     const DivergenceOptions& opts = {});

struct MonteCarloOptions {
  double osc_floor = 1e-3;
  double window = 0.2;
};

struct MonteCarloReport {
  std::size_t trials = 0;
  std::size_t diverging = 0;
  double fraction = 0.0;
  std::vector<double> oscillation;  // per trial
};

// i.i.d. standard complex normal entries (real and imaginary parts
// independent). d must be in [2, 8]; d = 1 throws kDimensionTooSmall.
MonteCarloReport monte_carlo_divergence(std::size_t d, std::size_t trials,
                                        std::size_t depth, std::uint64_t seed,
                                        const MonteCarloOptions& opts = {});

struct Stochastic2x2Report {
  double series_value = 0.0;
  double direct_entry = 0.0;
  double gap = 0.0;
};

// Factors S_1, S_2, ... (cycled when shorter than depth), left product
// S_depth ... S_1.
Stochastic2x2Report stochastic2x2_series(const std::vector<Mat>& factors,
                                         std::size_t depth);

}  // namespace matprod

#endif  // MATPROD_TRAJECTORY_HPP_
