// curves.cpp
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

#include "matprod/curves.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "matprod/error.hpp"

namespace matprod {

namespace {

std::vector<double> mat_apply(const Mat& m, const std::vector<double>& v) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

double dist1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

// B_{d_from} ... B_{d_to - 1} seed.
std::vector<double> product_image(const RefinementSystem& sys, const Word& d, std::size_t from,
                                  std::size_t to, const std::vector<double>& seed) {
  std::vector<double> v = seed;
  for (std::size_t j = to; j-- > from;) v = mat_apply(sys.matrices[d[j]], v);
  return v;
}

const std::vector<double>& pick_seed(const RefinementSystem& sys,
                                     const std::optional<std::vector<double>>& seed) {
  if (seed) {
    if (seed->size() != sys.order())
      throw Error(ErrorCode::kInvalidArgument, "seed length must equal the matrix order");
    return *seed;
  }
  return sys.seed;
}

}  // namespace

RefinementSystem build_refinement_matrices(int k, const std::vector<double>& coeffs) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "base must be at least 2");
  if (coeffs.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two coefficients");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidArgument, "coefficients must be finite");
  RefinementSystem s;
  s.base = k;
  s.coeffs = coeffs;
  s.N = static_cast<int>(coeffs.size()) - 1;
  s.q = (s.N + k - 2) / (k - 1) - 1;
  auto c = [&](int n) { return n >= 0 && n <= s.N ? coeffs[n] : 0.0; };
  std::size_t d = s.order();
  for (int i = 0; i < k; ++i) {
    Mat b(d, d);
    for (int h = 0; h <= s.q; ++h)
      for (int j = 0; j <= s.q; ++j) b(h, j) = c(i + k * h - j);
    s.matrices.push_back(b);
  }
  double even = 0.0, odd = 0.0;
  for (int n = 0; n <= s.N; ++n) (n % 2 ? odd : even) += coeffs[n];
  s.coeff_sum = even + odd;
  s.parity_balanced = k == 2 && std::fabs(even - odd) <= 1e-12 * std::max(1.0, std::fabs(s.coeff_sum));

  // Fixed vector of the averaged matrix.
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(d, d);
  for (const auto& b : s.matrices)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) avg(i, j) += b(i, j) / k;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(avg - Eigen::MatrixXd::Identity(d, d));
  lu.setThreshold(1e-10);
  Eigen::MatrixXd ker = lu.kernel();
  if (lu.dimensionOfKernel() == 1) {
    double sum = ker.col(0).sum();
    if (std::fabs(sum) > 1e-12) {
      s.seed.resize(d);
      for (std::size_t i = 0; i < d; ++i) s.seed[i] = ker(i, 0) / sum;
      s.seed_is_fixed = true;
    }
  }
  if (!s.seed_is_fixed) s.seed.assign(d, 1.0 / static_cast<double>(d));
  return s;
}

Word base_digits(double x, int k, std::size_t depth) {
  if (!(x >= 0.0 && x < 1.0)) throw Error(ErrorCode::kInvalidArgument, "x must lie in [0,1)");
  Word d;
  d.reserve(depth);
  long double y = x;
  for (std::size_t j = 0; j < depth; ++j) {
    y *= k;
    long double f = std::floor(y + 1e-12L);
    if (f > k - 1) f = k - 1;
    d.push_back(static_cast<int>(f));
    y -= f;
    if (y < 0) y = 0;
  }
  return d;
}

std::vector<CurveSample> sample_curve(const RefinementSystem& sys, const std::vector<double>& xs,
                                      std::size_t depth,
                                      const std::optional<std::vector<double>>& seed) {
  if (depth < 6 || depth > 60) throw Error(ErrorCode::kInvalidArgument, "depth must be in 6..60");
  const auto& c = pick_seed(sys, seed);
  std::vector<CurveSample> out;
  out.reserve(xs.size());
  for (double x : xs) {
    Word d = base_digits(x, sys.base, depth);
    CurveSample s;
    s.x = x;
    s.psi = product_image(sys, d, 0, depth, c);
    s.gap = dist1(s.psi, product_image(sys, d, 0, depth - 5, c));
    out.push_back(std::move(s));
  }
  return out;
}

ResidualReport residual_checks(const RefinementSystem& sys, const std::vector<double>& xs,
                               std::size_t depth, const std::optional<std::vector<double>>& seed,
                               std::size_t power) {
  if (depth < 6 || depth > 60) throw Error(ErrorCode::kInvalidArgument, "depth must be in 6..60");
  const auto& c = pick_seed(sys, seed);
  ResidualReport r;
  for (double x : xs) {
    Word d = base_digits(x, sys.base, depth + 1);
    std::vector<double> psi = product_image(sys, d, 0, depth, c);
    std::vector<double> shifted = mat_apply(sys.matrices[d[0]], product_image(sys, d, 1, depth + 1, c));
    r.self_similarity_residual = std::max(r.self_similarity_residual, dist1(psi, shifted));
    r.max_truncation_gap =
        std::max(r.max_truncation_gap, dist1(psi, product_image(sys, d, 0, depth - 5, c)));
  }
  r.self_similar = r.self_similarity_residual <= 3 * r.max_truncation_gap + 1e-12;

  auto deep = [&](const Mat& lead, const Mat& tail) {
    std::vector<double> v = c;
    for (std::size_t n = 0; n < power; ++n) v = mat_apply(tail, v);
    return mat_apply(lead, v);
  };
  int k = sys.base;
  for (int i = 0; i + 1 < k; ++i)
    r.endpoint_gaps.push_back(dist1(deep(sys.matrices[i], sys.matrices[k - 1]),
                                    deep(sys.matrices[i + 1], sys.matrices[0])));
  return r;
}

}  // namespace matprod
