// factorize.cpp
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

#include "matprod/factorize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

#include "matprod/bernoulli.hpp"
#include "matprod/error.hpp"
#include "matprod/rng.hpp"

namespace matprod {

namespace {

constexpr std::size_t kDim = 7;
using IVec = std::array<mpz_class, kDim>;
using IMat = std::array<mpz_class, kDim * kDim>;

// Positions of the ones of each 0/1 letter.
const std::array<std::vector<std::pair<std::size_t, std::size_t>>, 3>& letter_ones() {
  static const auto ones = [] {
    std::array<std::vector<std::pair<std::size_t, std::size_t>>, 3> out;
    const auto& L = beta_letter_matrices();
    for (int x = 0; x < 3; ++x)
      for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j)
          if (L[x](i, j) != 0) out[x].emplace_back(i, j);
    return out;
  }();
  return ones;
}

IMat imat_identity() {
  IMat m;
  for (auto& x : m) x = 0;
  for (std::size_t i = 0; i < kDim; ++i) m[i * kDim + i] = 1;
  return m;
}

// p * M_x
IMat times_letter(const IMat& p, int x) {
  IMat out;
  for (auto& v : out) v = 0;
  for (auto [k, j] : letter_ones()[x])
    for (std::size_t i = 0; i < kDim; ++i) out[i * kDim + j] += p[i * kDim + k];
  return out;
}

IMat imat_mul(const IMat& a, const IMat& b) {
  IMat out;
  for (auto& v : out) v = 0;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t k = 0; k < kDim; ++k) {
      const mpz_class& x = a[i * kDim + k];
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < kDim; ++j) out[i * kDim + j] += x * b[k * kDim + j];
    }
  return out;
}

IMat word_imat(const Word& w, std::size_t begin, std::size_t end) {
  IMat p = imat_identity();
  for (std::size_t i = begin; i < end; ++i) p = times_letter(p, w[i]);
  return p;
}

IVec column(const IMat& m, std::size_t j) {
  IVec v;
  for (std::size_t i = 0; i < kDim; ++i) v[i] = m[i * kDim + j];
  return v;
}

// v - t u_135 >= 0 (coordinates 1, 3, 5 are indices 0, 2, 4).
template <class V>
bool in_S(const V& v, long t = 1) {
  for (std::size_t i = 0; i < kDim; ++i) {
    long need = (i == 0 || i == 2 || i == 4) ? t : 0;
    if (v[i] < need) return false;
  }
  return true;
}

std::vector<long> to_long(const IVec& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

using LVec = std::vector<long>;

LVec apply_letter(int x, const LVec& v) {
  LVec out(kDim, 0);
  for (auto [i, j] : letter_ones()[x]) out[i] += v[j];
  return out;
}

LVec unit_sum(std::initializer_list<int> idx) {
  LVec v(kDim, 0);
  for (int i : idx) v[static_cast<std::size_t>(i - 1)] += 1;
  return v;
}

// S' as printed: the unit vectors and u_134, u_1334, u_145, u_15, u_23, u_236,
// u_27, u_34, u_356, u_36, u_57 (a repeated index is a multiplicity).
std::vector<LVec> printed_s_prime() {
  std::vector<LVec> out;
  for (int j = 1; j <= 7; ++j) out.push_back(unit_sum({j}));
  for (auto idx : {std::initializer_list<int>{1, 3, 4}, {1, 3, 3, 4}, {1, 4, 5}, {1, 5},
                   {2, 3}, {2, 3, 6}, {2, 7}, {3, 4}, {3, 5, 6}, {3, 6}, {5, 7}})
    out.push_back(unit_sum(idx));
  return out;
}

std::optional<std::size_t> match_template(const TokenTemplate& t, const Word& w,
                                          std::size_t end, bool allow_empty_run,
                                          long* alpha) {
  std::size_t run = 0;
  if (t.repeat >= 0)
    while (run < end && w[end - 1 - run] == t.repeat) ++run;
  if (t.repeat >= 0 && run == 0 && !allow_empty_run) return std::nullopt;
  std::size_t f = std::char_traits<char>::length(t.fixed);
  if (f + run > end) return std::nullopt;
  std::size_t start = end - run - f;
  for (std::size_t i = 0; i < f; ++i)
    if (w[start + i] != t.fixed[i] - '0') return std::nullopt;
  *alpha = static_cast<long>(run);
  return f + run;
}

}  // namespace

const std::vector<TokenTemplate>& body_templates() {
  static const std::vector<TokenTemplate> t = {
      {"01", 0},   {"11", 0},   {"21", 0},   {"2", 0},    {"1", -1},
      {"00", 2},   {"0010", 2}, {"1010", 2}, {"2010", 2}, {"110", 2},
      {"210", 2},  {"20", 2},   {"01", 2},   {"11", 2},   {"21", 2}};
  return t;
}

const std::vector<TokenTemplate>& head_templates() {
  static const std::vector<TokenTemplate> t = {{"", 0},   {"1", 0},   {"", 2},  {"0", 2},
                                               {"10", 2}, {"010", 2}, {"1", 2}};
  return t;
}

Word token_literal(bool head, int template_index, long alpha) {
  const auto& list = head ? head_templates() : body_templates();
  if (template_index < 0 || static_cast<std::size_t>(template_index) >= list.size())
    throw Error(ErrorCode::kInvalidArgument, "template index out of range");
  if (alpha < 0) throw Error(ErrorCode::kInvalidArgument, "alpha must be nonnegative");
  const auto& t = list[static_cast<std::size_t>(template_index)];
  Word w;
  for (const char* c = t.fixed; *c; ++c) w.push_back(*c - '0');
  if (t.repeat >= 0) w.insert(w.end(), static_cast<std::size_t>(alpha), t.repeat);
  return w;
}

std::string FactorToken::name() const {
  const auto& list = head ? head_templates() : body_templates();
  const auto& t = list.at(static_cast<std::size_t>(template_index));
  std::string s;
  for (const char* c = t.fixed; *c; ++c) s += std::string(s.empty() ? "" : " ") + "M_" + *c;
  if (t.repeat >= 0 && alpha > 0) {
    if (!s.empty()) s += " ";
    s += "M_" + std::to_string(t.repeat) + "^" + std::to_string(alpha);
  }
  return s.empty() ? "I" : s;
}

FactorizationResult tokenize(const Word& w) {
  if (w.empty()) throw Error(ErrorCode::kInvalidArgument, "word must be nonempty");
  for (int x : w)
    if (x < 0 || x > 2) throw Error(ErrorCode::kInvalidArgument, "letters are 0, 1, 2");
  FactorizationResult r;
  std::size_t end = w.size();
  std::vector<FactorToken> rev;
  const auto& body = body_templates();
  while (end > 0) {
    std::optional<std::size_t> best_len;
    FactorToken best;
    for (std::size_t i = 0; i < body.size(); ++i) {
      long alpha = 0;
      auto len = match_template(body[i], w, end, false, &alpha);
      if (len && (!best_len || *len < *best_len)) {
        best_len = len;
        best.template_index = static_cast<int>(i);
        best.alpha = alpha;
      }
    }
    if (!best_len) break;
    best.literal.assign(w.begin() + static_cast<std::ptrdiff_t>(end - *best_len),
                        w.begin() + static_cast<std::ptrdiff_t>(end));
    rev.push_back(best);
    end -= *best_len;
  }
  r.head.head = true;
  if (end > 0) {
    bool found = false;
    const auto& heads = head_templates();
    for (std::size_t i = 0; i < heads.size() && !found; ++i) {
      long alpha = 0;
      auto len = match_template(heads[i], w, end, true, &alpha);
      if (len && *len == end) {
        r.head.template_index = static_cast<int>(i);
        r.head.alpha = alpha;
        r.head.literal.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(end));
        found = true;
      }
    }
    if (!found)
      throw Error(ErrorCode::kNoFactorization,
                  "prefix " + word_to_string(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(end))) +
                      " matches no head template");
  }
  r.body.assign(rev.rbegin(), rev.rend());
  std::size_t pos = 0;
  r.boundaries.push_back(0);
  pos += r.head.literal.size();
  for (const auto& t : r.body) {
    r.boundaries.push_back(pos);
    pos += t.literal.size();
  }
  r.boundaries.push_back(pos);
  return r;
}

QMat token_matrix_exact(const FactorToken& t, bool scaled) {
  const auto& L = scaled ? beta_representation().matrices : beta_letter_matrices();
  const auto& list = t.head ? head_templates() : body_templates();
  const auto& tp = list.at(static_cast<std::size_t>(t.template_index));
  QMat m = QMat::identity(kDim);
  for (const char* c = tp.fixed; *c; ++c) m = m * L[*c - '0'];
  if (tp.repeat >= 0) m = m * power(L[tp.repeat], static_cast<unsigned long>(t.alpha));
  return m;
}

Mat token_matrix(const FactorToken& t, bool scaled) {
  return to_float(token_matrix_exact(t, scaled));
}

bool verify_factorization(const Word& w, const FactorizationResult& f) {
  Word cat = f.head.literal;
  for (const auto& t : f.body) {
    if (token_literal(false, t.template_index, t.alpha) != t.literal) return false;
    cat.insert(cat.end(), t.literal.begin(), t.literal.end());
  }
  if (!f.head.literal.empty() &&
      token_literal(true, f.head.template_index, f.head.alpha) != f.head.literal)
    return false;
  if (cat != w) return false;
  IMat direct = word_imat(w, 0, w.size());
  IMat via = word_imat(f.head.literal, 0, f.head.literal.size());
  for (const auto& t : f.body) via = imat_mul(via, word_imat(t.literal, 0, t.literal.size()));
  return via == direct;
}

StructureReport structure_checks(int max_block_exponent) {
  if (max_block_exponent < 1 || max_block_exponent > 8)
    throw Error(ErrorCode::kInvalidArgument, "block exponent must be in 1..8");
  StructureReport r;
  // (a) triples
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        IMat p = word_imat(Word{a, b, c}, 0, 3);
        bool ok = false;
        for (std::size_t j : {0u, 2u, 4u}) ok = ok || in_S(column(p, j));
        if (!ok) {
          r.triples_ok = false;
          r.triple_failures.push_back(Word{a, b, c});
        }
      }
  // (b) stability of S
  LVec u135 = unit_sum({1, 3, 5});
  for (int x = 0; x < 3; ++x) {
    LVec img = apply_letter(x, u135);
    QMat q(kDim, 1);
    for (std::size_t i = 0; i < kDim; ++i) q(i, 0) = img[i];
    r.images_u135.push_back(q);
    if (!in_S(img)) r.stability_ok = false;
  }
  // (c) closure of the columns outside S
  std::set<LVec> closure, frontier;
  for (int x = 0; x < 3; ++x)
    for (std::size_t j = 0; j < kDim; ++j) {
      LVec e(kDim, 0);
      e[j] = 1;
      LVec v = apply_letter(x, e);
      if (!in_S(v)) frontier.insert(v);
    }
  while (!frontier.empty()) {
    LVec v = *frontier.begin();
    frontier.erase(frontier.begin());
    if (!closure.insert(v).second) continue;
    if (closure.size() > 10000) throw Error(ErrorCode::kInternal, "S' closure does not close");
    for (int x = 0; x < 3; ++x) {
      LVec n = apply_letter(x, v);
      if (!in_S(n) && !closure.count(n)) frontier.insert(n);
    }
  }
  r.s_prime.assign(closure.begin(), closure.end());
  auto printed = printed_s_prime();
  std::set<LVec> printed_set(printed.begin(), printed.end());
  for (const auto& v : closure)
    if (!printed_set.count(v)) r.s_prime_extra.push_back(v);
  for (const auto& v : printed)
    if (!closure.count(v)) r.s_prime_missing.push_back(v);
  std::function<void(const IMat&, std::size_t)> walk = [&](const IMat& p, std::size_t len) {
    for (std::size_t j = 0; j < kDim; ++j) {
      LVec v = to_long(column(p, j));
      if (!in_S(v) && !closure.count(v)) r.closure_ok = false;
    }
    if (len == 6) return;
    for (int x = 0; x < 3; ++x) walk(times_letter(p, x), len + 1);
  };
  for (int x = 0; x < 3; ++x) walk(word_imat(Word{x}, 0, 1), 1);

  // (d) block words of 9 blocks, built right to left, applied to u_135.
  const Word forbidden = {1, 0, 0, 1, 0, 0};
  std::function<void(const LVec&, Word&, int, int)> blocks = [&](const LVec& v, Word& rev,
                                                                  int prev, int depth) {
    if (depth == 9) {
      Word w(rev.rbegin(), rev.rend());
      if (std::search(w.begin(), w.end(), forbidden.begin(), forbidden.end()) != w.end()) return;
      ++r.block_words;
      if (!in_S(v, 2)) {
        r.blocks_ok = false;
        if (r.block_failures.size() < 16) r.block_failures.push_back(w);
      }
      return;
    }
    for (int x = 0; x < 3; ++x) {
      if (x == prev) continue;
      int max_e = x == 1 ? 1 : max_block_exponent;
      LVec cur = v;
      for (int e = 1; e <= max_e; ++e) {
        cur = apply_letter(x, cur);
        rev.push_back(x);
        blocks(cur, rev, x, depth + 1);
      }
      rev.resize(rev.size() - static_cast<std::size_t>(max_e));
    }
  };
  Word rev;
  blocks(u135, rev, -1, 0);
  return r;
}

QMat m0_power4_closed_form(long alpha) {
  QMat m(kDim, kDim);
  m(0, 0) = 1;
  for (std::size_t i : {1u, 2u, 4u, 5u, 6u}) m(i, 0) = alpha;
  for (auto [i, j] : {std::pair<int, int>{2, 2}, {3, 3}, {5, 4}, {5, 5}, {6, 3}, {7, 7}})
    m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = 1;
  return m;
}

QMat m0_power4_displayed(long alpha) {
  QMat m(kDim, kDim);
  m(0, 0) = 1;
  for (std::size_t i : {1u, 2u, 4u, 5u, 6u}) m(i, 0) = alpha;
  for (auto [i, j] : {std::pair<int, int>{2, 3}, {3, 4}, {3, 5}, {5, 7}, {6, 5}, {7, 2}})
    m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = 1;
  return m;
}

GrowthReport growth_and_bounds(const GrowthOptions& opts) {
  if (opts.alpha_cap < 10)
    throw Error(ErrorCode::kInvalidArgument, "alpha_cap must be at least 10");
  if (opts.k_products < 1 || opts.k_products > 200 || opts.samples < 1 ||
      opts.sample_alpha_max < 1)
    throw Error(ErrorCode::kInvalidArgument, "k_products must be in 1..200");
  GrowthReport g;
  const auto& body = body_templates();
  for (std::size_t i = 0; i < body.size(); ++i) {
    long lo = body[i].repeat >= 0 ? 1 : 0, hi = body[i].repeat >= 0 ? opts.alpha_cap : 0;
    for (long a = lo; a <= hi; ++a) {
      FactorToken t;
      t.template_index = static_cast<int>(i);
      t.alpha = a;
      t.literal = token_literal(false, t.template_index, a);
      auto sf = shape_functionals(token_matrix_exact(t));
      double L = sf.Lambda.get_d(), l = sf.lambda_small.get_d();
      if (L > g.max_Lambda_E) {
        g.max_Lambda_E = L;
        g.argmax_Lambda = t;
      }
      if (l > g.max_lambda_E) {
        g.max_lambda_E = l;
        g.argmax_lambda = t;
      }
      if (i == 3 && a == 4) g.Lambda_M2M0_4 = L;
    }
  }

  // K: largest entry over all products of six letters.
  std::function<void(const IMat&, int)> six = [&](const IMat& p, int len) {
    if (len == 6) {
      for (const auto& x : p) g.K_lemmaA7 = std::max(g.K_lemmaA7, x);
      return;
    }
    for (int x = 0; x < 3; ++x) six(times_letter(p, x), len + 1);
  };
  six(imat_identity(), 0);

  // Random body products.
  g.Lambda_bound = 0.0;
  for (std::size_t s = 0; s < opts.samples; ++s) {
    CounterRng rng(opts.seed, s);
    IMat p = imat_identity();
    long k0 = -1;
    std::vector<double> lambdas;
    std::size_t letters = 0;
    for (std::size_t k = 1; k <= opts.k_products; ++k) {
      int idx = static_cast<int>(rng.below(body.size()));
      long a = body[static_cast<std::size_t>(idx)].repeat >= 0
                   ? 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(opts.sample_alpha_max)))
                   : 0;
      Word lit = token_literal(false, idx, a);
      for (int x : lit) p = times_letter(p, x);
      letters += lit.size();
      QMat q(kDim, kDim);
      for (std::size_t i = 0; i < kDim * kDim; ++i) q(i / kDim, i % kDim) = p[i];
      auto sf = shape_functionals(q);
      double L = sf.Lambda.get_d();
      g.sup_Lambda_products = std::max(g.sup_Lambda_products, L);
      if (k0 < 0 && sf.lambda_small <= mpq_class(1, 2)) k0 = static_cast<long>(k);
      lambdas.push_back(L);
      // Column floor and ceiling.
      long floor15 = static_cast<long>(k / 15);
      bool floor_ok = false;
      for (std::size_t j = 0; j < kDim; ++j) {
        IVec col = column(p, j);
        if (in_S(col)) {
          if (j == 0 || j == 2 || j == 4) {
            bool all = true;
            for (const auto& x : col)
              if (sgn(x) != 0 && x < floor15) all = false;
            floor_ok = floor_ok || all;
          }
        } else {
          for (const auto& x : col)
            if (x > 12) g.entry_ceiling_ok = false;
        }
      }
      // The floor needs at least six letters.
      if (!floor_ok && letters >= 6) g.entry_floor_ok = false;
    }
    if (k0 >= 0) {
      g.k0 = std::max(g.k0, k0);
      double bound = 2.0 * g.max_Lambda_E * std::ldexp(1.0, static_cast<int>(k0));
      for (double L : lambdas)
        if (L > bound) g.Lambda_bound_ok = false;
      g.Lambda_bound = std::max(g.Lambda_bound, bound);
    }
  }

  // M_0^{4 alpha}
  const QMat& m0 = beta_letter_matrices()[0];
  for (long a = 1; a <= 10; ++a) {
    QMat p = power(m0, static_cast<unsigned long>(4 * a));
    if (p != m0_power4_closed_form(a)) g.eq27_ok = false;
    if (a == 1) {
      QMat shown = m0_power4_displayed(a);
      for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j)
          if (p(i, j) != shown(i, j))
            g.eq27_display_mismatch.emplace_back(static_cast<int>(i + 1), static_cast<int>(j + 1));
    }
  }
  return g;
}

}  // namespace matprod
