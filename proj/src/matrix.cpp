// matrix.cpp
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

#include "matprod/matrix.hpp"

#include <cctype>
#include <cmath>

namespace matprod {

Mat to_float(const QMat& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i)
    out.data()[i] = m.data()[i].get_d();
  return out;
}

QMat to_exact(const Mat& m) {
  check_finite(m);
  QMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i)
    out.data()[i] = mpq_class(m.data()[i]);
  return out;
}

void check_finite(const Mat& m) {
  for (double x : m.data())
    if (!std::isfinite(x))
      throw Error(ErrorCode::kInvalidArgument, "non-finite matrix entry");
}

namespace {

[[noreturn]] void bad_number(const std::string& text) {
  throw Error(ErrorCode::kInvalidArgument, "malformed number '" + text + "'");
}

// Decimal literal with optional sign, fraction and exponent, read exactly.
mpq_class parse_decimal(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  mpz_class mant = 0;
  long scale = 0;
  bool digits = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    mant = mant * 10 + (s[i++] - '0');
    digits = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      mant = mant * 10 + (s[i++] - '0');
      --scale;
      digits = true;
    }
  }
  if (!digits) bad_number(s);
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    long e = 0;
    bool edig = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      e = e * 10 + (s[i++] - '0');
      edig = true;
      if (e > 100000) bad_number(s);
    }
    if (!edig) bad_number(s);
    scale += eneg ? -e : e;
  }
  if (i != s.size()) bad_number(s);
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  mpq_class q = scale >= 0 ? mpq_class(mant * ten_pow) : mpq_class(mant, ten_pow);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

}  // namespace

mpq_class parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) bad_number(raw);
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  mpq_class num = parse_decimal(s.substr(0, slash));
  mpq_class den = parse_decimal(s.substr(slash + 1));
  if (sgn(den) == 0) bad_number(raw);
  mpq_class q = num / den;
  q.canonicalize();
  return q;
}

std::string format_rational(const mpq_class& q) { return q.get_str(); }

}  // namespace matprod
