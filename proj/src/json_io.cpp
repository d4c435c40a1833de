// json_io.cpp
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

#include "json_io.hpp"

#include <fstream>

#include "matprod/bernoulli.hpp"
#include "matprod/counterexamples.hpp"
#include "matprod/error.hpp"

namespace matprod {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); }

const json& rows_of(const json& v, std::size_t& rows, std::size_t& cols) {
  const json* data = &v;
  if (v.is_object()) {
    if (!v.contains("data")) bad("matrix literal needs \"data\"");
    data = &v.at("data");
  }
  if (!data->is_array() || data->empty() || !(*data)[0].is_array())
    bad("matrix data must be a nonempty array of rows");
  rows = data->size();
  cols = (*data)[0].size();
  for (const auto& r : *data)
    if (!r.is_array() || r.size() != cols) bad("matrix rows must have equal length");
  if (v.is_object()) {
    if (v.contains("rows") && v.at("rows").get<std::size_t>() != rows)
      bad("\"rows\" does not match the data");
    if (v.contains("cols") && v.at("cols").get<std::size_t>() != cols)
      bad("\"cols\" does not match the data");
  }
  return *data;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

mpq_class json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_number()) return mpq_class(v.get<double>());
  bad("expected a number or a \"p/q\" string");
}

double json_number(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
  if (v.is_number()) return v.get<double>();
  bad("expected a number or a \"p/q\" string");
}

QMat parse_qmat(const json& v) {
  std::size_t r = 0, c = 0;
  const json& data = rows_of(v, r, c);
  QMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = json_rational(data[i][j]);
  return m;
}

Mat parse_mat(const json& v) {
  std::size_t r = 0, c = 0;
  const json& data = rows_of(v, r, c);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = json_number(data[i][j]);
  return m;
}

std::vector<Mat> parse_mat_list(const json& v) {
  if (!v.is_array() || v.empty()) bad("expected a nonempty list of matrices");
  std::vector<Mat> out;
  for (const auto& m : v) out.push_back(parse_mat(m));
  return out;
}

json mat_to_json(const Mat& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    data.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json qmat_to_json(const QMat& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format_rational(m(i, j)));
    data.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json vec_to_json(const std::vector<double>& v) { return json(v); }

bool is_family_preset(const std::string& name) {
  return name == "beta" || name == "ce12" || name == "ce13";
}

MatrixFamily parse_family(const json& v) {
  if (v.is_string()) {
    std::string name = v.get<std::string>();
    if (name == "beta") return beta_representation().family();
    if (name == "ce12" || name == "ce13") {
      MatrixFamily f;
      for (const auto& q : name == "ce12" ? ce12_letters() : ce13_letters())
        f.matrices.push_back(to_float(q));
      return f;
    }
    return parse_family(load_json_file(name));
  }
  if (!v.is_object()) bad("family must be an object, a preset name or a file path");
  if (v.contains("base") && v.contains("p")) {
    std::vector<mpq_class> p;
    for (const auto& x : v.at("p")) p.push_back(json_rational(x));
    return build_representation(v.at("base").get<int>(), p).family();
  }
  if (!v.contains("matrices")) bad("family needs \"matrices\"");
  MatrixFamily f;
  f.matrices = parse_mat_list(v.at("matrices"));
  if (v.contains("row_vectors"))
    for (const auto& r : v.at("row_vectors")) f.row_vectors.push_back(parse_mat(r));
  if (v.contains("terminal")) f.terminal = parse_mat(v.at("terminal"));
  f.validate();
  return f;
}

}  // namespace matprod
