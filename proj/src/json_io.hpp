// json_io.hpp
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

// JSON conversions shared by the dispatcher and the C interface.

#ifndef MATPROD_SRC_JSON_IO_HPP_
#define MATPROD_SRC_JSON_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "matprod/matrix.hpp"
#include "matprod/trajectory.hpp"

namespace matprod {

using json = nlohmann::json;

mpq_class json_rational(const json& v);
double json_number(const json& v);

// {"rows": n, "cols": m, "data": [[...]]}; a bare nested array is accepted too.
QMat parse_qmat(const json& v);
Mat parse_mat(const json& v);
std::vector<Mat> parse_mat_list(const json& v);

json mat_to_json(const Mat& m);
json qmat_to_json(const QMat& m);  // entries as "p/q" strings
json vec_to_json(const std::vector<double>& v);

// Family literal {"matrices": [...], "row_vectors": [...], "terminal": ...},
// a preset name ("beta", "ce12", "ce13"), or a path to a JSON file holding
// either.
MatrixFamily parse_family(const json& v);
bool is_family_preset(const std::string& name);
json load_json_file(const std::string& path);

}  // namespace matprod

#endif  // MATPROD_SRC_JSON_IO_HPP_
