// dispatch.hpp
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

#ifndef MATPROD_SRC_DISPATCH_HPP_
#define MATPROD_SRC_DISPATCH_HPP_

#include <string>

#include "json_io.hpp"

namespace matprod {

struct DispatchOutput {
  std::string format;  // "csv" or "json"
  std::string text;
};

// Runs the experiment named by cfg["command"]. Throws Error (or a json
// exception for malformed fields).
DispatchOutput dispatch(const json& cfg);

}  // namespace matprod

#endif  // MATPROD_SRC_DISPATCH_HPP_
