// error.hpp
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

#ifndef MATPROD_ERROR_HPP_
#define MATPROD_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace matprod {

// Keep in sync with the MP_E_* constants in matprod.h.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kNotSquare = 2,
  kZeroMatrix = 3,
  kProductVanished = 4,
  kNoConvergence = 5,
  kNotConverged = 6,
  kBadCheckpoints = 7,
  kNotStochastic = 8,
  kSearchExhausted = 9,
  kEigenvalueNotOne = 10,
  kWordTooShort = 11,
  kZeroImage = 12,
  kNoFactorization = 13,
  kCheckFailed = 14,
  kHorizonTooShort = 15,
  kNotTriangular = 16,
  kZeroDiagonal = 17,
  kInconclusiveFiniteness = 18,
  kDimensionTooSmall = 19,
  kInternal = 99,
};

const char* error_name(ErrorCode code);

// True for failures of a numerical procedure (as opposed to bad input).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace matprod

#endif  // MATPROD_ERROR_HPP_
