// error.cpp
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

#include "matprod/error.hpp"

namespace matprod {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "OK";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kNotSquare: return "NOT_SQUARE";
    case ErrorCode::kZeroMatrix: return "ZERO_MATRIX";
    case ErrorCode::kProductVanished: return "PRODUCT_VANISHED";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kNotConverged: return "NOT_CONVERGED";
    case ErrorCode::kBadCheckpoints: return "BAD_CHECKPOINTS";
    case ErrorCode::kNotStochastic: return "NOT_STOCHASTIC";
    case ErrorCode::kSearchExhausted: return "SEARCH_EXHAUSTED";
    case ErrorCode::kEigenvalueNotOne: return "EIGENVALUE_NOT_ONE";
    case ErrorCode::kWordTooShort: return "WORD_TOO_SHORT";
    case ErrorCode::kZeroImage: return "ZERO_IMAGE";
    case ErrorCode::kNoFactorization: return "NO_FACTORIZATION";
    case ErrorCode::kCheckFailed: return "CHECK_FAILED";
    case ErrorCode::kHorizonTooShort: return "HORIZON_TOO_SHORT";
    case ErrorCode::kNotTriangular: return "NOT_TRIANGULAR";
    case ErrorCode::kZeroDiagonal: return "ZERO_DIAGONAL";
    case ErrorCode::kInconclusiveFiniteness: return "INCONCLUSIVE_FINITENESS";
    case ErrorCode::kDimensionTooSmall: return "DIMENSION_TOO_SMALL";
    case ErrorCode::kInternal: return "INTERNAL";
  }
  return "UNKNOWN";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kProductVanished:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNotConverged:
    case ErrorCode::kSearchExhausted:
    case ErrorCode::kEigenvalueNotOne:
    case ErrorCode::kZeroImage:
    case ErrorCode::kNoFactorization:
    case ErrorCode::kCheckFailed:
    case ErrorCode::kHorizonTooShort:
    case ErrorCode::kInconclusiveFiniteness:
    case ErrorCode::kInternal:
      return true;
    default:
      return false;
  }
}

}  // namespace matprod
