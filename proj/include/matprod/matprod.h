// matprod.h
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

/* C interface of libmatprod. Every function returns an MP_* status code;
 * objects are opaque handles released with the matching *_free call. */
#ifndef MATPROD_MATPROD_H_
#define MATPROD_MATPROD_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MP_API __declspec(dllexport)
#else
#define MP_API __attribute__((visibility("default")))
#endif

enum {
  MP_OK = 0,
  MP_E_INVALID_ARGUMENT = 1,
  MP_E_NOT_SQUARE = 2,
  MP_E_ZERO_MATRIX = 3,
  MP_E_PRODUCT_VANISHED = 4,
  MP_E_NO_CONVERGENCE = 5,
  MP_E_NOT_CONVERGED = 6,
  MP_E_BAD_CHECKPOINTS = 7,
  MP_E_NOT_STOCHASTIC = 8,
  MP_E_SEARCH_EXHAUSTED = 9,
  MP_E_EIGENVALUE_NOT_ONE = 10,
  MP_E_WORD_TOO_SHORT = 11,
  MP_E_ZERO_IMAGE = 12,
  MP_E_NO_FACTORIZATION = 13,
  MP_E_CHECK_FAILED = 14,
  MP_E_HORIZON_TOO_SHORT = 15,
  MP_E_NOT_TRIANGULAR = 16,
  MP_E_ZERO_DIAGONAL = 17,
  MP_E_INCONCLUSIVE_FINITENESS = 18,
  MP_E_DIMENSION_TOO_SMALL = 19,
  MP_E_INTERNAL = 99
};

typedef struct mp_result mp_result;
typedef struct mp_family mp_family;

MP_API const char* mp_version(void);
MP_API const char* mp_error_name(int code);
/* 1 when the code reports a failed numerical procedure, 0 for bad input. */
MP_API int mp_error_is_numerical(int code);

/* Runs one experiment described by a JSON config (see the README for the
 * schema). *out is always set, also on failure, and carries the error object. */
MP_API int mp_run(const char* config_json, mp_result** out);
MP_API int mp_result_status(const mp_result* r);
/* "csv" or "json"; the report text; the JSON error object ("" on success). */
MP_API const char* mp_result_format(const mp_result* r);
MP_API const char* mp_result_text(const mp_result* r);
MP_API const char* mp_result_error(const mp_result* r);
MP_API void mp_result_free(mp_result* r);

/* Matrix family from a JSON family literal or preset name. */
MP_API int mp_family_from_json(const char* json, mp_family** out);
MP_API int mp_family_order(const mp_family* f, size_t* out);
MP_API int mp_family_alphabet(const mp_family* f, size_t* out);
/* log ||M_{w_1} ... M_{w_n}|| (entry norm). */
MP_API int mp_family_log_norm(const mp_family* f, const int* word, size_t len, double* out);
/* P c / ||P c|| for the family's terminal vector; out needs order() slots. */
MP_API int mp_family_image(const mp_family* f, const int* word, size_t len, double* out,
                           size_t out_len);
/* r_{w_1} M_{w_2} ... M_{w_n} c; needs row vectors and a terminal vector. */
MP_API int mp_family_measure(const mp_family* f, const int* word, size_t len, double* out);
MP_API void mp_family_free(mp_family* f);

#ifdef __cplusplus
}
#endif

#endif /* MATPROD_MATPROD_H_ */
