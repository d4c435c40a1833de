// c_api.cpp
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

#include "matprod/matprod.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "dispatch.hpp"
#include "json_io.hpp"
#include "matprod/bernoulli.hpp"
#include "matprod/error.hpp"

using matprod::ErrorCode;
using matprod::json;

struct mp_result {
  int status = MP_OK;
  std::string format;
  std::string text;
  std::string error;
};

struct mp_family {
  matprod::MatrixFamily family;
};

namespace {

std::string error_json(int code, const std::string& msg) {
  json j{{"error", matprod::error_name(static_cast<ErrorCode>(code))}, {"code", code},
         {"message", msg}};
  return j.dump();
}

// Runs fn and converts exceptions into status codes; msg receives the text.
template <class Fn>
int guarded(Fn&& fn, std::string* msg = nullptr) {
  try {
    fn();
    return MP_OK;
  } catch (const matprod::Error& e) {
    if (msg) *msg = e.what();
    return static_cast<int>(e.code());
  } catch (const json::exception& e) {
    if (msg) *msg = e.what();
    return MP_E_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    if (msg) *msg = "out of memory";
    return MP_E_INTERNAL;
  } catch (const std::exception& e) {
    if (msg) *msg = e.what();
    return MP_E_INTERNAL;
  }
}

matprod::Word to_word(const mp_family* f, const int* word, size_t len) {
  if (len > 0 && !word) throw matprod::Error(ErrorCode::kInvalidArgument, "null word");
  matprod::Word w(word, word + len);
  for (int x : w)
    if (x < 0 || static_cast<std::size_t>(x) >= f->family.alphabet())
      throw matprod::Error(ErrorCode::kInvalidArgument, "symbol outside the family");
  return w;
}

}  // namespace

extern "C" {

const char* mp_version(void) { return "0.1.0"; }

const char* mp_error_name(int code) { return matprod::error_name(static_cast<ErrorCode>(code)); }

int mp_error_is_numerical(int code) {
  return matprod::is_numerical(static_cast<ErrorCode>(code)) ? 1 : 0;
}

int mp_run(const char* config_json, mp_result** out) {
  if (!out) return MP_E_INVALID_ARGUMENT;
  *out = nullptr;
  mp_result* r = new (std::nothrow) mp_result;
  if (!r) return MP_E_INTERNAL;
  std::string msg;
  r->status = guarded(
      [&] {
        if (!config_json) throw matprod::Error(ErrorCode::kInvalidArgument, "null config");
        matprod::DispatchOutput o = matprod::dispatch(json::parse(config_json));
        r->format = o.format;
        r->text = std::move(o.text);
      },
      &msg);
  if (r->status != MP_OK) r->error = error_json(r->status, msg);
  *out = r;
  return r->status;
}

int mp_result_status(const mp_result* r) { return r ? r->status : MP_E_INVALID_ARGUMENT; }
const char* mp_result_format(const mp_result* r) { return r ? r->format.c_str() : ""; }
const char* mp_result_text(const mp_result* r) { return r ? r->text.c_str() : ""; }
const char* mp_result_error(const mp_result* r) { return r ? r->error.c_str() : ""; }
void mp_result_free(mp_result* r) { delete r; }

int mp_family_from_json(const char* text, mp_family** out) {
  if (!out || !text) return MP_E_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    json j = json::parse(text);
    auto* f = new mp_family{matprod::parse_family(j)};
    *out = f;
  });
}

int mp_family_order(const mp_family* f, size_t* out) {
  if (!f || !out) return MP_E_INVALID_ARGUMENT;
  *out = f->family.order();
  return MP_OK;
}

int mp_family_alphabet(const mp_family* f, size_t* out) {
  if (!f || !out) return MP_E_INVALID_ARGUMENT;
  *out = f->family.alphabet();
  return MP_OK;
}

int mp_family_log_norm(const mp_family* f, const int* word, size_t len, double* out) {
  if (!f || !out) return MP_E_INVALID_ARGUMENT;
  return guarded([&] {
    matprod::Word w = to_word(f, word, len);
    matprod::ScaledMat acc{matprod::Mat::identity(f->family.order()), 0.0};
    for (int x : w) acc = matprod::scaled_multiply(acc, f->family.matrices[x]);
    *out = acc.norm_log();
  });
}

int mp_family_image(const mp_family* f, const int* word, size_t len, double* out,
                    size_t out_len) {
  if (!f || !out) return MP_E_INVALID_ARGUMENT;
  return guarded([&] {
    if (!f->family.terminal)
      throw matprod::Error(ErrorCode::kInvalidArgument, "family has no terminal vector");
    if (out_len < f->family.order())
      throw matprod::Error(ErrorCode::kInvalidArgument, "output buffer too small");
    matprod::Word w = to_word(f, word, len);
    matprod::Mat v = *f->family.terminal;
    for (std::size_t i = w.size(); i-- > 0;) {
      v = f->family.matrices[w[i]] * v;
      double n = matprod::entry_norm(v);
      if (n == 0.0) throw matprod::Error(ErrorCode::kZeroImage, "image vanished");
      v = v / n;
    }
    double n = matprod::entry_norm(v);
    if (n == 0.0) throw matprod::Error(ErrorCode::kZeroImage, "image vanished");
    for (std::size_t i = 0; i < f->family.order(); ++i) out[i] = v(i, 0) / n;
  });
}

int mp_family_measure(const mp_family* f, const int* word, size_t len, double* out) {
  if (!f || !out) return MP_E_INVALID_ARGUMENT;
  return guarded([&] { *out = matprod::representation_measure(f->family, to_word(f, word, len)); });
}

void mp_family_free(mp_family* f) { delete f; }

}  // extern "C"
