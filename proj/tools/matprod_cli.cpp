// matprod_cli.cpp
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

// Command-line front end. Builds a JSON config from the arguments and hands
// it to the C interface; exit 0 on success, 2 on bad input, 3 when a
// numerical procedure fails.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "matprod/matprod.h"

using json = nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void print_error(const std::string& name, int code, const std::string& msg) {
  std::cerr << json{{"error", name}, {"code", code}, {"message", msg}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infinite products of nonnegative matrices: experiments and checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path, format, config_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Seed for every random choice")->envname("MATPROD_SEED");

  json cfg;

  auto* cfg_cmd = app.add_subcommand("run", "Run a JSON config file");
  cfg_cmd->add_option("config", config_path, "Config file")->required();

  // simulate
  std::string family, word, preperiod, period, weights, start;
  std::size_t depth = 0;
  bool random = false;
  double tol = 0;
  auto* sim = app.add_subcommand("simulate", "Product trajectory along a sequence");
  sim->add_option("--family", family, "Preset (beta, ce12, ce13) or JSON file")->required();
  sim->add_option("--word", word, "Finite word, groups allowed: (012)^40");
  sim->add_option("--preperiod", preperiod);
  sim->add_option("--period", period);
  sim->add_flag("--random", random, "i.i.d. symbols (needs a seed)");
  sim->add_option("--weights", weights, "Comma-separated symbol weights");
  sim->add_option("--depth", depth)->required();
  sim->add_option("--start", start, "Comma-separated start vector");
  sim->add_option("--tol", tol, "Limit-image tolerance");

  // bernoulli
  int base = 0, translate = 0;
  std::string p_list;
  bool beta_case = false;
  auto* ber = app.add_subcommand("bernoulli", "Cylinder measure of a Bernoulli convolution");
  ber->add_option("--base", base);
  ber->add_option("--p", p_list, "Comma-separated digit law, p/q allowed");
  ber->add_option("--word", word)->required();
  ber->add_option("--translate", translate);
  ber->add_flag("--beta-case", beta_case, "Use the golden-type beta representation");

  // gibbs
  std::string q_grid;
  std::size_t n_max = 0, tail_depth = 0;
  auto* gib = app.add_subcommand("gibbs", "Scale spectrum and weak-Gibbs ratio series");
  gib->add_option("--family", family, "JSON file: Bernoulli spec or family literal")->required();
  gib->add_option("--depth", depth, "Cylinder level of the spectrum");
  gib->add_option("--q-grid", q_grid, "lo:hi:step");
  gib->add_option("--word", word, "Word for the ratio series (random otherwise)");
  gib->add_option("--n-max", n_max);
  gib->add_option("--tail-depth", tail_depth);
  gib->add_option("--translate", translate);

  // counterexample
  std::string which;
  std::size_t k = 0;
  auto* ce = app.add_subcommand("counterexample", "Verify one of the counterexample constructions");
  ce->add_option("which", which)->required()->check(CLI::IsMember({"ce12", "ce13", "ce22"}));
  ce->add_option("--k", k);
  ce->add_option("--p", p_list, "Comma-separated p_0..p_3 (ce22)");

  // factorize
  auto* fac = app.add_subcommand("factorize", "Tokenize a word over the beta-case letters");
  fac->add_option("--word", word)->required();

  // triangular
  std::string mode, factors_path;
  std::size_t horizon = 0;
  bool exact = false;
  auto* tri = app.add_subcommand("triangular", "Block-triangular and 3x3 triangular analysis");
  tri->add_option("mode", mode)->required()->check(CLI::IsMember({"detect", "classify", "lower"}));
  tri->add_option("--factors", factors_path, "JSON file with a list of matrix literals")->required();
  tri->add_option("--horizon", horizon);
  tri->add_option("--depth", depth);
  tri->add_flag("--exact", exact, "Also check the closed form in exact arithmetic");

  // curve
  std::string coeffs, seed_vector;
  std::size_t points = 0;
  auto* cur = app.add_subcommand("curve", "Sample a refinable curve");
  cur->add_option("--base", base);
  cur->add_option("--coeffs", coeffs, "Comma-separated c_0..c_N")->required();
  cur->add_option("--depth", depth);
  cur->add_option("--points", points);
  cur->add_option("--seed-vector", seed_vector);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("INVALID_ARGUMENT", 1, e.what());
    return kExitInput;
  }

  auto set_list = [&](const char* key, const std::string& v) {
    if (!v.empty()) cfg[key] = split_list(v);
  };
  try {
    if (*cfg_cmd) {
      cfg = load_json(config_path);
    } else if (*sim) {
      cfg["command"] = "simulate";
      cfg["family"] = family;
      if (!word.empty()) cfg["word"] = word;
      if (!period.empty()) {
        cfg["preperiod"] = preperiod;
        cfg["period"] = period;
      }
      if (random) {
        cfg["random"] = json::object();
        if (!weights.empty()) cfg["random"]["weights"] = split_list(weights);
      }
      cfg["depth"] = depth;
      set_list("start", start);
      if (tol > 0) cfg["tol"] = tol;
    } else if (*ber) {
      cfg["command"] = "bernoulli";
      cfg["word"] = word;
      if (beta_case) {
        cfg["beta_case"] = true;
      } else {
        cfg["base"] = base;
        set_list("p", p_list);
        cfg["translate"] = translate;
      }
    } else if (*gib) {
      cfg["command"] = "gibbs";
      cfg["family"] = load_json(family);
      if (depth) cfg["depth"] = depth;
      if (!q_grid.empty()) cfg["q_grid"] = q_grid;
      if (!word.empty()) cfg["word"] = word;
      if (n_max) cfg["n_max"] = n_max;
      if (tail_depth) cfg["tail_depth"] = tail_depth;
      cfg["translate"] = translate;
    } else if (*ce) {
      cfg["command"] = "counterexample";
      cfg["which"] = which;
      if (k) cfg["k"] = k;
      set_list("p", p_list);
    } else if (*fac) {
      cfg["command"] = "factorize";
      cfg["word"] = word;
    } else if (*tri) {
      cfg["command"] = "triangular";
      cfg["mode"] = mode;
      json f = load_json(factors_path);
      cfg["factors"] = f.is_object() && f.contains("factors") ? f.at("factors") : f;
      if (f.is_object() && f.contains("test_vectors")) cfg["test_vectors"] = f.at("test_vectors");
      if (horizon) cfg["horizon"] = horizon;
      if (depth) cfg["depth"] = depth;
      if (exact) cfg["exact"] = true;
    } else if (*cur) {
      cfg["command"] = "curve";
      if (base) cfg["base"] = base;
      set_list("coeffs", coeffs);
      if (depth) cfg["depth"] = depth;
      if (points) cfg["points"] = points;
      set_list("seed_vector", seed_vector);
    }
  } catch (const std::exception& e) {
    print_error("INVALID_ARGUMENT", 1, e.what());
    return kExitInput;
  }
  if (!format.empty()) cfg["format"] = format;
  if (seed && !cfg.contains("seed")) cfg["seed"] = *seed;

  mp_result* result = nullptr;
  int status = mp_run(cfg.dump().c_str(), &result);
  if (status != MP_OK) {
    std::cerr << mp_result_error(result) << "\n";
    mp_result_free(result);
    return mp_error_is_numerical(status) ? kExitNumerical : kExitInput;
  }
  std::string text = mp_result_text(result);
  mp_result_free(result);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      print_error("INVALID_ARGUMENT", 1, "cannot write " + out_path);
      return kExitInput;
    }
    out << text;
  }
  return 0;
}
