// dispatch.cpp
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

#include "dispatch.hpp"

#include <cmath>
#include <sstream>

#include "matprod/bernoulli.hpp"
#include "matprod/counterexamples.hpp"
#include "matprod/curves.hpp"
#include "matprod/error.hpp"
#include "matprod/factorize.hpp"
#include "matprod/gibbs.hpp"
#include "matprod/triangular.hpp"

namespace matprod {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); }

// Reads cfg[key] or the default and records the value used.
template <class T>
T param(const json& cfg, const char* key, T fallback, json& used) {
  T v = cfg.contains(key) ? cfg.at(key).get<T>() : fallback;
  used[key] = v;
  return v;
}

double positive(double x, const char* what) {
  if (!(x > 0)) bad(std::string(what) + " must be positive");
  return x;
}

std::uint64_t require_seed(const json& cfg, json& used) {
  if (!cfg.contains("seed")) bad("a seed is required when randomness is requested");
  std::uint64_t s = cfg.at("seed").get<std::uint64_t>();
  used["seed"] = s;
  return s;
}

std::string format_of(const json& cfg, const char* fallback, json& used) {
  std::string f = param<std::string>(cfg, "format", fallback, used);
  if (f != "csv" && f != "json") bad("format must be csv or json");
  return f;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

DispatchOutput as_json(const json& j) { return {"json", j.dump(2) + "\n"}; }

SymbolSequence sequence_of(const json& cfg, int alphabet, json& used) {
  if (cfg.contains("word")) {
    std::string w = cfg.at("word").get<std::string>();
    used["word"] = w;
    return SymbolSequence::word(parse_word(w, alphabet), alphabet);
  }
  if (cfg.contains("period")) {
    std::string pre = cfg.value("preperiod", std::string());
    std::string per = cfg.at("period").get<std::string>();
    used["preperiod"] = pre;
    used["period"] = per;
    return SymbolSequence::periodic(parse_word(pre, alphabet), parse_word(per, alphabet),
                                    alphabet);
  }
  if (cfg.contains("random")) {
    std::uint64_t seed = require_seed(cfg, used);
    const json& r = cfg.at("random");
    std::vector<double> weights(alphabet, 1.0);
    if (r.is_object() && r.contains("weights")) {
      weights.clear();
      for (const auto& x : r.at("weights")) weights.push_back(json_number(x));
      if (weights.size() != static_cast<std::size_t>(alphabet))
        bad("one weight per symbol is required");
    }
    used["random"] = {{"weights", weights}};
    return SymbolSequence::random(weights, seed);
  }
  bad("a sequence needs \"word\", \"period\" or \"random\"");
}

std::vector<Mat> cycled(const std::vector<Mat>& f, std::size_t n) {
  std::vector<Mat> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f[i % f.size()]);
  return out;
}

std::vector<std::vector<double>> vectors_of(const json& cfg, const char* key,
                                            std::vector<std::vector<double>> fallback,
                                            json& used) {
  std::vector<std::vector<double>> out;
  if (cfg.contains(key)) {
    for (const auto& v : cfg.at(key)) {
      std::vector<double> x;
      for (const auto& e : v) x.push_back(json_number(e));
      out.push_back(x);
    }
  } else {
    out = std::move(fallback);
  }
  used[key] = out;
  return out;
}

// ---- commands ----

DispatchOutput run_simulate(const json& cfg) {
  json used;
  if (!cfg.contains("family")) bad("simulate needs \"family\"");
  MatrixFamily fam = parse_family(cfg.at("family"));
  SymbolSequence seq = sequence_of(cfg, static_cast<int>(fam.alphabet()), used);
  std::size_t depth = param<std::size_t>(cfg, "depth", 0, used);
  if (depth == 0) bad("depth must be positive");
  std::optional<std::vector<double>> start;
  if (cfg.contains("start")) {
    std::vector<double> s;
    for (const auto& x : cfg.at("start")) s.push_back(json_number(x));
    start = s;
    used["start"] = s;
  }
  std::string format = format_of(cfg, "csv", used);
  double tol = positive(param<double>(cfg, "tol", 1e-6, used), "tol");
  double window = positive(param<double>(cfg, "window", 0.2, used), "window");

  ProductTrajectory t = run_trajectory(fam, seq, depth, start);
  if (format == "csv") return {"csv", trajectory_csv(t)};
  const auto& last = t.steps.back();
  json j{{"command", "simulate"}, {"parameters", used}, {"depth", depth},
         {"log_norm", last.product.norm_log()}, {"det_normalized", last.det_normalized},
         {"singular", last.singular}};
  j["rank_one"] = rank_verdict_name(rank_one_diagnostic(t).verdict);
  if (t.has_image()) {
    LimitImage li = image_window_gap(t, tol, window);
    j["image"] = last.image;
    j["limit_image"] = {{"vector", li.vector}, {"converged", li.converged},
                        {"cauchy_gap", li.cauchy_gap}, {"achieved_at", li.achieved_at}};
  }
  return as_json(j);
}

json bernoulli_spec_json(const BernoulliSpec& s) {
  json mats = json::array();
  for (const auto& m : s.matrices) mats.push_back(qmat_to_json(m));
  json p = json::array();
  for (const auto& x : s.p) p.push_back(format_rational(x));
  return {{"base", s.base}, {"p", p}, {"N", s.N}, {"q", s.q}, {"r", s.r},
          {"matrices", mats}, {"c", qmat_to_json(s.c)}, {"rho_r", s.rho_r},
          {"divisible", s.divisible}, {"condition_H", s.condition_H}};
}

BernoulliSpec spec_of(const json& cfg, json& used) {
  if (!cfg.contains("base") || !cfg.contains("p")) bad("need \"base\" and \"p\"");
  std::vector<mpq_class> p;
  json shown = json::array();
  for (const auto& x : cfg.at("p")) {
    p.push_back(json_rational(x));
    p.back().canonicalize();
    shown.push_back(format_rational(p.back()));
  }
  int k = cfg.at("base").get<int>();
  used["base"] = k;
  used["p"] = shown;
  return build_representation(k, p);
}

DispatchOutput run_bernoulli(const json& cfg) {
  json used;
  std::string word = param<std::string>(cfg, "word", "", used);
  if (param<bool>(cfg, "beta_case", false, used)) {
    Word w = parse_word(word, 3);
    const BetaSpec& b = beta_representation();
    json mats = json::array();
    for (const auto& m : b.matrices) mats.push_back(qmat_to_json(m));
    auto iv = beta_interval(w);
    json j{{"command", "bernoulli"}, {"parameters", used},
           {"measure", beta_cylinder_measure(w)},
           {"measure_exact", format_rational(beta_cylinder_measure_exact(w))},
           {"interval", {iv.first, iv.second}},
           {"spec", {{"beta", b.beta}, {"matrices", mats}, {"c", qmat_to_json(b.c)}}}};
    return as_json(j);
  }
  BernoulliSpec spec = spec_of(cfg, used);
  int h = param<int>(cfg, "translate", 0, used);
  Word w = parse_word(word, spec.N + 1);
  auto iv = cylinder_interval(spec.base, w, h);
  mpq_class m = cylinder_measure_exact(spec, w, h);
  json j{{"command", "bernoulli"}, {"parameters", used}, {"measure", m.get_d()},
         {"measure_exact", format_rational(m)},
         {"interval", {format_rational(iv.first), format_rational(iv.second)}},
         {"spec", bernoulli_spec_json(spec)}};
  return as_json(j);
}

DispatchOutput run_gibbs(const json& cfg) {
  json used;
  if (!cfg.contains("family")) bad("gibbs needs \"family\"");
  json fam_cfg = cfg.at("family");
  if (fam_cfg.is_string() && !is_family_preset(fam_cfg.get<std::string>())) {
    fam_cfg = load_json_file(fam_cfg.get<std::string>());
  }
  std::size_t level = param<std::size_t>(cfg, "depth", 10, used);
  std::string grid = param<std::string>(cfg, "q_grid", "-5:5:0.25", used);
  std::vector<double> q = parse_grid(grid);
  int h = param<int>(cfg, "translate", 0, used);
  GibbsOptions go;
  go.n_max = param<std::size_t>(cfg, "n_max", 20, used);
  go.tail_depth = param<std::size_t>(cfg, "tail_depth", 64, used);
  std::string format = format_of(cfg, "csv", used);

  std::optional<BernoulliSpec> spec;
  MatrixFamily fam;
  if (fam_cfg.is_object() && fam_cfg.contains("base") && fam_cfg.contains("p")) {
    json spec_used;
    spec = spec_of(fam_cfg, spec_used);
    used["family"] = spec_used;
    fam = gibbs_family(*spec, h);
  } else {
    fam = parse_family(fam_cfg);
  }

  ScaleSpectrum sp = spec ? scale_spectrum_and_legendre(*spec, q, level, {}, h)
                          : scale_spectrum_and_legendre(fam, q, level);

  // Ratio series along a supplied or seeded random word.
  Word w;
  std::size_t need = go.n_max + go.tail_depth;
  if (cfg.contains("word")) {
    w = parse_word(param<std::string>(cfg, "word", "", used), static_cast<int>(fam.alphabet()));
  } else {
    std::uint64_t seed = require_seed(cfg, used);
    std::vector<double> weights(fam.alphabet(), 1.0);
    if (spec)
      for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = spec->p[i].get_d();
    SymbolSequence s = SymbolSequence::random(weights, seed);
    for (std::size_t n = 0; n < need; ++n) w.push_back(s.at(n));
  }
  GibbsReport gr = potential_and_ratio(fam, w, go);

  if (format == "csv") {
    std::string out = "series,x,value\n";
    for (std::size_t i = 0; i < sp.q.size(); ++i) out += "tau," + num(sp.q[i]) + "," + num(sp.tau[i]) + "\n";
    for (std::size_t i = 0; i < sp.alpha.size(); ++i)
      out += "legendre," + num(sp.alpha[i]) + "," + num(sp.legendre[i]) + "\n";
    for (std::size_t n = 0; n < gr.ratio_root.size(); ++n)
      out += "ratio_root," + std::to_string(n + 1) + "," + num(gr.ratio_root[n]) + "\n";
    return {"csv", out};
  }
  json j{{"command", "gibbs"}, {"parameters", used}, {"q", sp.q}, {"tau", sp.tau},
         {"alpha", sp.alpha}, {"legendre", sp.legendre}, {"cylinders", sp.cylinders},
         {"ratio_root", gr.ratio_root}, {"potential", gr.potential},
         {"sup_deviation", gr.sup_deviation},
         {"potential_oscillation", gr.potential_oscillation}};
  if (spec && spec->r + 1 <= spec->base - 1) {
    Condition24Series c = condition24_probe(*spec, go.n_max, h);
    j["condition24"] = {{"g", c.g}, {"rate", c.rate}, {"limit_estimate", c.limit_estimate}};
  }
  return as_json(j);
}

DispatchOutput run_counterexample(const json& cfg) {
  json used;
  std::string which = param<std::string>(cfg, "which", "", used);
  json j{{"command", "counterexample"}, {"which", which}};
  if (which == "ce12") {
    CE12Build b = ce12_build_and_verify(param<std::size_t>(cfg, "k", 4, used));
    json det = json::array(), dets = json::array();
    for (const auto& d : b.det) {
      det.push_back(d.get_d());
      dets.push_back(format_rational(d));
    }
    j.update({{"n", b.n}, {"s", b.s}, {"h", b.h}, {"det", det}, {"det_exact", dets},
              {"sv_ratio", b.sv_ratio}, {"bound", b.bound.get_d()},
              {"p_upper", format_rational(b.p_upper)}, {"recurrence_ok", b.recurrence_ok},
              {"norm_ok", b.norm_ok}, {"ratio_ok", b.ratio_ok}, {"window_ok", b.window_ok},
              {"certificates_ok", b.certificates_ok}, {"word_length", b.word().size()}});
  } else if (which == "ce13") {
    CE13Options opts;
    opts.centroid_levels = param<std::size_t>(cfg, "centroid_levels", opts.centroid_levels, used);
    CE13Report r = ce13_verify(param<std::size_t>(cfg, "k", 5, used), opts);
    j.update({{"k", r.k}, {"product", qmat_to_json(r.product)},
              {"closed_form_match", r.closed_form_match},
              {"extended_product", qmat_to_json(r.extended)},
              {"extended_match", r.extended_match}, {"centroids", r.centroids},
              {"delta1_over_n", {r.d1_over_n[0], r.d1_over_n[1]}},
              {"delta2", {r.d2[0], r.d2[1]}}, {"n_delta3", {r.n_d3[0], r.n_d3[1]}}});
  } else if (which == "ce22") {
    std::vector<double> p = {0.4, 0.1, 0.2, 0.3};
    if (cfg.contains("p")) {
      p.clear();
      for (const auto& x : cfg.at("p")) p.push_back(json_number(x));
    }
    used["p"] = p;
    CE22Report r = ce22_limits(p);
    j.update({{"limit_11", r.limit_11}, {"limit_12", r.limit_12}, {"distance", r.distance},
              {"uniform", r.uniform}});
  } else {
    bad("counterexample must be ce12, ce13 or ce22");
  }
  j["parameters"] = used;
  return as_json(j);
}

json token_json(const FactorToken& t) {
  return {{"name", t.name()}, {"template", t.template_index}, {"alpha", t.alpha},
          {"literal", word_to_string(t.literal)}};
}

DispatchOutput run_factorize(const json& cfg) {
  json used;
  std::string text = param<std::string>(cfg, "word", "", used);
  Word w = parse_word(text, 3);
  FactorizationResult f = tokenize(w);
  json body = json::array();
  for (const auto& t : f.body) body.push_back(token_json(t));
  json j{{"command", "factorize"}, {"parameters", used}, {"head", token_json(f.head)},
         {"body", body}, {"boundaries", f.boundaries},
         {"verified", verify_factorization(w, f)}};
  return as_json(j);
}

json pattern_json(const SupportPattern& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.rows; ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < p.cols; ++j) r.push_back(p.at(i, j) ? 1 : 0);
    rows.push_back(r);
  }
  return rows;
}

DispatchOutput run_triangular(const json& cfg) {
  json used;
  std::string mode = param<std::string>(cfg, "mode", "", used);
  if (!cfg.contains("factors")) bad("triangular needs \"factors\"");
  std::vector<Mat> base = parse_mat_list(cfg.at("factors"));
  json j{{"command", "triangular"}, {"mode", mode}};
  if (mode == "detect") {
    std::size_t horizon = param<std::size_t>(cfg, "horizon", 200, used);
    BlockFormReport r = block_form_detect(cycled(base, horizon), horizon);
    j.update({{"delta", r.delta}, {"n1", r.n1}, {"checkpoints", r.checkpoints},
              {"partition", r.partition}, {"pattern", pattern_json(r.pattern)},
              {"t1_membership", r.t1_membership}});
  } else if (mode == "classify") {
    std::size_t depth = param<std::size_t>(cfg, "depth", 200, used);
    auto tv = vectors_of(cfg, "test_vectors", {{1, 1, 1}, {1, 2, 3}, {3, 2, 1}}, used);
    TriangularSeries s = series3x3(cycled(base, depth));
    const auto& v = s.v;
    j["series"] = {{"s", v.s.back()}, {"t", v.t.back()}, {"u", v.u.back()}, {"tau", v.tau.back()},
                   {"s_finiteness", finiteness_name(s.s_fin)},
                   {"t_finiteness", finiteness_name(s.t_fin)},
                   {"u_finiteness", finiteness_name(s.u_fin)},
                   {"tau_finiteness", finiteness_name(s.tau_fin)},
                   {"monotone", s.monotone}, {"closed_form_error", s.closed_form_error}};
    if (param<bool>(cfg, "exact", false, used)) {
      std::vector<QMat> q;
      for (std::size_t i = 0; i < depth; ++i) q.push_back(parse_qmat(cfg.at("factors")[i % base.size()]));
      j["exact_closed_form_equal"] = series3x3_exact(q).equal;
    }
    ClassifyReport c = classify3x3_and_predict(s, tv);
    j.update({{"case", c.case_id}, {"limit_point_shape", c.limit_point_shape},
              {"prediction", prediction_name(c.prediction)}, {"predicted", c.predicted},
              {"validation_gap", c.validation_gap}, {"images", c.images}});
  } else if (mode == "lower") {
    std::size_t depth = param<std::size_t>(cfg, "depth", 40, used);
    LowerTriReport r = lower_tri_sv_check(cycled(base, depth));
    j.update({{"ratio_bounded", r.ratio_bounded}, {"sv_column_match", r.sv_column_match},
              {"agree", r.agree}, {"log_ratio_max", r.log_ratio_max.back()},
              {"log_sv_gap_max", r.log_sv_gap_max.back()}});
  } else {
    bad("triangular mode must be detect, classify or lower");
  }
  j["parameters"] = used;
  return as_json(j);
}

DispatchOutput run_curve(const json& cfg) {
  json used;
  int k = param<int>(cfg, "base", 2, used);
  if (!cfg.contains("coeffs")) bad("curve needs \"coeffs\"");
  std::vector<double> coeffs;
  for (const auto& x : cfg.at("coeffs")) coeffs.push_back(json_number(x));
  used["coeffs"] = coeffs;
  std::size_t depth = param<std::size_t>(cfg, "depth", 40, used);
  std::size_t points = param<std::size_t>(cfg, "points", 64, used);
  if (points == 0) bad("points must be positive");
  std::string format = format_of(cfg, "csv", used);
  std::optional<std::vector<double>> seed;
  if (cfg.contains("seed_vector")) {
    std::vector<double> s;
    for (const auto& x : cfg.at("seed_vector")) s.push_back(json_number(x));
    seed = s;
    used["seed_vector"] = s;
  }
  std::vector<double> xs(points);
  for (std::size_t m = 0; m < points; ++m) xs[m] = static_cast<double>(m) / static_cast<double>(points);

  RefinementSystem sys = build_refinement_matrices(k, coeffs);
  auto samples = sample_curve(sys, xs, depth, seed);
  if (format == "csv") {
    std::string out = "x";
    for (std::size_t i = 1; i <= sys.order(); ++i) out += ",psi" + std::to_string(i);
    out += ",gap\n";
    for (const auto& s : samples) {
      out += num(s.x);
      for (double v : s.psi) out += "," + num(v);
      out += "," + num(s.gap) + "\n";
    }
    return {"csv", out};
  }
  ResidualReport r = residual_checks(sys, xs, depth, seed);
  json mats = json::array();
  for (const auto& m : sys.matrices) mats.push_back(mat_to_json(m));
  json pts = json::array();
  for (const auto& s : samples) pts.push_back({{"x", s.x}, {"psi", s.psi}, {"gap", s.gap}});
  json j{{"command", "curve"}, {"parameters", used}, {"q", sys.q}, {"matrices", mats},
         {"coeff_sum", sys.coeff_sum}, {"parity_balanced", sys.parity_balanced},
         {"seed", sys.seed}, {"seed_is_fixed", sys.seed_is_fixed}, {"samples", pts},
         {"self_similarity_residual", r.self_similarity_residual},
         {"max_truncation_gap", r.max_truncation_gap}, {"endpoint_gaps", r.endpoint_gaps},
         {"self_similar", r.self_similar}};
  return as_json(j);
}

}  // namespace

DispatchOutput dispatch(const json& cfg) {
  if (!cfg.is_object() || !cfg.contains("command")) bad("config needs \"command\"");
  std::string c = cfg.at("command").get<std::string>();
  if (c == "simulate") return run_simulate(cfg);
  if (c == "bernoulli") return run_bernoulli(cfg);
  if (c == "gibbs") return run_gibbs(cfg);
  if (c == "counterexample") return run_counterexample(cfg);
  if (c == "factorize") return run_factorize(cfg);
  if (c == "triangular") return run_triangular(cfg);
  if (c == "curve") return run_curve(cfg);
  bad("unknown command " + c);
}

}  // namespace matprod
