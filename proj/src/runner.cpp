#include "cpsg/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cpsg/classical_dsg.hpp"
#include "cpsg/correspondence.hpp"
#include "cpsg/error.hpp"
#include "cpsg/rng.hpp"
#include "cpsg/semiclassical.hpp"
#include "cpsg/transfer.hpp"
#include "cpsg/weights.hpp"

namespace cpsg {

namespace {

using json = nlohmann::ordered_json;

std::string format_residual(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json point_json(const CurvePoint& p) {
  return json{{"x", to_json(p.x)}, {"y", to_json(p.y)}, {"s", to_json(p.s)},
              {"root_x", p.root_x}, {"root_y", p.root_y}};
}

struct Config {
  int N = 3;
  std::uint64_t seed = 1;
  int trials = 1;
  std::optional<double> tol;
  std::map<std::string, double> tolerances;
  std::string format = "json";
  bool timestamp = true;
  int L = 2;
  int M = 2;
  int steps = 10;
  bool background = false;
  std::map<std::string, cplx> complex_values;
  json echo;  // normalized configuration written back into the report
};

const std::set<std::string> kComplexKeys = {"k", "kappa", "alpha", "beta", "lambda", "mu", "P", "Q"};
const std::set<std::string> kKnownKeys = {"N",     "seed",       "trials", "tol",   "tolerances",
                                          "format", "timestamp", "L",      "M",     "steps",
                                          "background"};

[[noreturn]] void bad_config(const std::string& what) { fail(ErrorCode::kInvalidConfig, what); }

cplx parse_complex(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_object() && v.contains("re") && v["re"].is_number()) {
    double im = 0.0;
    if (v.contains("im")) {
      if (!v["im"].is_number()) bad_config("'" + key + ".im' must be a number");
      im = v["im"].get<double>();
    }
    for (const auto& [k, _] : v.items()) {
      if (k != "re" && k != "im") bad_config("unknown field '" + key + "." + k + "'");
    }
    return {v["re"].get<double>(), im};
  }
  bad_config("'" + key + "' must be a number or {\"re\", \"im\"}");
}

int parse_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_config("'" + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < 0 || x > 1'000'000'000) bad_config("'" + key + "' is out of range");
  return static_cast<int>(x);
}

Config parse_config(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    bad_config(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_config("configuration must be a JSON object");
  Config c;
  for (const auto& [key, v] : j.items()) {
    if (kComplexKeys.count(key)) {
      c.complex_values[key] = parse_complex(v, key);
    } else if (!kKnownKeys.count(key)) {
      bad_config("unknown configuration key '" + key + "'");
    }
  }
  if (j.contains("N")) c.N = parse_int(j["N"], "N");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) bad_config("'seed' must be an integer");
    if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0) bad_config("'seed' must be nonnegative");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trials")) c.trials = parse_int(j["trials"], "trials");
  if (j.contains("L")) c.L = parse_int(j["L"], "L");
  if (j.contains("M")) c.M = parse_int(j["M"], "M");
  if (j.contains("steps")) c.steps = parse_int(j["steps"], "steps");
  if (j.contains("tol")) {
    if (!j["tol"].is_number()) bad_config("'tol' must be a number");
    c.tol = j["tol"].get<double>();
    if (!(*c.tol > 0.0)) bad_config("'tol' must be positive");
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) bad_config("'tolerances' must be an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) bad_config("tolerance '" + k + "' must be positive");
      c.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) bad_config("'format' must be a string");
    c.format = j["format"].get<std::string>();
    if (c.format != "json" && c.format != "csv") bad_config("'format' must be json or csv");
  }
  if (j.contains("timestamp")) {
    if (!j["timestamp"].is_boolean()) bad_config("'timestamp' must be a boolean");
    c.timestamp = j["timestamp"].get<bool>();
  }
  if (j.contains("background")) {
    if (!j["background"].is_boolean()) bad_config("'background' must be a boolean");
    c.background = j["background"].get<bool>();
  }
  if (c.N < 1) bad_config("'N' must be at least 1");
  if (c.trials < 1) bad_config("'trials' must be at least 1");
  return c;
}

// One named residual with the tolerance it is judged against.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return residual < tolerance; }
};

struct Trial {
  int index = 0;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  json values = json::object();
  json branch = json::object();
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  }
};

// Tolerance of each named check: built-in default, then the primary check takes
// `tol`, then `tolerances` overrides by name.
class Tolerances {
 public:
  Tolerances(const Config& c, std::map<std::string, double> defaults, const std::string& primary)
      : values_(std::move(defaults)) {
    if (c.tol) values_[primary] = *c.tol;
    for (const auto& [k, v] : c.tolerances) {
      if (!values_.count(k)) bad_config("unknown tolerance name '" + k + "'");
      values_[k] = v;
    }
  }
  Check check(const std::string& name, double residual) const { return {name, residual, values_.at(name)}; }
  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct Defaults {
  int N;
  int trials;
  int L;
  int M;
};

cplx config_complex(const Config& c, const std::string& key, cplx fallback) {
  auto it = c.complex_values.find(key);
  return it == c.complex_values.end() ? fallback : it->second;
}

CurveModulus random_modulus(Rng& rng) {
  return make_modulus(cplx(rng.uniform(0.2, 0.8), rng.uniform(-0.3, 0.3)));
}

cplx random_complex(Rng& rng, double lo, double hi) {
  return std::polar(std::exp(rng.uniform(lo, hi)), rng.uniform(-std::numbers::pi, std::numbers::pi));
}

double rel_diff(cplx a, cplx b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

using TrialFn = std::function<void(Trial&, Rng&)>;

struct Command {
  Defaults defaults;
  std::map<std::string, double> tolerances;
  std::string primary;
  // Builds the per-trial body once the configuration is known.
  std::function<TrialFn(const Config&, const Tolerances&, const RootContext&)> make;
};

CurveModulus trial_modulus(const Config& c, Rng& rng) {
  auto it = c.complex_values.find("k");
  return it == c.complex_values.end() ? random_modulus(rng) : make_modulus(it->second);
}

TrialFn make_str(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    const auto mod = trial_modulus(c, rng);
    const auto pts = sample_points(mod, 3, rng.index(1 << 30), ctx);
    const auto res = star_triangle_residual(pts[0], pts[1], pts[2], ctx);
    t.checks.push_back(tol.check("str", res.residual));
    t.checks.push_back(tol.check("ratio_check", res.ratio_check));
    t.values["k"] = to_json(mod.k);
    t.values["R_pqr"] = to_json(res.R_pqr);
    t.values["R_pqr_power_n"] = to_json(res.R_pqr_power_n);
    t.branch["R_root_index"] = res.root_index;
    t.branch["points"] = json::array({point_json(pts[0]), point_json(pts[1]), point_json(pts[2])});
  };
}

TrialFn make_str_matrix(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    const auto mod = trial_modulus(c, rng);
    const auto pts = sample_points(mod, 3, rng.index(1 << 30), ctx);
    const auto scalar = star_triangle_residual(pts[0], pts[1], pts[2], ctx);
    const auto matrix = str_matrix_residual(pts[0], pts[1], pts[2], ctx);
    t.checks.push_back(tol.check("str_matrix", matrix.residual));
    t.checks.push_back(tol.check("scalar_agreement", std::abs(matrix.residual - scalar.residual)));
    t.values["k"] = to_json(mod.k);
    t.values["scalar_residual"] = format_residual(scalar.residual);
    t.values["R_pqr"] = to_json(matrix.R_pqr);
    t.branch["R_root_index"] = scalar.root_index;
    t.branch["points"] = json::array({point_json(pts[0]), point_json(pts[1]), point_json(pts[2])});
  };
}

TrialFn make_twisted_ybe(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    auto positive = [&rng]() { return std::exp(rng.uniform(-1.0, 1.0)); };
    const cplx lambda = config_complex(c, "lambda", positive());
    const cplx mu = config_complex(c, "mu", positive());
    const cplx P = config_complex(c, "P", rng.uniform(-1.0, 1.0));
    const cplx Q = config_complex(c, "Q", rng.uniform(-1.0, 1.0));
    const auto params = twisted_params(lambda, mu, P, Q, ctx);
    t.checks.push_back(tol.check("twisted_ybe", twisted_ybe_residual(params, ctx)));
    const cplx x = positive();
    t.checks.push_back(tol.check("rbar_product", rbar_product_residual(lambda, x, ctx)));
    t.checks.push_back(tol.check("rbar_shift", rbar_shift_residual(lambda, x, ctx)));
    TwistOverride untwist;
    untwist.untwist_P_prime = true;
    t.values["untwisted_residual"] = format_residual(twisted_ybe_residual(params, ctx, untwist));
    t.values["lambda"] = to_json(lambda);
    t.values["mu"] = to_json(mu);
    t.values["P"] = to_json(P);
    t.values["Q"] = to_json(Q);
    t.values["exp_P_prime"] = to_json(params.exp_P_prime);
    t.values["exp_Q_prime"] = to_json(params.exp_Q_prime);
    t.values["exp_P_dprime"] = to_json(params.exp_P_dprime);
    t.values["exp_Q_dprime"] = to_json(params.exp_Q_dprime);
    t.branch["twisted_roots"] = "principal";
  };
}

TrialFn make_correspondence(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    auto positive = [&rng]() { return std::exp(rng.uniform(-1.0, 1.0)); };
    const cplx lambda = config_complex(c, "lambda", positive());
    const cplx mu = config_complex(c, "mu", positive());
    const cplx eP = std::exp(config_complex(c, "P", rng.uniform(-1.0, 1.0)));
    const cplx eQ = std::exp(config_complex(c, "Q", rng.uniform(-1.0, 1.0)));
    const auto found = search_triple(lambda, mu, eP, eQ, tol.all().at("factor"), ctx);
    const auto& r = found.report;
    t.checks.push_back(tol.check("first_four", r.first_four_residual));
    t.checks.push_back(tol.check("square_relations", r.square_relations_residual));
    t.checks.push_back(tol.check("modulus", r.modulus_residual));
    t.checks.push_back(tol.check("last_eight", r.last_eight_residual));
    t.checks.push_back(tol.check("factor", r.max_factor_residual));
    t.checks.push_back(tol.check("R_pqr", r.R_pqr_residual));
    t.checks.push_back(
        tol.check("ybe_str_agreement", std::abs(r.twisted_ybe_residual - r.str_matrix_residual)));

    const cplx alpha = config_complex(c, "alpha", random_complex(rng, -0.3, 0.3));
    const cplx beta = config_complex(c, "beta", random_complex(rng, -0.3, 0.3));
    const cplx kappa = config_complex(c, "kappa", random_complex(rng, -0.3, 0.3));
    const auto bg = background_correspondence(alpha, beta, kappa, tol.all().at("background"), ctx);
    t.checks.push_back(tol.check("background", bg.residual));

    t.values["lambda"] = to_json(lambda);
    t.values["mu"] = to_json(mu);
    t.values["exp_P"] = to_json(eP);
    t.values["exp_Q"] = to_json(eQ);
    t.values["k"] = to_json(found.triple.modulus.k);
    t.values["R_pqr"] = to_json(r.R_pqr_value);
    t.values["last_eight_printed_residual"] = format_residual(r.last_eight_printed_residual);
    t.values["twisted_ybe_residual"] = format_residual(r.twisted_ybe_residual);
    t.values["str_matrix_residual"] = format_residual(r.str_matrix_residual);
    json factors = json::array();
    for (double f : r.factor_residuals) factors.push_back(format_residual(f));
    t.values["factor_residuals"] = factors;
    t.values["background_k"] = to_json(bg.modulus.k);
    t.branch["sign_lambda"] = found.params.sign_lambda;
    t.branch["sign_mu"] = found.params.sign_mu;
    t.branch["root_indices"] = found.triple.branch.roots;
    t.branch["branches_tried"] = found.branches_tried;
    t.branch["background_kprime_sign"] = bg.kprime_sign;
    t.branch["background_root_indices"] = bg.roots;
  };
}

TrialFn make_dilog12(const Config&, const Tolerances& tol, const RootContext&) {
  return [&tol](Trial& t, Rng& rng) {
    double v[4];
    for (double& x : v) x = rng.uniform(0.1, 10.0);
    const double diff = twelve_term_difference(v[0], v[1], v[2], v[3]);
    double grad = 0.0;
    for (int i = 0; i < 4; ++i) {
      double up[4] = {v[0], v[1], v[2], v[3]};
      double down[4] = {v[0], v[1], v[2], v[3]};
      const double h = 1e-4 * v[i];
      up[i] += h;
      down[i] -= h;
      const double d = (twelve_term_difference(up[0], up[1], up[2], up[3]) -
                        twelve_term_difference(down[0], down[1], down[2], down[3])) /
                       (2.0 * h);
      grad = std::max(grad, std::abs(d));
    }
    const auto inv = substitution_invariants(v[0], v[1], v[2], v[3]);
    const auto saddle = saddle_maps(v[0], v[1], v[2], v[3]);
    t.checks.push_back(tol.check("twelve_term", std::abs(diff)));
    t.checks.push_back(tol.check("gradient", grad));
    t.checks.push_back(tol.check("F0", inv.F0_residual));
    t.checks.push_back(tol.check("F1", inv.F1_residual));
    t.checks.push_back(tol.check("involution", involution_residual(v[0], v[1], v[2], v[3])));
    t.checks.push_back(tol.check("saddle_consistency", saddle.consistency_residual));
    t.values["lambda"] = v[0];
    t.values["mu"] = v[1];
    t.values["x_prime"] = v[2];
    t.values["y_prime"] = v[3];
    t.values["F1"] = to_json(inv.F1);
  };
}

TrialFn make_six_vertex(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    auto rc = [&rng]() { return random_complex(rng, -0.4, 0.4); };
    const cplx lambda = rc(), mu = rc(), q = rc();
    t.checks.push_back(tol.check("ybe_a", ybe_a_residual(lambda, mu, q)));
    const auto pair = weyl_pair(ctx);
    const cplx cu = rc(), cv = rc();
    t.checks.push_back(tol.check("ybe_b", ybe_b_residual(lambda, mu, ctx.q0(), pair.U * cu, pair.V * cv)));

    const auto sites = static_cast<std::size_t>(2 * c.L);
    std::vector<cplx> cs(sites), ds(sites);
    for (auto& v : cs) v = rc();
    for (auto& v : ds) v = rc();
    const cplx kappa = config_complex(c, "kappa", rc());
    const auto chain = make_chain(c.L, kappa, cs, ds, ctx);
    const auto t1 = chain_transfer(chain, lambda);
    const auto t2 = chain_transfer(chain, mu);
    t.checks.push_back(tol.check("commutator", commutator_residual(t1, t2)));
    const auto other = gauge_equivalent_chain(chain, rng.index(1 << 30));
    t.checks.push_back(tol.check("gauge", gauge_invariance_residual(chain, other, lambda)));
    std::vector<cplx> nodes;
    for (int i = 0; i <= 2 * c.L; ++i) nodes.push_back(0.5 + 0.15 * i);
    t.checks.push_back(tol.check("interpolation", chain_interpolation_residual(chain, nodes, rc())));
    t.values["lambda"] = to_json(lambda);
    t.values["mu"] = to_json(mu);
    t.values["q"] = to_json(q);
    t.values["kappa"] = to_json(kappa);
    t.values["site_dimension"] = pair.dim;
  };
}

TrialFn make_f_identity(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    const cplx kappa = config_complex(c, "kappa", random_complex(rng, -0.5, 0.5));
    const cplx x = random_complex(rng, -0.5, 0.5);
    t.checks.push_back(tol.check("f_identity", f_factor_identity_residual(kappa, x, ctx)));
    t.values["kappa"] = to_json(kappa);
    t.values["x"] = to_json(x);
  };
}

TrialFn make_evolve(const Config& c, const Tolerances& tol, const RootContext&) {
  return [&c, &tol](Trial& t, Rng& rng) {
    if (c.L < 2) bad_config("'L' must be at least 2 for evolve");
    // Unset parameters are drawn per trial.
    const cplx lambda = config_complex(c, "lambda", random_complex(rng, -0.4, 0.4));
    LatticeState state;
    if (c.background) {
      const cplx alpha = config_complex(c, "alpha", random_complex(rng, -0.5, 0.5));
      const cplx beta = config_complex(c, "beta", random_complex(rng, -0.5, 0.5));
      state = constant_background(c.L, alpha, beta);
    } else {
      std::vector<cplx> w(2 * static_cast<std::size_t>(c.L));
      for (auto& v : w) v = random_complex(rng, -0.5, 0.5);
      state = make_state(std::move(w));
    }
    const LatticeState initial = state;
    const auto c0 = casimirs(state);
    double drift = 0.0;
    json trajectory = json::array();
    for (int s = 0; s < c.steps; ++s) {
      state = evolve(state, lambda);
      const auto cs = casimirs(state);
      drift = std::max({drift, rel_diff(cs.C1, c0.C1), rel_diff(cs.C2, c0.C2)});
      trajectory.push_back(json{{"C1", to_json(cs.C1)}, {"C2", to_json(cs.C2)}});
    }
    t.checks.push_back(tol.check("casimir", drift));
    if (c.background) {
      double moved = 0.0;
      for (std::size_t i = 0; i < state.w.size(); ++i) moved = std::max(moved, rel_diff(state.w[i], initial.w[i]));
      t.checks.push_back(tol.check("stationarity", moved));
    }
    json final_state = json::array();
    for (cplx v : state.w) final_state.push_back(to_json(v));
    t.values["lambda"] = to_json(lambda);
    t.values["casimirs"] = trajectory;
    t.values["final_state"] = final_state;
  };
}

TrialFn make_partition(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    if (c.L < 1 || c.M < 1) bad_config("'L' and 'M' must be at least 1");
    const auto mod = trial_modulus(c, rng);
    const auto pts = sample_points(mod, 2, rng.index(1 << 30), ctx);
    const auto value = partition_function(pts[0], pts[1], c.L, c.M, ctx);
    t.values["k"] = to_json(mod.k);
    t.values["trace"] = to_json(value.value);
    t.values["route"] = value.route;
    double configs = std::pow(static_cast<double>(c.N), static_cast<double>(c.L) * c.M);
    if (configs <= static_cast<double>(kMaxBruteForceConfigs)) {
      const cplx brute = brute_force_partition(pts[0], pts[1], c.L, c.M, ctx);
      t.values["brute_force"] = to_json(brute);
      t.checks.push_back(tol.check("partition", rel_diff(value.value, brute)));
    } else {
      t.values["brute_force"] = nullptr;
    }
    t.branch["points"] = json::array({point_json(pts[0]), point_json(pts[1])});
  };
}

TrialFn make_curve_sample(const Config& c, const Tolerances& tol, const RootContext& ctx) {
  return [&c, &tol, &ctx](Trial& t, Rng& rng) {
    const auto mod = make_modulus(config_complex(c, "k", cplx(0.5, 0.2)));
    const auto p = sample_points(mod, 1, rng.index(1 << 30), ctx).front();
    t.checks.push_back(tol.check("curve", validate_point(p, ctx)));
    t.values["k"] = to_json(mod.k);
    t.values["k_prime"] = to_json(mod.k_prime);
    t.values["point"] = point_json(p);
    t.values["t"] = to_json(p.t);
  };
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"verify str", {{3, 50, 2, 2}, {{"str", 1e-10}, {"ratio_check", 1e-10}}, "str", make_str}},
      {"verify str-matrix",
       {{4, 20, 2, 2}, {{"str_matrix", 1e-10}, {"scalar_agreement", 1e-12}}, "str_matrix", make_str_matrix}},
      {"verify twisted-ybe",
       {{3, 50, 2, 2},
        {{"twisted_ybe", 1e-9}, {"rbar_product", 1e-10}, {"rbar_shift", 1e-10}},
        "twisted_ybe",
        make_twisted_ybe}},
      {"verify correspondence",
       {{2, 30, 2, 2},
        {{"first_four", 1e-12},
         {"square_relations", 1e-12},
         {"modulus", 1e-10},
         {"last_eight", 1e-9},
         {"factor", 1e-9},
         {"R_pqr", 1e-9},
         {"ybe_str_agreement", 1e-10},
         {"background", 1e-8}},
        "last_eight",
        make_correspondence}},
      {"verify dilog12",
       {{1, 200, 2, 2},
        {{"twelve_term", 1e-9},
         {"gradient", 1e-7},
         {"F0", 1e-9},
         {"F1", 1e-12},
         {"involution", 1e-12},
         {"saddle_consistency", 1e-12}},
        "twelve_term",
        make_dilog12}},
      {"verify six-vertex",
       {{2, 10, 2, 2},
        {{"ybe_a", 1e-12}, {"ybe_b", 1e-12}, {"commutator", 1e-10}, {"gauge", 1e-11}, {"interpolation", 1e-9}},
        "commutator",
        make_six_vertex}},
      {"verify f-identity", {{3, 1000, 2, 2}, {{"f_identity", 1e-12}}, "f_identity", make_f_identity}},
      {"evolve", {{1, 1, 3, 2}, {{"casimir", 1e-11}, {"stationarity", 1e-14}}, "casimir", make_evolve}},
      {"partition", {{2, 1, 2, 2}, {{"partition", 1e-10}}, "partition", make_partition}},
      {"curve sample", {{3, 10, 2, 2}, {{"curve", 1e-10}}, "curve", make_curve_sample}},
  };
  return table;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_report(const std::vector<Trial>& trials) {
  std::ostringstream out;
  out << "trial,seed,pass";
  if (!trials.empty()) {
    for (const auto& c : trials.front().checks) out << ',' << c.name;
  }
  out << '\n';
  for (const auto& t : trials) {
    out << t.index << ',' << t.seed << ',' << (t.pass() ? "true" : "false");
    for (const auto& c : t.checks) out << ',' << format_residual(c.residual);
    out << '\n';
  }
  return out.str();
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : commands()) v.push_back(k);
    return v;
  }();
  return names;
}

RunResult run(const std::string& command, const std::string& config_json) {
  const auto& table = commands();
  const auto it = table.find(command);
  if (it == table.end()) fail(ErrorCode::kUnknownCommand, "unknown subcommand '" + command + "'");
  const Command& cmd = it->second;

  // Apply per-command defaults for the keys the caller left out.
  json raw = config_json.empty() ? json::object() : json::parse(config_json, nullptr, false);
  if (raw.is_discarded() || !raw.is_object()) {
    parse_config(config_json);  // reports the precise problem
  }
  if (!raw.contains("N")) raw["N"] = cmd.defaults.N;
  if (!raw.contains("trials")) raw["trials"] = cmd.defaults.trials;
  if (!raw.contains("L")) raw["L"] = cmd.defaults.L;
  if (!raw.contains("M")) raw["M"] = cmd.defaults.M;
  Config cfg = parse_config(raw.dump());
  const Tolerances tol(cfg, cmd.tolerances, cmd.primary);
  const RootContext ctx = make_root_context(cfg.N);
  const TrialFn body = cmd.make(cfg, tol, ctx);

  std::vector<Trial> trials(static_cast<std::size_t>(cfg.trials));
  for (int i = 0; i < cfg.trials; ++i) {
    Trial& t = trials[static_cast<std::size_t>(i)];
    t.index = i;
    t.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    Rng rng(t.seed);
    body(t, rng);
  }

  RunResult result;
  result.passed = std::all_of(trials.begin(), trials.end(), [](const Trial& t) { return t.pass(); });
  if (cfg.format == "csv") {
    result.report = csv_report(trials);
    return result;
  }

  json report;
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = command;
  json echo = json::object();
  echo["N"] = cfg.N;
  echo["seed"] = cfg.seed;
  echo["trials"] = cfg.trials;
  echo["L"] = cfg.L;
  echo["M"] = cfg.M;
  for (const auto& [k, v] : cfg.complex_values) echo[k] = to_json(v);
  json tolerances = json::object();
  for (const auto& [k, v] : tol.all()) tolerances[k] = format_residual(v);
  echo["tolerances"] = tolerances;
  report["config"] = echo;
  report["provenance"] = {{"seed", cfg.seed},
                          {"seed_derivation", "splitmix64(seed, trial index)"},
                          {"root_convention", "q0 = -exp(i pi / N), omega = exp(-2 i pi / N)"},
                          {"library_version", "0.1.0"}};
  std::map<std::string, double> worst;
  json trial_array = json::array();
  for (const auto& t : trials) {
    json residuals = json::object();
    for (const auto& c : t.checks) {
      residuals[c.name] = format_residual(c.residual);
      double& w = worst[c.name];
      if (std::isnan(c.residual) || c.residual > w) w = c.residual;
    }
    trial_array.push_back(json{{"index", t.index},
                               {"seed", t.seed},
                               {"pass", t.pass()},
                               {"residuals", residuals},
                               {"values", t.values},
                               {"branch", t.branch}});
  }
  report["trials"] = trial_array;
  json max_residuals = json::object();
  for (const auto& [k, v] : worst) max_residuals[k] = format_residual(v);
  double overall = 0.0;
  for (const auto& [k, v] : worst) {
    if (std::isnan(v) || v > overall) overall = v;
  }
  report["summary"] = {{"max_residuals", max_residuals},
                       {"max_residual", format_residual(overall)},
                       {"pass", result.passed}};
  if (cfg.timestamp) report["generated_at"] = utc_timestamp();
  result.report = report.dump(2) + "\n";
  return result;
}

}  // namespace cpsg
