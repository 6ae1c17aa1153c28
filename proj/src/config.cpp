#include "tractlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tractlab {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) { throw ConfigError(path, msg); }

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(path, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(path + "." + it.key(), "unknown field");
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "expected a finite number");
  return v;
}

double num_or(const json& o, const char* key, const std::string& path, double def) {
  return o.contains(key) ? num(o[key], path + "." + key) : def;
}

double positive(const json& o, const char* key, const std::string& path, double def) {
  const double v = num_or(o, key, path, def);
  if (!(v > 0.0)) bad(path + "." + key, "must be positive");
  return v;
}

double nonneg(const json& o, const char* key, const std::string& path, double def) {
  const double v = num_or(o, key, path, def);
  if (!(v >= 0.0)) bad(path + "." + key, "must be >= 0");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>()) return j.get<std::int64_t>();
    bad(path, "expected an integer");
  }
  return j.get<std::int64_t>();
}

std::int64_t pos_int(const json& o, const char* key, const std::string& path, std::int64_t def) {
  const std::int64_t v = o.contains(key) ? integer(o[key], path + "." + key) : def;
  if (v < 1) bad(path + "." + key, "must be a positive integer");
  return v;
}

std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> num_list(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

WeightSequence weight(const json& j, const std::string& path, bool repeat_default) {
  allow_keys(j, path, {"kind", "parameter", "scale", "values", "beyond"});
  if (!j.contains("kind")) bad(path + ".kind", "missing");
  const std::string kind = str(j["kind"], path + ".kind");
  const double scale = positive(j, "scale", path, 1.0);
  try {
    if (kind == "explicit") {
      if (!j.contains("values")) bad(path + ".values", "missing");
      bool repeat = repeat_default;
      if (j.contains("beyond")) {
        const std::string b = str(j["beyond"], path + ".beyond");
        if (b == "zero")
          repeat = false;
        else if (b == "last")
          repeat = true;
        else
          bad(path + ".beyond", "expected \"zero\" or \"last\"");
      }
      auto v = num_list(j["values"], path + ".values");
      for (double& x : v) x *= scale;
      return WeightSequence::explicit_list(std::move(v), repeat);
    }
    if (!j.contains("parameter")) bad(path + ".parameter", "missing");
    const double p = num(j["parameter"], path + ".parameter");
    if (kind == "power") return WeightSequence::power(p, scale);
    if (kind == "geometric") return WeightSequence::geometric(p, scale);
    if (kind == "constant") return WeightSequence::constant(p * scale);
  } catch (const InvalidParameter& e) {
    bad(path, e.what());
  }
  bad(path + ".kind", "unknown weight kind '" + kind + "' (power, geometric, constant, explicit)");
}

UnivariateSpectrum spectrum(const json& j, const std::string& path) {
  allow_keys(j, path, {"values", "log_values", "tail", "scale", "log_scale", "parameter"});
  using T = UnivariateSpectrum::Tail;
  T tail = T::Finite;
  if (j.contains("tail")) {
    const std::string t = str(j["tail"], path + ".tail");
    if (t == "finite" || t == "none")
      tail = T::Finite;
    else if (t == "zero")
      tail = T::Zero;
    else if (t == "geometric")
      tail = T::Geometric;
    else if (t == "power")
      tail = T::PowerLaw;
    else
      bad(path + ".tail", "unknown tail '" + t + "' (finite, zero, geometric, power)");
  }
  if (j.contains("values") && j.contains("log_values")) bad(path, "give values or log_values, not both");
  if (j.contains("scale") && j.contains("log_scale")) bad(path, "give scale or log_scale, not both");
  const bool needs_param = tail == T::Geometric || tail == T::PowerLaw;
  if (needs_param && !j.contains("parameter")) bad(path + ".parameter", "missing for this tail");
  const double param = num_or(j, "parameter", path, 0.0);
  try {
    if (j.contains("log_values")) {
      const double ls = j.contains("scale") ? std::log(positive(j, "scale", path, 1.0)) : num_or(j, "log_scale", path, 0.0);
      return UnivariateSpectrum::from_logs(num_list(j["log_values"], path + ".log_values"), tail, ls, param);
    }
    std::vector<double> v;
    if (j.contains("values")) v = num_list(j["values"], path + ".values");
    const double sc = j.contains("log_scale") ? std::exp(num(j["log_scale"], path + ".log_scale")) : positive(j, "scale", path, 1.0);
    return UnivariateSpectrum::from_values(std::move(v), tail, sc, param);
  } catch (const InvalidParameter& e) {
    bad(path, e.what());
  }
}

SpectrumModel problem(const json& j) {
  const std::string path = "problem";
  allow_keys(j, path, {"kind", "alpha", "gamma", "omega", "a", "b", "univariate", "per_d", "spectrum"});
  if (!j.contains("kind")) bad(path + ".kind", "missing");
  const std::string kind = str(j["kind"], path + ".kind");
  SpectrumModel m;
  try {
    if (kind == "korobov") {
      m = SpectrumModel::korobov(num_or(j, "alpha", path, 1.0));
    } else if (kind == "weighted_korobov") {
      if (!j.contains("gamma")) bad(path + ".gamma", "missing");
      m = SpectrumModel::weighted_korobov(num_or(j, "alpha", path, 1.0), weight(j["gamma"], path + ".gamma", false));
    } else if (kind == "analytic_korobov") {
      if (!j.contains("a")) bad(path + ".a", "missing");
      if (!j.contains("b")) bad(path + ".b", "missing");
      m = SpectrumModel::analytic_korobov(num_or(j, "omega", path, 0.5), weight(j["a"], path + ".a", true),
                                          weight(j["b"], path + ".b", true));
    } else if (kind == "tensor") {
      if (!j.contains("univariate")) bad(path + ".univariate", "missing");
      m = SpectrumModel::tensor(spectrum(j["univariate"], path + ".univariate"));
    } else if (kind == "explicit") {
      std::vector<UnivariateSpectrum> per_d;
      if (j.contains("per_d")) {
        if (!j["per_d"].is_array() || j["per_d"].empty()) bad(path + ".per_d", "expected a non-empty array");
        for (std::size_t i = 0; i < j["per_d"].size(); ++i)
          per_d.push_back(spectrum(j["per_d"][i], path + ".per_d[" + std::to_string(i) + "]"));
      } else if (j.contains("spectrum")) {
        per_d.push_back(spectrum(j["spectrum"], path + ".spectrum"));
      } else {
        bad(path, "explicit problems need per_d or spectrum");
      }
      m = SpectrumModel::explicit_model(std::move(per_d));
    } else {
      bad(path + ".kind", "unknown problem kind '" + kind +
                              "' (korobov, weighted_korobov, analytic_korobov, tensor, explicit)");
    }
    m.validate();
  } catch (const InvalidParameter& e) {
    bad(path, e.what());
  }
  return m;
}

std::vector<double> eps_grid(const json& j, const std::string& path) {
  std::vector<double> v;
  if (j.is_array()) {
    v = num_list(j, path);
  } else if (j.is_object()) {
    allow_keys(j, path, {"from", "to", "count"});
    for (const char* k : {"from", "to", "count"})
      if (!j.contains(k)) bad(path + "." + k, "missing");
    const double from = positive(j, "from", path, 1.0), to = positive(j, "to", path, 1.0);
    const auto count = pos_int(j, "count", path, 1);
    if (count == 1 && from != to) bad(path + ".count", "a range with from != to needs count >= 2");
    const double lf = std::log10(from), lt = std::log10(to);
    for (std::int64_t i = 0; i < count; ++i)
      v.push_back(count == 1 ? from : std::pow(10.0, lf + (lt - lf) * static_cast<double>(i) / (count - 1)));
  } else {
    bad(path, "expected a list or {from, to, count}");
  }
  if (v.empty()) bad(path, "grid must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0)) bad(path + "[" + std::to_string(i) + "]", "epsilon must be positive");
  return v;
}

std::vector<int> d_grid(const json& j, const std::string& path) {
  std::vector<int> v;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto x = integer(j[i], path + "[" + std::to_string(i) + "]");
      if (x < 1 || x > 100000) bad(path + "[" + std::to_string(i) + "]", "d must be in [1, 100000]");
      v.push_back(static_cast<int>(x));
    }
  } else if (j.is_object()) {
    allow_keys(j, path, {"from", "to"});
    const auto from = pos_int(j, "from", path, 1), to = pos_int(j, "to", path, 1);
    if (to < from || to > 100000) bad(path + ".to", "need from <= to <= 100000");
    for (auto d = from; d <= to; ++d) v.push_back(static_cast<int>(d));
  } else {
    bad(path, "expected a list or {from, to}");
  }
  if (v.empty()) bad(path, "grid must not be empty");
  return v;
}

template <class T, class F>
std::vector<T> one_or_many(const json& j, const std::string& path, F parse1) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) bad(path, "must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse1(j[i], path + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(parse1(j, path));
  }
  return out;
}

ErrorCriterion criterion(const json& j, const std::string& path) {
  const std::string s = str(j, path);
  if (s == "ABS" || s == "abs") return ErrorCriterion::ABS;
  if (s == "NOR" || s == "nor") return ErrorCriterion::NOR;
  bad(path, "expected ABS or NOR");
}

Setting setting(const json& j, const std::string& path) {
  const std::string s = str(j, path);
  if (s == "worst" || s == "WORST") return Setting::WORST;
  if (s == "avg" || s == "AVG" || s == "average") return Setting::AVG;
  bad(path, "expected worst or avg");
}

TFamily family(const json& j, const std::string& path) {
  const std::string s = str(j, path);
  if (s == "ALG" || s == "alg") return TFamily::ALG;
  if (s == "EXP" || s == "exp") return TFamily::EXP;
  if (s == "QPT" || s == "qpt") return TFamily::QPT;
  bad(path, "expected ALG, EXP or QPT");
}

AnalysisRequest analysis(const json& j, const std::string& path) {
  if (j.is_string()) return analysis(json{{"name", j}}, path);
  allow_keys(j, path,
             {"name", "tau", "L", "tau1", "tau2", "tau3", "H", "c_grid", "d_max", "trend_threshold", "tol", "family",
              "params", "p", "d", "delta", "ell_check", "ell_sum", "expr", "compare", "points"});
  if (!j.contains("name")) bad(path + ".name", "missing");
  AnalysisRequest a;
  a.name = str(j["name"], path + ".name");
  const auto& names = RunConfig::analysis_names();
  if (std::find(names.begin(), names.end(), a.name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    bad(path + ".name", "unknown analysis '" + a.name + "'; supported: " + list);
  }
  auto& p = a.params;
  p.tau = positive(j, "tau", path, 1.0);
  p.L = static_cast<std::uint64_t>(pos_int(j, "L", path, 1));
  p.tau1 = nonneg(j, "tau1", path, 0.0);
  p.tau2 = nonneg(j, "tau2", path, 0.0);
  p.tau3 = positive(j, "tau3", path, p.tau);
  p.H = positive(j, "H", path, static_cast<double>(p.L));
  if (j.contains("c_grid")) {
    p.c_grid = num_list(j["c_grid"], path + ".c_grid");
    if (p.c_grid.empty()) bad(path + ".c_grid", "must not be empty");
    for (std::size_t i = 0; i < p.c_grid.size(); ++i)
      if (!(p.c_grid[i] > 0.0)) bad(path + ".c_grid[" + std::to_string(i) + "]", "must be positive");
  }
  p.d_max = static_cast<int>(pos_int(j, "d_max", path, 10));
  p.trend_threshold = positive(j, "trend_threshold", path, 0.05);
  a.tol = positive(j, "tol", path, 1e-3);

  if (a.name == "t_condition" || a.name == "validate_T") {
    if (!j.contains("family")) bad(path + ".family", "missing");
    a.family = family(j["family"], path + ".family");
    const TractabilityFunctionSpec spec{*a.family, {}, 0, ""};
    if (a.name == "t_condition") {
      if (!j.contains("params")) bad(path + ".params", "missing");
      a.tp = num_list(j["params"], path + ".params");
      if (static_cast<int>(a.tp.size()) != spec.s())
        bad(path + ".params", "expected " + std::to_string(spec.s()) + " values for " + to_string(*a.family));
      for (double v : a.tp)
        if (!(v >= 0.0)) bad(path + ".params", "values must be >= 0");
    }
  }
  if (a.name == "sigma_bound") {
    for (const char* k : {"p", "delta"})
      if (!j.contains(k)) bad(path + "." + k, "missing");
    a.p = positive(j, "p", path, 1.0);
    a.delta = positive(j, "delta", path, 1.0);
    a.d = static_cast<int>(pos_int(j, "d", path, 1));
    a.ell_check = static_cast<int>(j.contains("ell_check") ? integer(j["ell_check"], path + ".ell_check") : 20);
    a.ell_sum = static_cast<int>(j.contains("ell_sum") ? integer(j["ell_sum"], path + ".ell_sum") : 2000);
    if (a.ell_check < 0 || a.ell_sum < a.ell_check) bad(path + ".ell_sum", "need 0 <= ell_check <= ell_sum");
  }
  if (a.name == "growth_model") {
    if (!j.contains("expr")) bad(path + ".expr", "missing");
    a.expr = str(j["expr"], path + ".expr");
    try {
      GrowthModel::parse(a.expr);
    } catch (const InvalidParameter& e) {
      bad(path + ".expr", e.what());
    }
    if (j.contains("compare")) {
      if (!j["compare"].is_array()) bad(path + ".compare", "expected an array of expressions");
      for (std::size_t i = 0; i < j["compare"].size(); ++i) {
        const std::string q = path + ".compare[" + std::to_string(i) + "]";
        a.compare.push_back(str(j["compare"][i], q));
        try {
          GrowthModel::parse(a.compare.back());
        } catch (const InvalidParameter& e) {
          bad(q, e.what());
        }
      }
    }
    if (j.contains("points")) {
      if (!j["points"].is_array()) bad(path + ".points", "expected an array of {epsilon, d}");
      for (std::size_t i = 0; i < j["points"].size(); ++i) {
        const std::string q = path + ".points[" + std::to_string(i) + "]";
        const auto& pt = j["points"][i];
        allow_keys(pt, q, {"epsilon", "d"});
        if (!pt.contains("epsilon") || !pt.contains("d")) bad(q, "needs epsilon and d");
        a.points.emplace_back(positive(pt, "epsilon", q, 1.0), static_cast<int>(pos_int(pt, "d", q, 1)));
      }
    }
  }
  return a;
}

}  // namespace

const std::vector<std::string>& RunConfig::analysis_names() {
  static const std::vector<std::string> names{
      "alg_spt",     "alg_pt",         "alg_wt",        "alg_spt_exponent", "tensor_classify",
      "product_weight_report", "exp_spt", "exp_pt",     "exp_spt_exponent", "analytic_exp_spt_criterion",
      "sigma_bound", "growth_model",   "t_condition",   "validate_T"};
  return names;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(document)", std::string("invalid JSON: ") + e.what());
  }
  allow_keys(j, "(root)", {"problem", "grids", "complexity", "analysis", "spectrum", "verify", "output", "budgets"});
  RunConfig c;
  c.echo = j.dump();
  if (!j.contains("problem")) bad("problem", "missing");
  c.model = problem(j["problem"]);

  if (j.contains("grids")) {
    const auto& g = j["grids"];
    allow_keys(g, "grids", {"epsilon", "d"});
    if (g.contains("epsilon")) c.eps = eps_grid(g["epsilon"], "grids.epsilon");
    if (g.contains("d")) c.ds = d_grid(g["d"], "grids.d");
  }
  if (j.contains("complexity")) {
    const auto& x = j["complexity"];
    allow_keys(x, "complexity", {"criterion", "setting"});
    if (x.contains("criterion"))
      c.criteria = one_or_many<ErrorCriterion>(x["criterion"], "complexity.criterion", criterion);
    if (x.contains("setting")) c.settings = one_or_many<Setting>(x["setting"], "complexity.setting", setting);
  }
  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    if (!a.is_array()) bad("analysis", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) c.analyses.push_back(analysis(a[i], "analysis[" + std::to_string(i) + "]"));
  }
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    allow_keys(s, "spectrum", {"d", "k"});
    c.spectrum_d = static_cast<int>(pos_int(s, "d", "spectrum", 1));
    c.spectrum_k = static_cast<std::uint64_t>(pos_int(s, "k", "spectrum", 10));
  }
  if (j.contains("verify")) {
    const auto& v = j["verify"];
    allow_keys(v, "verify", {"top_k", "max_radius"});
    c.verify_top_k = v.contains("top_k") ? static_cast<std::uint64_t>(pos_int(v, "top_k", "verify", 1)) : 0;
    c.verify_max_radius = static_cast<int>(pos_int(v, "max_radius", "verify", 64));
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    allow_keys(o, "output", {"format", "path"});
    if (o.contains("format")) c.format = str(o["format"], "output.format");
    if (o.contains("path")) c.out_path = str(o["path"], "output.path");
  }
  if (c.format != "csv" && c.format != "json") bad("output.format", "expected csv or json");
  if (j.contains("budgets")) {
    const auto& b = j["budgets"];
    allow_keys(b, "budgets", {"enumeration_cap", "node_budget", "term_cap", "tolerance", "refine_steps"});
    if (b.contains("enumeration_cap")) apply_budget(c, static_cast<std::uint64_t>(pos_int(b, "enumeration_cap", "budgets", 1)));
    if (b.contains("node_budget")) c.copts.sums.node_budget = static_cast<std::uint64_t>(pos_int(b, "node_budget", "budgets", 1));
    if (b.contains("term_cap")) c.copts.sums.term_cap = static_cast<std::uint64_t>(pos_int(b, "term_cap", "budgets", 1));
    if (b.contains("refine_steps")) {
      const auto r = integer(b["refine_steps"], "budgets.refine_steps");
      if (r < 0 || r > 20) bad("budgets.refine_steps", "must be in [0, 20]");
      c.copts.refine_steps = static_cast<int>(r);
    }
    if (b.contains("tolerance")) apply_tolerance(c, positive(b, "tolerance", "budgets", 1e-10));
  }
  for (auto& a : c.analyses) a.params.sums = c.copts.sums;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_dmax(RunConfig& c, int d_max) {
  if (d_max < 1) throw ConfigError("--dmax", "must be a positive integer");
  for (auto& a : c.analyses) a.params.d_max = d_max;
}

void apply_tolerance(RunConfig& c, double tol) {
  if (!(tol > 0.0)) throw ConfigError("--tol", "must be positive");
  c.copts.sums.tolerance = tol;
  for (auto& a : c.analyses) a.params.sums.tolerance = tol;
}

void apply_budget(RunConfig& c, std::uint64_t budget) {
  if (budget < 1) throw ConfigError("--budget", "must be positive");
  c.copts.count_cap = budget;
  c.copts.sums.node_budget = budget;
  c.copts.sums.term_cap = budget;
  for (auto& a : c.analyses) {
    a.params.sums.node_budget = budget;
    a.params.sums.term_cap = budget;
  }
}

}  // namespace tractlab
