#include "tractlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tractlab/config.hpp"
#include "tractlab/oracle.hpp"

namespace tractlab {

using json = nlohmann::json;

namespace {

// ------------------------------------------------------------------ formatting

std::string num17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities; those go out as strings.
json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num17(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

json verdict_json(const CriterionVerdict& v) {
  json j;
  j["criterion"] = v.criterion;
  j["status"] = to_string(v.status);
  if (v.status == VerdictStatus::ViolatedAtD) {
    j["violated_d"] = v.violated_d;
    j["certified_lower_bound"] = jnum(v.certified_lower_bound);
  }
  j["sup_estimate"] = jnum(v.sup_estimate);
  j["growth_slope"] = v.growth_slope ? jnum(*v.growth_slope) : json(nullptr);
  j["basis"] = v.basis;
  j["caveat"] = v.caveat;
  j["diagnostics"] = v.diagnostics;
  json pd = json::array();
  for (const auto& p : v.per_d) pd.push_back({{"d", p.d}, {"value", jnum(p.value)}, {"tail_bound", jnum(p.tail_bound)}});
  j["per_d"] = pd;
  if (!v.traces.empty()) {
    json tr = json::array();
    for (const auto& t : v.traces) {
      json x{{"param", jnum(t.param)}, {"status", to_string(t.status)}, {"basis", t.basis}};
      x["growth_slope"] = t.growth_slope ? jnum(*t.growth_slope) : json(nullptr);
      if (t.status == VerdictStatus::ViolatedAtD) {
        x["violated_d"] = t.violated_d;
        x["certified_lower_bound"] = jnum(t.certified_lower_bound);
      }
      json tpd = json::array();
      for (const auto& p : t.per_d)
        tpd.push_back({{"d", p.d}, {"value", jnum(p.value)}, {"tail_bound", jnum(p.tail_bound)}});
      x["per_d"] = tpd;
      tr.push_back(x);
    }
    j["traces"] = tr;
  }
  return j;
}

// dotted-path flattening for the csv form of a report
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, num17(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_null()) {
    out.emplace_back(prefix, "");
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

// ------------------------------------------------------------------ parallel grid

// Runs f(i) for i < n on a small pool; exceptions are rethrown in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// ------------------------------------------------------------------ commands

struct Ctx {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

json header(const Ctx& c, const char* command) {
  return {{"tool", "tractlab"}, {"version", kVersion}, {"command", command}, {"config", json::parse(c.cfg.echo)}};
}

void need_grids(const RunConfig& c) {
  if (c.eps.empty()) throw ConfigError("grids.epsilon", "required for this command");
  if (c.ds.empty()) throw ConfigError("grids.d", "required for this command");
}

int cmd_complexity(Ctx& c) {
  need_grids(c.cfg);
  std::vector<double> eps = c.cfg.eps;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  std::vector<int> ds = c.cfg.ds;
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());

  struct Cell {
    int d;
    double eps;
    ErrorCriterion crit;
    Setting set;
    std::uint64_t n = 0;
    std::vector<std::string> warnings;
  };
  std::vector<Cell> cells;
  for (int d : ds)
    for (double e : eps)
      for (auto cr : c.cfg.criteria)
        for (auto st : c.cfg.settings) cells.push_back({d, e, cr, st, 0, {}});
  parallel_for(cells.size(), [&](std::size_t i) {
    auto& x = cells[i];
    x.n = n_query({c.cfg.model, x.d, x.eps, x.crit, x.set}, &x.warnings, c.cfg.copts);
  });
  for (const auto& x : cells)
    for (const auto& w : x.warnings) c.err << "warning: d=" << x.d << " epsilon=" << num17(x.eps) << ": " << w << "\n";

  if (c.cfg.format == "csv") {
    c.out << "d,epsilon,criterion,setting,n\n";
    for (const auto& x : cells)
      c.out << x.d << "," << num17(x.eps) << "," << to_string(x.crit) << "," << to_string(x.set) << "," << x.n << "\n";
  } else {
    json j = header(c, "complexity");
    json rows = json::array();
    for (const auto& x : cells)
      rows.push_back({{"d", x.d}, {"epsilon", x.eps}, {"criterion", to_string(x.crit)}, {"setting", to_string(x.set)},
                      {"n", x.n}});
    j["rows"] = rows;
    c.out << j.dump(2) << "\n";
  }
  return kExitOk;
}

json run_analysis(const RunConfig& cfg, const AnalysisRequest& a) {
  const auto& m = cfg.model;
  const auto& p = a.params;
  if (a.name == "alg_spt") return verdict_json(alg_spt_check(m, p));
  if (a.name == "alg_pt") return verdict_json(alg_pt_check(m, p));
  if (a.name == "alg_wt") return verdict_json(alg_wt_check(m, p));
  if (a.name == "exp_spt") return verdict_json(exp_spt_check(m, p));
  if (a.name == "exp_pt") return verdict_json(exp_pt_check(m, p));
  if (a.name == "alg_spt_exponent") return {{"exponent", jnum(alg_spt_exponent(m, p.L, p.d_max, a.tol, p.sums))}};
  if (a.name == "exp_spt_exponent") return {{"exponent", jnum(exp_spt_exponent(m, p.L, p.d_max, a.tol, p.sums))}};
  if (a.name == "tensor_classify") {
    if (m.kind != SpectrumModel::Kind::TensorProduct) throw InvalidParameter("tensor_classify needs a tensor problem");
    const auto r = tensor_classify(m.univariate);
    return {{"label", to_string(r.label)}, {"lambda1", jnum(r.lambda1)}, {"lambda2", jnum(r.lambda2)}, {"caveat", r.caveat}};
  }
  if (a.name == "product_weight_report") {
    if (!m.is_korobov()) throw InvalidParameter("product_weight_report needs a korobov or weighted_korobov problem");
    const auto r = product_weight_report(m.alpha, m.weights());
    json j{{"p_gamma", jnum(r.p_gamma)}, {"spt", r.spt}, {"pt", r.pt}, {"wt", r.wt}, {"notes", r.notes}};
    j["spt_exponent"] = r.spt_exponent ? jnum(*r.spt_exponent) : json(nullptr);
    return j;
  }
  if (a.name == "analytic_exp_spt_criterion" || a.name == "sigma_bound") {
    if (m.kind != SpectrumModel::Kind::AnalyticKorobov) throw InvalidParameter(a.name + " needs an analytic_korobov problem");
    if (a.name == "analytic_exp_spt_criterion") {
      try {
        const auto r = analytic_exp_spt_criterion(m.a, m.b);
        return {{"holds", r.holds}, {"B", jnum(r.B)}, {"alpha_star", jnum(r.alpha_star)}, {"diagnostics", r.diagnostics}};
      } catch (const Inconclusive& e) {
        return {{"holds", nullptr}, {"status", "Inconclusive"}, {"reason", e.what()}};
      }
    }
    const auto r = sigma_bound(m.a, m.b, a.p, a.d, a.delta, a.ell_check, a.ell_sum);
    json cnt = json::array();
    for (const auto& x : r.counting)
      cnt.push_back({{"ell", x.ell}, {"d", x.d}, {"count", x.count}, {"bound", jnum(x.bound)}, {"ok", x.ok}});
    return {{"partial", jnum(r.partial)}, {"partial_tail", jnum(r.partial_tail)}, {"upper", jnum(r.upper)},
            {"divergent_bound", r.divergent_bound}, {"j_star", r.j_star}, {"B", jnum(r.B)},
            {"exponent", jnum(r.exponent)}, {"counting", cnt}, {"diagnostics", r.diagnostics}};
  }
  if (a.name == "growth_model") {
    std::vector<GrowthModel> cmp;
    for (const auto& e : a.compare) cmp.push_back(GrowthModel::parse(e));
    const auto g = growth_model_diagnostics(GrowthModel::parse(a.expr), cmp, a.points);
    auto path = [](const std::vector<GrowthPathPoint>& v) {
      json arr = json::array();
      for (const auto& x : v) arr.push_back({{"inv_eps", jnum(x.inv_eps)}, {"d", jnum(x.d)}, {"ratio", jnum(x.ratio)}});
      return arr;
    };
    json j{{"expr", a.expr}, {"wt_diagnostic", g.wt_passes ? "passes" : "fails"},
           {"diagonal_limit", jnum(g.diagonal_limit)}, {"pt_fit", g.pt_fit}};
    j["q"] = g.q ? jnum(*g.q) : json(nullptr);
    j["p"] = g.p ? jnum(*g.p) : json(nullptr);
    j["d_axis"] = path(g.d_axis);
    j["eps_axis"] = path(g.eps_axis);
    j["diagonal"] = path(g.diagonal);
    json cr = json::array();
    for (const auto& x : g.crossover) {
      json vals = json::array();
      for (double v : x.log10_values) vals.push_back(jnum(v));
      cr.push_back({{"epsilon", jnum(x.eps)}, {"d", x.d}, {"log10_n", vals}});
    }
    j["crossover"] = cr;
    return j;
  }
  if (a.name == "t_condition" || a.name == "validate_T") {
    const TractabilityFunctionSpec spec{*a.family, {}, 0, to_string(*a.family)};
    if (a.name == "validate_T") {
      const auto r = validate_T(spec);
      json checks = json::array();
      for (const auto& x : r.checks) checks.push_back({{"name", x.name}, {"passed", x.passed}, {"witness", x.witness}});
      return {{"family", spec.name}, {"all_passed", r.all_passed()}, {"K", jnum(r.K)}, {"checks", checks}};
    }
    return verdict_json(t_condition_check(m, spec, a.tp, p.H, p.d_max, p.sums, p.trend_threshold));
  }
  throw InvalidParameter("unknown analysis " + a.name);
}

int cmd_classify(Ctx& c) {
  if (c.cfg.analyses.empty()) {
    std::string list;
    for (const auto& n : RunConfig::analysis_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("analysis", "classify needs a non-empty analysis list; supported: " + list);
  }
  const auto& an = c.cfg.analyses;
  std::vector<json> results(an.size());
  std::vector<double> secs(an.size());
  std::vector<int> codes(an.size(), kExitOk);
  parallel_for(an.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      results[i] = run_analysis(c.cfg, an[i]);
    } catch (const InvalidParameter& e) {
      throw ConfigError("analysis[" + std::to_string(i) + "]", e.what());
    } catch (const ResourceLimit& e) {
      results[i] = {{"status", "ResourceLimit"}, {"reason", e.what()}};
      codes[i] = kExitBudget;
    } catch (const Inconclusive& e) {
      results[i] = {{"status", "Inconclusive"}, {"reason", e.what()}};
    }
    secs[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  // timings vary run to run, so they stay out of the report
  for (std::size_t i = 0; i < an.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", secs[i]);
    c.err << "analysis[" << i << "] " << an[i].name << ": " << buf << " s\n";
  }
  if (c.cfg.format == "json") {
    json j = header(c, "classify");
    json arr = json::array();
    for (std::size_t i = 0; i < an.size(); ++i) arr.push_back({{"name", an[i].name}, {"result", results[i]}});
    j["analyses"] = arr;
    c.out << j.dump(2) << "\n";
  } else {
    c.out << "analysis,name,field,value\n";
    for (std::size_t i = 0; i < an.size(); ++i) {
      std::vector<std::pair<std::string, std::string>> kv;
      flatten(results[i], "", kv);
      for (const auto& [k, v] : kv) c.out << i << "," << an[i].name << "," << csv_field(k) << "," << csv_field(v) << "\n";
    }
  }
  return *std::max_element(codes.begin(), codes.end());
}

int cmd_spectrum(Ctx& c) {
  const int d = c.cfg.spectrum_d;
  const std::uint64_t k = c.cfg.spectrum_k;
  json rows = json::array();
  const bool csv = c.cfg.format == "csv";
  if (csv) c.out << "rank,log_lambda,lambda,witness\n";
  auto emit = [&](const LogEigenvalue& e) {
    std::string w;
    for (std::size_t i = 0; i < e.witness.size(); ++i) w += (i ? ";" : "") + std::to_string(e.witness[i]);
    if (csv)
      c.out << e.rank << "," << num17(e.log_value) << "," << num17(e.value()) << "," << w << "\n";
    else
      rows.push_back({{"rank", e.rank}, {"log_lambda", jnum(e.log_value)}, {"lambda", jnum(e.value())}, {"witness", e.witness}});
  };
  int code = kExitOk;
  std::uint64_t done = 0;
  try {
    EigenStream st(c.cfg.model, d, {c.cfg.copts.sums.node_budget});
    while (done < k) {
      auto e = st.next();
      if (!e) {
        c.err << "note: the spectrum has only " << done << " positive eigenvalues at d=" << d << "\n";
        break;
      }
      emit(*e);
      ++done;
    }
  } catch (const ResourceLimit& e) {
    c.err << "budget exceeded: " << e.what() << "; completed ranks 1.." << done << "\n";
    code = kExitBudget;
  }
  if (!csv) {
    json j = header(c, "spectrum");
    j["d"] = d;
    j["k"] = k;
    j["complete"] = code == kExitOk;
    j["rows"] = rows;
    c.out << j.dump(2) << "\n";
  }
  return code;
}

// ------------------------------------------------------------------ verify

struct Check {
  std::string check;
  int d = 0;
  double eps = 0.0;
  std::string criterion;
  std::string main, oracle, result, note;
};

// top eigenvalues by brute force, growing the box until k of them are certified
std::optional<oracle::BruteResult> certified_brute(const SpectrumModel& m, int d, std::uint64_t k, int max_radius) {
  for (int r = 2; r <= max_radius; r *= 2) {
    try {
      auto br = oracle::brute_eigenvalues(m, d, r);
      std::uint64_t ok = 0;
      while (ok < br.values.size() && br.values[ok].lambda > br.box.outside_bound) ++ok;
      const bool whole = br.box.outside_bound == 0.0;
      if (ok >= k || whole) return br;
    } catch (const ResourceLimit&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Check verify_worst(const RunConfig& cfg, int d, double eps, ErrorCriterion cr) {
  Check x{"n_worst", d, eps, to_string(cr), "", "", "", ""};
  const auto n = n_worst({cfg.model, d, eps, cr, Setting::WORST}, nullptr, cfg.copts);
  x.main = std::to_string(n);
  for (int r = 2; r <= cfg.verify_max_radius; r *= 2) {
    try {
      const auto b = oracle::brute_n(cfg.model, d, eps, cr, r);
      x.oracle = std::to_string(b);
      x.result = b == n ? "agree" : "mismatch";
      return x;
    } catch (const oracle::CertificateUnavailable&) {
    } catch (const ResourceLimit&) {
      break;
    }
  }
  x.result = "uncertified";
  x.note = "no brute-force box up to radius " + std::to_string(cfg.verify_max_radius) + " certifies the count";
  return x;
}

// average case: trace from the closed form, ordering from the brute box
Check verify_avg(const RunConfig& cfg, int d, double eps, ErrorCriterion cr) {
  Check x{"n_avg", d, eps, to_string(cr), "", "", "", ""};
  std::uint64_t n;
  try {
    n = n_avg(cfg.model, d, eps, cr, cfg.copts);
  } catch (const Inconclusive& e) {
    x.main = "[" + std::to_string(e.n_lo) + "," + std::to_string(e.n_hi) + "]";
    x.result = "straddle";
    x.note = std::string("tail-bound straddle: ") + e.what();
    return x;
  } catch (const ResourceLimit& e) {
    x.result = "budget";
    x.note = e.what();
    return x;
  }
  x.main = std::to_string(n);
  const TailSumResult tr = tail_power_sum(cfg.model, d, 1.0, 1, cfg.copts.sums);
  const double trace = tr.value;
  const double target = cr == ErrorCriterion::ABS ? eps * eps : eps * eps * trace;
  const auto br = certified_brute(cfg.model, d, n + 1, cfg.verify_max_radius);
  if (!br) {
    x.result = "uncertified";
    x.note = "no brute-force box certifies the leading eigenvalues";
    return x;
  }
  double prefix = 0.0;
  std::uint64_t k = 0;
  const auto& v = br->values;
  while (true) {
    const double tail = trace - prefix;
    if (std::fabs(tail - target) <= 1e-9 * trace + tr.tail_bound) {
      x.result = "uncertified";
      x.note = "tail within rounding of the threshold";
      return x;
    }
    if (tail <= target) break;
    if (k >= v.size() || (v[k].lambda <= br->box.outside_bound && br->box.outside_bound > 0.0)) {
      x.result = "uncertified";
      x.note = "brute box exhausted before the threshold";
      return x;
    }
    prefix += v[k++].lambda;
  }
  x.oracle = std::to_string(k);
  x.result = k == n ? "agree" : "mismatch";
  return x;
}

Check verify_top(const RunConfig& cfg, int d) {
  const std::uint64_t k = cfg.verify_top_k;
  Check x{"top_k", d, 0.0, "", "", "", "", ""};
  const auto st = eigenvalue_stream(cfg.model, d, k, {cfg.copts.sums.node_budget}).values;
  x.main = std::to_string(st.size());
  const auto br = certified_brute(cfg.model, d, k, cfg.verify_max_radius);
  if (!br) {
    x.result = "uncertified";
    x.note = "no brute-force box certifies the top " + std::to_string(k);
    return x;
  }
  const std::size_t m = std::min<std::size_t>(k, br->values.size());
  x.oracle = std::to_string(m);
  if (m != st.size()) {
    x.result = "mismatch";
    x.note = "different number of positive eigenvalues";
    return x;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double a = st[i].value(), b = br->values[i].lambda;
    if (std::fabs(a - b) > 1e-12 * std::max(a, b)) {
      x.result = "mismatch";
      x.note = "rank " + std::to_string(i + 1) + ": stream " + num17(a) + " vs brute " + num17(b);
      return x;
    }
  }
  x.result = "agree";
  return x;
}

int cmd_verify(Ctx& c) {
  const auto& cfg = c.cfg;
  std::vector<int> ds = cfg.ds.empty() ? std::vector<int>{1, 2, 3} : cfg.ds;
  std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.9, 0.5, 0.3} : cfg.eps;
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::sort(eps.begin(), eps.end(), std::greater<>());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

  std::vector<std::function<Check()>> jobs;
  for (int d : ds) {
    for (double e : eps)
      for (auto cr : cfg.criteria)
        for (auto st : cfg.settings) {
          if (st == Setting::WORST)
            jobs.emplace_back([&cfg, d, e, cr] { return verify_worst(cfg, d, e, cr); });
          else
            jobs.emplace_back([&cfg, d, e, cr] { return verify_avg(cfg, d, e, cr); });
        }
    if (cfg.verify_top_k > 0) jobs.emplace_back([&cfg, d] { return verify_top(cfg, d); });
  }
  std::vector<Check> res(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { res[i] = jobs[i](); });

  const Check* first_bad = nullptr;
  for (const auto& x : res)
    if (x.result != "agree" && !first_bad) first_bad = &x;

  if (cfg.format == "csv") {
    c.out << "check,d,epsilon,criterion,main,oracle,result,note\n";
    for (const auto& x : res)
      c.out << x.check << "," << x.d << "," << (x.check == "top_k" ? "" : num17(x.eps)) << "," << x.criterion << ","
            << csv_field(x.main) << "," << x.oracle << "," << x.result << "," << csv_field(x.note) << "\n";
  } else {
    json j = header(c, "verify");
    json arr = json::array();
    for (const auto& x : res) {
      json r{{"check", x.check}, {"d", x.d}, {"main", x.main}, {"oracle", x.oracle}, {"result", x.result}, {"note", x.note}};
      if (x.check != "top_k") {
        r["epsilon"] = x.eps;
        r["criterion"] = x.criterion;
      }
      arr.push_back(r);
    }
    j["checks"] = arr;
    j["all_agree"] = first_bad == nullptr;
    c.out << j.dump(2) << "\n";
  }
  if (first_bad) {
    c.err << "verification failed: " << first_bad->check << " d=" << first_bad->d;
    if (first_bad->check != "top_k") c.err << " epsilon=" << num17(first_bad->eps) << " " << first_bad->criterion;
    c.err << ": " << first_bad->result << " (main " << first_bad->main << ", oracle "
          << (first_bad->oracle.empty() ? "-" : first_bad->oracle) << ")";
    if (!first_bad->note.empty()) c.err << "; " << first_bad->note;
    c.err << "\n";
    return kExitMismatch;
  }
  c.err << "verification passed: " << res.size() << " checks agree\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tractlab: tractability analysis of linear problems from their eigenvalue spectra", "tractlab"};
  std::string command, config, out_path, format;
  int dmax = 0;
  double tol = 0.0;
  std::uint64_t budget = 0;
  app.add_option("command", command, "complexity | classify | spectrum | verify")
      ->required()
      ->check(CLI::IsMember({"complexity", "classify", "spectrum", "verify"}));
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--out", out_path, "output file (default: config output.path, else stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--dmax", dmax, "override d_max of every analysis")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "summation tolerance")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "enumeration budget")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", kVersion);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  try {
    RunConfig cfg = load_config(config);
    if (dmax) apply_dmax(cfg, dmax);
    if (tol > 0.0) apply_tolerance(cfg, tol);
    if (budget) apply_budget(cfg, budget);
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.out_path = out_path;

    std::ofstream file;
    std::ostringstream buf;
    Ctx ctx{std::move(cfg), buf, err};
    int code = kExitOk;
    try {
      if (command == "complexity")
        code = cmd_complexity(ctx);
      else if (command == "classify")
        code = cmd_classify(ctx);
      else if (command == "spectrum")
        code = cmd_spectrum(ctx);
      else
        code = cmd_verify(ctx);
    } catch (const ResourceLimit& e) {
      err << "budget exceeded: " << e.what() << "\n";
      code = kExitBudget;
    } catch (const Inconclusive& e) {
      err << "inconclusive: " << e.what() << " (n in [" << e.n_lo << ", " << e.n_hi << "])\n";
      code = kExitBudget;
    }
    // partial spectrum dumps are still written
    if (code == kExitOk || command == "spectrum" || command == "verify" || command == "classify") {
      if (ctx.cfg.out_path.empty()) {
        out << buf.str();
      } else {
        file.open(ctx.cfg.out_path, std::ios::binary);
        if (!file) throw ConfigError("output.path", "cannot write '" + ctx.cfg.out_path + "'");
        file << buf.str();
      }
    }
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Divergence& e) {
    err << "config error: " << e.what() << " (the requested quantity is infinite for this problem)\n";
    return kExitConfig;
  }
}

}  // namespace tractlab
