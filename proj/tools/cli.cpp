#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperorbit/config.hpp"
#include "hyperorbit/counting.hpp"
#include "hyperorbit/thermo.hpp"

namespace hyperorbit::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Overrides {
  std::string config;
  std::string out = "out";
  std::optional<int> depth, rcone, nmax;
  std::optional<double> eps, tol;
  bool quiet = false;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Loaded group, automaton and metrics shared by every command.
class Pipeline {
 public:
  Pipeline(RunConfig cfg, fs::path out) : cfg_(std::move(cfg)), out_(std::move(out)), pres_(build_group(cfg_.group)) {
    for (const auto& m : cfg_.metrics) metrics_.push_back(build_metric(pres_, m));
  }

  const RunConfig& config() const { return cfg_; }
  const Presentation& presentation() const { return pres_; }
  const MetricModel& metric(std::size_t i) const { return metrics_.at(i); }
  std::size_t metric_count() const { return metrics_.size(); }

  json header(const std::string& command) const {
    return {{"config_hash", cfg_.hash()}, {"modules", module_versions()}, {"command", command}};
  }

  void write_json(const std::string& command, const std::string& name, json body) const {
    json doc;
    doc["header"] = header(command);
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    write_atomic(out_ / name, doc.dump(2) + "\n");
  }

  // Rows are already-formatted cells; numbers should go through num().
  void write_csv(const std::string& command, const std::string& name, const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) const {
    std::ostringstream s;
    s << "# config_hash: " << cfg_.hash() << "\n# modules:";
    const json modules = module_versions();
    for (const auto& [k, v] : modules.items()) s << ' ' << k << '=' << v.get<std::string>();
    s << "\n# command: " << command << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) s << (i ? "," : "") << columns[i];
    s << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << row[i];
      s << "\n";
    }
    write_atomic(out_ / name, s.str());
  }

  std::string automaton_key() const {
    json key = {{"group", cfg_.group}, {"r_cone", cfg_.r_cone}, {"geodesic", cfg_.geodesic}, {"format", 1}};
    return fnv1a_hex(key.dump());
  }

  // Built once per key; the cache only ever holds saturated automata.
  const GeodesicAutomaton& automaton() {
    if (aut_) return *aut_;
    fs::path path = out_ / "cache" / ("automaton-" + automaton_key() + ".json");
    if (fs::exists(path)) {
      std::ifstream in(path);
      std::stringstream ss;
      ss << in.rdbuf();
      aut_ = automaton_from_json(ss.str(), pres_.alphabet());
      from_cache_ = true;
    } else {
      aut_ = cfg_.geodesic ? build_geodesic_acceptor(pres_, cfg_.r_cone) : build_shortlex_acceptor(pres_, cfg_.r_cone);
      write_atomic(path, to_json(*aut_, pres_.alphabet()));
    }
    comps_ = scc_decompose(*aut_);
    maximal_ = word_maximal_components(*aut_, comps_);
    return *aut_;
  }
  bool from_cache() const { return from_cache_; }
  const std::vector<Component>& components() {
    automaton();
    return comps_;
  }
  const MaximalSet& maximal() {
    automaton();
    return maximal_;
  }
  const Component& component(int id) { return components().at(static_cast<std::size_t>(id)); }

  struct Growth {
    double v = 0.0;
    std::vector<double> per_component;  // aligned with maximal().ids
  };
  const Growth& growth(std::size_t metric_index) {
    auto it = growth_.find(metric_index);
    if (it != growth_.end()) return it->second;
    Growth g;
    CylinderPotential pot(metric(metric_index), automaton(), cfg_.depth);
    for (int id : maximal().ids) {
      auto space = cylinder_space(*aut_, component(id), cfg_.depth);
      double v = growth_rate(space, tabulate(space, pot)).value;
      g.per_component.push_back(v);
      g.v = std::max(g.v, v);
    }
    return growth_.emplace(metric_index, g).first->second;
  }

  // Metric rescaled to growth rate one.
  MetricModel normalized(std::size_t metric_index) { return metric(metric_index).rescaled(growth(metric_index).v); }

  const fs::path& out() const { return out_; }

 private:
  RunConfig cfg_;
  fs::path out_;
  Presentation pres_;
  std::vector<MetricModel> metrics_;
  std::optional<GeodesicAutomaton> aut_;
  bool from_cache_ = false;
  std::vector<Component> comps_;
  MaximalSet maximal_;
  std::map<std::size_t, Growth> growth_;
};

json arithmeticity_json(const ArithmeticityReport& a) {
  return {{"verdict", to_string(a.verdict)},
          {"gap", a.gap},
          {"residual", a.residual},
          {"best_candidate", a.best_candidate},
          {"confidence", a.confidence},
          {"cycle_values", a.values.size()}};
}

// Each command returns its summary and writes its own artifacts.

json cmd_automaton(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  Ball ball(p.presentation(), cfg.validate_n);
  auto rep = validate_bijection(aut, ball, cfg.validate_n);
  json summary = {{"vertices", aut.vertex_count()},
                  {"edges", aut.edge_count()},
                  {"r_cone", cfg.r_cone},
                  {"shortlex", aut.shortlex_unique()},
                  {"validation",
                   {{"ok", rep.ok},
                    {"n_max", rep.n_max},
                    {"accepted", rep.accepted},
                    {"expected", rep.expected},
                    {"first_failure", rep.first_failure}}}};
  p.write_json("automaton", "automaton.json",
               {{"summary", summary}, {"automaton", json::parse(to_json(aut, p.presentation().alphabet()))}});
  if (!rep.ok) throw ValidationError("bijection check failed: " + rep.first_failure);
  return summary;
}

json cmd_analyze(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  Digraph g = to_digraph(aut);
  json comps = json::array();
  for (const auto& c : p.components()) {
    comps.push_back({{"id", c.id},
                     {"size", c.vertices.size()},
                     {"trivial", c.trivial},
                     {"period", c.period},
                     {"growth", c.trivial ? 0.0 : component_growth(g, c)}});
  }
  const auto& ms = p.maximal();
  json metrics = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < p.metric_count(); ++i) {
    CylinderPotential pot(p.metric(i), aut, cfg.depth);
    auto cc = cross_check_maximal(aut, p.components(), pot);
    all_ok = all_ok && cc.ok();
    json arith = json::array();
    for (int id : ms.ids) {
      auto a = arithmeticity(pot, p.component(id), cfg.l_max, cfg.tol);
      json entry = arithmeticity_json(a);
      entry["component"] = id;
      arith.push_back(entry);
    }
    metrics.push_back({{"metric", pot.tag()},
                       {"v", cc.v},
                       {"word_maximal", cc.word_maximal},
                       {"potential_maximal", cc.potential_maximal},
                       {"sets_equal", cc.sets_equal},
                       {"disjoint", cc.disjoint},
                       {"arithmeticity", arith}});
  }
  json summary = {{"components", comps.size()},
                  {"word_maximal", ms.ids},
                  {"word_growth", ms.max_value},
                  {"cross_check_ok", all_ok},
                  {"metrics", metrics}};
  p.write_json("analyze", "analyze.json", {{"summary", summary}, {"components", comps}});
  if (!all_ok) throw ValidationError("maximal-component cross-check failed");
  return summary;
}

json cmd_growth(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  std::vector<std::vector<std::string>> rows;
  json metrics = json::array();
  for (std::size_t i = 0; i < p.metric_count(); ++i) {
    const auto& g = p.growth(i);
    for (int k = 1; k <= cfg.depth; ++k) {
      CylinderPotential pot(p.metric(i), aut, k);
      for (int id : p.maximal().ids) {
        auto space = cylinder_space(aut, p.component(id), k);
        auto gr = growth_rate(space, tabulate(space, pot));
        rows.push_back({pot.tag(), std::to_string(id), std::to_string(k), num(gr.value), num(gr.residual)});
      }
    }
    metrics.push_back({{"metric", CylinderPotential(p.metric(i), aut, cfg.depth).tag()},
                       {"v", g.v},
                       {"per_component", g.per_component}});
  }
  json summary = {{"depth", cfg.depth}, {"word_growth", p.maximal().max_value}, {"metrics", metrics}};
  p.write_json("growth", "growth.json", {{"summary", summary}});
  p.write_csv("growth", "growth.csv", {"metric", "component", "depth", "v", "residual"}, rows);
  return summary;
}

json cmd_manhattan(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  const int id = p.maximal().ids.front();
  auto space = cylinder_space(aut, p.component(id), cfg.depth);
  CylinderPotential pot(p.metric(0), aut, cfg.depth);
  auto psi = tabulate(space, pot);
  double v = p.growth(0).v;
  std::vector<std::vector<std::string>> rows;
  std::vector<double> theta;
  const int n = 40;
  for (int i = 0; i <= n; ++i) {
    double t = 2.0 * v * i / n;
    theta.push_back(manhattan_word(space, psi, t));
    rows.push_back({"d/S", num(t), num(theta.back())});
  }
  bool convex = true;
  for (std::size_t i = 1; i + 1 < theta.size(); ++i)
    convex = convex && theta[i] <= 0.5 * (theta[i - 1] + theta[i + 1]) + 1e-9;
  json summary = {{"component", id},
                  {"v_S", p.maximal().max_value},
                  {"v_d", v},
                  {"theta_at_0", theta.front()},
                  {"theta_at_v", manhattan_word(space, psi, v)},
                  {"midpoint_convex", convex}};
  if (p.metric_count() == 2) {
    CylinderPotential pd(p.normalized(0), aut, cfg.depth), ps(p.normalized(1), aut, cfg.depth);
    auto a = tabulate(space, pd), b = tabulate(space, ps);
    for (int i = 0; i <= 20; ++i) {
      double t = 1.5 * i / 20;
      rows.push_back({"d*/d", num(t), num(manhattan_pair(space, a, b, t))});
    }
    auto ce = correlation_exponent(space, a, b);
    summary["pair"] = {{"xi", ce.xi},
                       {"alpha", ce.alpha},
                       {"theta_at_xi", ce.theta_at_xi},
                       {"convexity_margin", ce.convexity_margin},
                       {"affine", ce.degenerate}};
    if (ce.degenerate) std::cerr << "warning: Manhattan curve is affine; the metrics are dependent\n";
  }
  p.write_json("manhattan", "manhattan.json", {{"summary", summary}});
  p.write_csv("manhattan", "manhattan.csv", {"curve", "t", "theta"}, rows);
  return summary;
}

json cmd_scan(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  const int id = p.maximal().ids.front();
  const int k = cfg.scan_depth > 0 ? cfg.scan_depth : cfg.depth;
  auto space = cylinder_space(aut, p.component(id), k);

  std::vector<double> grid;
  for (int i = 0; i < cfg.scan_points; ++i)
    grid.push_back(cfg.scan_points == 1 ? cfg.scan_t_min
                                        : cfg.scan_t_min + (cfg.scan_t_max - cfg.scan_t_min) * i / (cfg.scan_points - 1));

  json metrics = json::array();
  std::vector<std::vector<std::string>> rows;
  bool all_failed = !grid.empty();
  for (std::size_t m = 0; m < p.metric_count(); ++m) {
    CylinderPotential pot(p.metric(m), aut, k);
    auto psi = tabulate(space, pot);
    // The potential at depth k has its own pressure zero.
    double v = growth_rate(space, psi).value;
    auto arith = arithmeticity(pot, p.component(id), cfg.l_max, cfg.tol);
    auto pts = spectral_scan(space, psi, v, grid);

    // Off-lattice points sit at least 0.2 away from (2 pi / a) Z.
    const bool lattice = arith.verdict == Arithmeticity::Lattice;
    const double period = lattice ? 2 * std::numbers::pi / arith.gap : 0.0;
    double max_off = 0.0, max_on_defect = 0.0;
    std::size_t failed = 0, on_lattice = 0;
    for (const auto& pt : pts) {
      rows.push_back({pot.tag(), num(pt.t), pt.failed ? "nan" : num(pt.rho)});
      if (pt.failed) {
        ++failed;
        continue;
      }
      double dist = lattice ? std::abs(pt.t - period * std::round(pt.t / period)) : 1e300;
      if (lattice && dist < 1e-9) {
        ++on_lattice;
        max_on_defect = std::max(max_on_defect, std::abs(pt.rho - 1.0));
      } else if (dist >= 0.2) {
        max_off = std::max(max_off, pt.rho);
      }
    }
    all_failed = all_failed && failed == pts.size();
    metrics.push_back({{"metric", pot.tag()},
                       {"v", v},
                       {"arithmeticity", arithmeticity_json(arith)},
                       {"failed_points", failed},
                       {"max_rho_off_lattice", max_off},
                       {"eta", 1.0 - max_off},
                       {"lattice_points", on_lattice},
                       {"max_lattice_defect", max_on_defect}});
  }
  json summary = {{"depth", k}, {"points", grid.size()}, {"metrics", metrics}};
  p.write_json("scan", "scan.json", {{"summary", summary}});
  p.write_csv("scan", "scan.csv", {"metric", "t", "rho"}, rows);
  if (all_failed) throw NumericError("spectral radius failed at every grid point");
  return summary;
}

json cmd_count(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  const int id = p.maximal().ids.front();
  json metrics = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t m = 0; m < p.metric_count(); ++m) {
    double delta = p.growth(m).v;
    auto rep = count_ball(p.metric(m), cfg.n_max);
    auto series = count_series(rep, static_cast<std::size_t>(cfg.count_points));
    auto fit = fit_asymptotic(series, delta);
    CylinderPotential pot(p.metric(m), aut, cfg.depth);
    auto arith = arithmeticity(pot, p.component(id), cfg.l_max, cfg.tol);
    json entry = {{"metric", rep.metric_tag},
                  {"elements", rep.distances.size()},
                  {"covered", rep.covered},
                  {"delta", delta},
                  {"C", fit.C},
                  {"C_lsq", fit.C_lsq},
                  {"variation", fit.variation},
                  {"window_points", fit.window_points},
                  {"estimator_mismatch", fit.estimator_mismatch},
                  {"oscillation", fit.oscillation},
                  {"arithmeticity", to_string(arith.verdict)}};
    if (arith.verdict == Arithmeticity::NonArithmetic) {
      auto err = error_term_fit(series, fit.C, delta, arith.verdict);
      entry["error_term"] = {
          {"kappa", err.kappa}, {"kappa_error", err.kappa_error}, {"points", err.points}, {"unresolved", err.unresolved}};
    } else {
      entry["error_term"] = nullptr;
    }
    if (fit.oscillation)
      std::cerr << "warning: " << rep.metric_tag << ": N(T) e^{-delta T} oscillates; no asymptotic constant\n";
    for (std::size_t i = 0; i < series.T.size(); ++i)
      rows.push_back({rep.metric_tag, num(series.T[i]), num(series.N[i]), num(fit.residuals.at(i))});
    metrics.push_back(entry);
  }
  json summary = {{"n_max", cfg.n_max}, {"metrics", metrics}};
  p.write_json("count", "count.json", {{"summary", summary}});
  p.write_csv("count", "count.csv", {"metric", "T", "N", "residual"}, rows);
  return summary;
}

json cmd_correlate(Pipeline& p) {
  const auto& cfg = p.config();
  if (p.metric_count() != 2) throw InputError("correlate needs two metrics in the config");
  const auto& aut = p.automaton();
  MetricModel d = p.normalized(0), ds = p.normalized(1);
  auto cr = correlate(d, ds, cfg.eps, cfg.n_max);
  auto space = cylinder_space(aut, p.component(p.maximal().ids.front()), cfg.depth);
  CylinderPotential pd(d, aut, cfg.depth), ps(ds, aut, cfg.depth);
  auto ce = correlation_exponent(space, tabulate(space, pd), tabulate(space, ps));
  json summary = {{"status", cr.status},
                  {"eps", cr.eps},
                  {"n_max", cr.n_max},
                  {"covered", cr.covered},
                  {"fit_points", cr.T.size()},
                  {"alpha", ce.alpha},
                  {"xi", ce.xi},
                  {"affine", ce.degenerate},
                  {"alpha_plain", cr.alpha_plain},
                  {"alpha_sqrt", cr.alpha_sqrt},
                  {"residual_plain", cr.residual_plain},
                  {"residual_sqrt", cr.residual_sqrt}};
  if (cr.status != "ok") std::cerr << "warning: correlation range is " << cr.status << "\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < cr.T.size(); ++i) rows.push_back({num(cr.T[i]), num(cr.M[i]), num(cr.N[i])});
  p.write_json("correlate", "correlate.json", {{"summary", summary}});
  p.write_csv("correlate", "correlate.csv", {"T", "M", "N"}, rows);
  return summary;
}

json cmd_mixing(Pipeline& p) {
  const auto& cfg = p.config();
  const auto& aut = p.automaton();
  json metrics = json::array();
  for (std::size_t i = 0; i < p.metric_count(); ++i) {
    CylinderPotential pot(p.metric(i), aut, cfg.depth);
    json comps = json::array();
    for (int id : p.maximal().ids) {
      const auto& comp = p.component(id);
      auto mx = mixing_check(pot, comp, comp.period, cfg.l_max);
      comps.push_back({{"component", id},
                       {"roof_steps", mx.roof_steps},
                       {"verdict", to_string(mx.verdict)},
                       {"roof", arithmeticity_json(mx.roof)}});
    }
    metrics.push_back({{"metric", pot.tag()}, {"components", comps}});
  }
  json summary = {{"metrics", metrics}};
  p.write_json("mixing", "mixing.json", {{"summary", summary}});
  return summary;
}

int exit_code_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const UnsaturatedError& x) {
    std::cerr << "unsaturated: " << x.what() << "\n";
    return static_cast<int>(ExitCode::Unsaturated);
  } catch (const ValidationError& x) {
    std::cerr << "validation failure: " << x.what() << "\n";
    return static_cast<int>(ExitCode::ValidationFailure);
  } catch (const ResourceError& x) {
    std::cerr << "resource cap: " << x.what() << "\n";
    return static_cast<int>(ExitCode::ResourceCap);
  } catch (const NumericError& x) {
    std::cerr << "numeric failure: " << x.what() << "\n";
    return static_cast<int>(ExitCode::NumericFailure);
  } catch (const InputError& x) {
    std::cerr << "input error: " << x.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  } catch (const std::bad_alloc&) {
    std::cerr << "resource cap: out of memory\n";
    return static_cast<int>(ExitCode::ResourceCap);
  } catch (const std::exception& x) {
    std::cerr << "error: " << x.what() << "\n";
    return static_cast<int>(ExitCode::Usage);
  }
}

using Command = json (*)(Pipeline&);

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> table = {
      {"automaton", cmd_automaton}, {"analyze", cmd_analyze},     {"growth", cmd_growth},
      {"manhattan", cmd_manhattan}, {"scan", cmd_scan},           {"count", cmd_count},
      {"correlate", cmd_correlate}, {"mixing", cmd_mixing}};
  return table;
}

// Runs every stage, records each outcome, and returns the first nonzero code.
int cmd_report(Pipeline& p, bool quiet) {
  json stages;
  int first = 0;
  for (const auto& [name, fn] : commands()) {
    if (name == "correlate" && p.metric_count() != 2) {
      stages[name] = {{"skipped", "needs two metrics"}};
      continue;
    }
    try {
      stages[name] = {{"exit", 0}, {"summary", fn(p)}};
    } catch (...) {
      int code = exit_code_of(std::current_exception());
      stages[name] = {{"exit", code}};
      if (first == 0) first = code;
      if (code == static_cast<int>(ExitCode::Unsaturated)) break;
    }
  }
  p.write_json("report", "report.json", {{"stages", stages}});
  if (!quiet) std::cout << stages.dump(2) << "\n";
  return first;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"hyperorbit: automatic structures, transfer operators and orbit counting"};
  app.require_subcommand(1);
  Overrides ov;
  std::vector<std::string> names;
  for (const auto& [name, fn] : commands()) names.push_back(name);
  names.push_back("report");
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", ov.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", ov.out, "output directory")->capture_default_str();
    sub->add_option("--depth", ov.depth, "potential depth k");
    sub->add_option("--rcone", ov.rcone, "cone radius R_cone");
    sub->add_option("--nmax", ov.nmax, "counting radius n_max");
    sub->add_option("--eps", ov.eps, "correlation window");
    sub->add_option("--tol", ov.tol, "lattice-test tolerance");
    sub->add_flag("--quiet", ov.quiet, "do not print the summary");
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_config(ov.config);
    if (ov.depth) cfg.depth = *ov.depth;
    if (ov.rcone) cfg.r_cone = *ov.rcone;
    if (ov.nmax) cfg.n_max = *ov.nmax;
    if (ov.eps) cfg.eps = *ov.eps;
    if (ov.tol) cfg.tol = *ov.tol;
    cfg.validate();
    Pipeline p(std::move(cfg), ov.out);
    if (command == "report") return cmd_report(p, ov.quiet);
    for (const auto& [name, fn] : commands()) {
      if (name == command) {
        json summary = fn(p);
        if (!ov.quiet) std::cout << summary.dump(2) << "\n";
        return 0;
      }
    }
    return static_cast<int>(ExitCode::Usage);
  } catch (...) {
    return exit_code_of(std::current_exception());
  }
}

}  // namespace hyperorbit::cli
