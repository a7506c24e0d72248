// Acceptance run: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hyperorbit/counting.hpp"
#include "hyperorbit/thermo.hpp"

using namespace hyperorbit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Component& maximal_component(const GeodesicAutomaton& aut, const std::vector<Component>& comps) {
  auto ms = word_maximal_components(aut, comps);
  return comps[static_cast<std::size_t>(ms.ids.front())];
}

// Free-group conjugacy oracle: cyclic free reduction, then a rotation test.
Word cyclic_reduce(Word w) {
  w = free_reduce(w);
  while (w.size() >= 2 && w.front() == inverse_symbol(w.back())) w = Word(w.begin() + 1, w.end() - 1);
  return w;
}

bool free_conjugate(const Word& u, const Word& v) {
  Word a = cyclic_reduce(u), b = cyclic_reduce(v);
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  Word aa = concat(a, a);
  return std::search(aa.begin(), aa.end(), b.begin(), b.end()) != aa.end();
}

Word power_word(const Word& w, int n) {
  Word out;
  for (int i = 0; i < n; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

struct Fixtures {
  Presentation f2 = Presentation::free_group(2);
  GeodesicAutomaton f2_aut = build_shortlex_acceptor(f2, 1);
  std::vector<Component> f2_comps = scc_decompose(f2_aut);
  Presentation sch = fixtures::schottky_3_5();
  GeodesicAutomaton sch_aut = build_shortlex_acceptor(sch, 1);
  std::vector<Component> sch_comps = scc_decompose(sch_aut);
  MetricModel fuchsian = MetricModel::fuchsian(sch);
  Presentation s2 = Presentation::surface(2);
  GeodesicAutomaton s2_aut = build_shortlex_acceptor(s2, 4);
  std::vector<Component> s2_comps = scc_decompose(s2_aut);
  double delta = 0.0;  // Fuchsian growth rate at depth 7

  Fixtures() {
    CylinderPotential pot(fuchsian, sch_aut, 7);
    auto space = cylinder_space(sch_aut, sch_comps[1], 7);
    delta = growth_rate(space, tabulate(space, pot)).value;
  }
};

// --- criteria ----------------------------------------------------------------

Outcome c01(const Fixtures& fx) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Ball b(fx.f2, 10);
  auto r = validate_bijection(fx.f2_aut, b, 10);
  double t_free = seconds_since(t0);
  o.require(b.size() == 118097, "Free(2) ball size");
  o.require(r.ok, "Free(2) bijection n<=10");
  o.require(t_free < 30, "Free(2) runtime");
  t0 = std::chrono::steady_clock::now();
  auto aut = build_shortlex_acceptor(fx.s2, 4);
  Ball b2(fx.s2, 6);
  auto r2 = validate_bijection(aut, b2, 6);
  double t_s2 = seconds_since(t0);
  o.require(r2.ok, "genus-2 bijection n<=6");
  o.require(t_s2 < 30, "genus-2 runtime");
  o.note("Free(2) " + fmt("%.1fs", t_free) + ", genus 2 " + fmt("%.1fs", t_s2));
  return o;
}

Outcome c02(const Fixtures& fx) {
  Outcome o;
  const Component& comp = fx.f2_comps[1];
  auto rate = [&](const MetricModel& m) {
    CylinderPotential pot(m, fx.f2_aut, 2);
    auto space = cylinder_space(fx.f2_aut, comp, 2);
    return growth_rate(space, tabulate(space, pot)).value;
  };
  double vw = rate(MetricModel::word(fx.f2));
  double vg = rate(MetricModel::green_closed_form(fx.f2));
  o.require(std::abs(vw - std::log(3.0)) < 1e-9, "Word v = log 3");
  o.require(std::abs(vg - 1.0) < 1e-6, "Green v = 1");
  for (double c : {0.5, 2.0, 3.7}) {
    double vs = rate(MetricModel::scaled_word(fx.f2, c));
    o.require(std::abs(vs - std::log(3.0) / c) < 1e-9, "ScaledWord(" + fmt("%.1f", c) + ")");
  }
  o.note("word " + fmt("%.12f", vw) + ", green " + fmt("%.12f", vg));
  return o;
}

Outcome c03(const Fixtures& fx) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const WalkSpec walk = WalkSpec::uniform(fx.f2);
  Ball ball(fx.f2, 5);
  double worst = 0.0;
  for (std::size_t x = 0; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    double value = green_function(fx.f2, walk, g, 30);
    worst = std::max(worst, std::abs(value - 1.5 * std::pow(3.0, -static_cast<double>(g.length()))));
  }
  o.require(worst < 1e-5, "closed form within 1e-5");
  o.require(seconds_since(t0) < 60, "runtime");
  o.note("max error " + fmt("%.2e", worst));
  return o;
}

Outcome c04(const Fixtures& fx) {
  Outcome o;
  auto run = [&](const std::string& name, const GeodesicAutomaton& aut, const MetricModel& m) {
    auto aug = aut.augmented_copy();
    auto comps = scc_decompose(aug);
    CylinderPotential pot(m, aug, 2);
    auto r = cross_check_maximal(aug, comps, pot);
    o.require(r.sets_equal, name + " maximal sets");
    o.require(r.disjoint, name + " reachability");
    o.note(name + " " + std::to_string(r.word_maximal.size()) + " maximal");
  };
  run("Free(2)/word", fx.f2_aut, MetricModel::word(fx.f2));
  run("Free(2)/green", fx.f2_aut, MetricModel::green_closed_form(fx.f2));
  run("Schottky/fuchsian", fx.sch_aut, fx.fuchsian);
  run("genus2/word", fx.s2_aut, MetricModel::word(fx.s2));
  return o;
}

struct Witnesses {
  std::vector<ConjClass> classes;
  std::vector<LoopWitness> loops;
};

Witnesses find_witnesses(const Fixtures& fx, Outcome& o) {
  Witnesses w;
  w.classes = enumerate_classes(fx.f2, 8, 0);
  for (const auto& c : w.classes) {
    if (c.representative.is_identity()) continue;
    auto lw = loops_realizing_class(fx.f2_aut, fx.f2, fx.f2_comps[1], c, 4, 32);
    if (!lw) {
      o.require(false, "class " + fx.f2.alphabet().format(c.representative.word) + " unrealised");
      continue;
    }
    Word target = power_word(lw->sign > 0 ? c.representative.word : inverse_word(c.representative.word), lw->power);
    o.require(free_conjugate(cycle_word(fx.f2_aut, lw->cycle), target),
              "witness for " + fx.f2.alphabet().format(c.representative.word));
    w.loops.push_back(*lw);
  }
  return w;
}

Outcome c05(const Fixtures& fx, Witnesses& w) {
  Outcome o;
  w = find_witnesses(fx, o);
  int max_n = 0;
  std::size_t max_l = 0;
  for (const auto& l : w.loops) {
    max_n = std::max(max_n, l.power);
    max_l = std::max(max_l, l.cycle.size());
  }
  o.note(std::to_string(w.loops.size()) + " classes, max N " + std::to_string(max_n) + ", max l " +
         std::to_string(max_l));
  return o;
}

Outcome c06(const Fixtures& fx, const Witnesses& w) {
  Outcome o;
  o.require(fx.f2_aut == fx.sch_aut, "Schottky coding equals the Free(2) coding");
  CylinderPotential word(MetricModel::word(fx.f2), fx.f2_aut, 1);
  CylinderPotential green(MetricModel::green_closed_form(fx.f2), fx.f2_aut, 1);
  CylinderPotential fu(fx.fuchsian, fx.sch_aut, 12);
  double e_word = 0.0, e_green = 0.0, e_fu = 0.0;
  for (const auto& l : w.loops) {
    ConjClass cls{Element{cyclic_reduce(cycle_word(fx.f2_aut, l.cycle))}, false, ClassStatus::Exact};
    e_word = std::max(e_word, std::abs(word.birkhoff_cycle(l.cycle) -
                                       translation_length(word.metric(), cls).value));
    e_green = std::max(e_green, std::abs(green.birkhoff_cycle(l.cycle) -
                                         translation_length(green.metric(), cls).value));
    ConjClass scls = cls;
    e_fu = std::max(e_fu, std::abs(fu.birkhoff_cycle(l.cycle) - translation_length(fx.fuchsian, scls).value));
  }
  o.require(e_word <= 1e-12, "Word exact");
  o.require(e_green <= 1e-12, "Green exact");
  o.require(e_fu <= 1e-3, "Fuchsian depth 12");
  o.note("max |S - l|: word " + fmt("%.1e", e_word) + ", green " + fmt("%.1e", e_green) + ", fuchsian " +
         fmt("%.2e", e_fu));
  return o;
}

Outcome c07(const Fixtures& fx) {
  Outcome o;
  const double tol_fit = 1e-6;
  CylinderPotential word(MetricModel::word(fx.f2), fx.f2_aut, 1);
  auto a = arithmeticity(word, fx.f2_comps[1], 8);
  o.require(a.verdict == Arithmeticity::Lattice && std::abs(a.gap - 1.0) < 1e-8, "Word lattice 1");
  CylinderPotential green(MetricModel::green_closed_form(fx.f2), fx.f2_aut, 1);
  auto g = arithmeticity(green, fx.f2_comps[1], 8);
  o.require(g.verdict == Arithmeticity::Lattice && std::abs(g.gap - std::log(3.0)) < 1e-8, "Green lattice log 3");
  CylinderPotential s2w(MetricModel::word(fx.s2), fx.s2_aut, 1);
  auto s = arithmeticity(s2w, maximal_component(fx.s2_aut, fx.s2_comps), 6);
  o.require(s.verdict == Arithmeticity::Lattice && std::abs(s.gap - 1.0) < 1e-8, "genus-2 Word lattice 1");
  CylinderPotential fu(fx.fuchsian, fx.sch_aut, 8);
  auto f = arithmeticity(fu, fx.sch_comps[1], 6, 1e-8, tol_fit);
  o.require(f.verdict == Arithmeticity::NonArithmetic, "Fuchsian non-arithmetic");
  // Read as: the best lattice hypothesis misses by at least 1e3 times the
  // rejection threshold.
  o.require(f.residual * 1e-3 > tol_fit, "Fuchsian residual margin");
  o.note("fuchsian residual " + fmt("%.3e", f.residual) + " vs threshold " + fmt("%.0e", tol_fit) + " over " +
         std::to_string(f.values.size()) + " orbits");
  return o;
}

Outcome c08(const Fixtures& fx) {
  Outcome o;
  const double L = std::log(3.0);
  const double lattice = 2 * M_PI / L;
  auto space = cylinder_space(fx.f2_aut, fx.f2_comps[1], 2);
  CylinderPotential green(MetricModel::green_closed_form(fx.f2), fx.f2_aut, 2);
  auto psi_g = tabulate(space, green);
  std::vector<double> grid;
  for (int i = 0; i <= 600; ++i) grid.push_back(0.05 * i);
  for (int m = 0; m * lattice <= 30; ++m) grid.push_back(m * lattice);
  std::sort(grid.begin(), grid.end());
  double worst_on = 0.0, best_off = 0.0;
  bool off_ok = true;
  for (const auto& p : spectral_scan(space, psi_g, 1.0, grid)) {
    double dist = std::abs(p.t - lattice * std::round(p.t / lattice));
    if (dist < 1e-12) worst_on = std::max(worst_on, std::abs(p.rho - 1.0));
    else if (dist >= 0.2) {
      best_off = std::max(best_off, p.rho);
      off_ok = off_ok && p.rho <= 1 - 1e-3;
    }
  }
  o.require(worst_on < 1e-6, "Green rho = 1 on the lattice");
  o.require(off_ok, "Green rho <= 1 - 1e-3 off the lattice");

  const int k = 4;
  CylinderPotential fu(fx.fuchsian, fx.sch_aut, k);
  auto fs = cylinder_space(fx.sch_aut, fx.sch_comps[1], k);
  auto psi = tabulate(fs, fu);
  double v = growth_rate(fs, psi).value;
  std::vector<double> tg;
  for (int i = 1; i <= 300; ++i) tg.push_back(0.1 * i);
  double rho_max = 0.0;
  bool failed = false;
  for (const auto& p : spectral_scan(fs, psi, v, tg)) {
    rho_max = std::max(rho_max, p.rho);
    failed = failed || p.failed;
  }
  double eta = 1.0 - rho_max;
  o.require(!failed && eta > 0.0, "Fuchsian eta > 0");
  o.note("green: |rho-1| on lattice " + fmt("%.1e", worst_on) + ", max rho off lattice " + fmt("%.12f", best_off) +
         "; fuchsian eta " + fmt("%.3e", eta));
  return o;
}

Outcome c09(const Fixtures& fx) {
  Outcome o;
  auto check = [&](const std::string& name, const GeodesicAutomaton& aut, const Component& comp,
                   const MetricModel& m, int k) {
    CylinderPotential pot(m, aut, k);
    auto space = cylinder_space(aut, comp, k);
    auto psi = tabulate(space, pot);
    double v = growth_rate(space, psi).value;
    auto g = gibbs_data(space, psi, v, 6, 10'000'000);
    bool constant = pot.is_constant_on(comp, 1e-12);
    o.require(std::isfinite(g.spread()), name + " finite");
    if (constant) o.require(std::abs(g.spread() - 1.0) <= 1e-8, name + " constant potential ratio 1");
    o.require(g.spread() <= 10.0, name + " max/min <= 10");
    o.note(name + " max/min " + fmt("%.6g", g.spread()) + " (depth " + std::to_string(g.depth_tested) + ")");
  };
  check("Free(2)/word", fx.f2_aut, fx.f2_comps[1], MetricModel::word(fx.f2), 2);
  check("Free(2)/green", fx.f2_aut, fx.f2_comps[1], MetricModel::green_closed_form(fx.f2), 2);
  check("Schottky/fuchsian", fx.sch_aut, fx.sch_comps[1], fx.fuchsian, 6);
  check("genus2/word", fx.s2_aut, maximal_component(fx.s2_aut, fx.s2_comps), MetricModel::word(fx.s2), 1);
  return o;
}

Outcome c10(const Fixtures& fx) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto rep = count_ball(fx.fuchsian, 14);
  auto fit = fit_asymptotic(count_series(rep, 400), fx.delta);
  o.require(rep.covered >= 12, "covered range >= 12");
  o.require(fit.variation < 0.05 && !fit.oscillation, "Fuchsian variation < 5%");
  auto word = count_ball(MetricModel::word(fx.f2), 12);
  auto wf = fit_asymptotic(count_series(word, 400), std::log(3.0));
  o.require(wf.oscillation, "Word oscillation flag");
  auto green = count_ball(MetricModel::green_closed_form(fx.f2), 12);
  auto gf = fit_asymptotic(count_series(green, 400), 1.0);
  o.require(gf.oscillation, "Green oscillation flag");
  o.require(seconds_since(t0) < 600, "runtime");
  o.note("T_cov " + fmt("%.2f", rep.covered) + ", C " + fmt("%.5f", fit.C) + ", variation " +
         fmt("%.4f", fit.variation) + "; word variation " + fmt("%.3f", wf.variation));
  return o;
}

Outcome c11(const Fixtures& fx) {
  Outcome o;
  auto run = [&](const std::string& name, const GeodesicAutomaton& aut, const MetricModel& m, double v, int n,
                 const Ball* ball) {
    auto aug = aut.augmented_copy();
    auto comps = scc_decompose(aug);
    const auto& comp = maximal_component(aug, comps);
    auto cmp = poincare_compare(m, aug, v + 0.1, n, comp.vertices, ball);
    o.require(cmp.max_relative_discrepancy <= 1e-12, name + " direct = operator");
    // At s = v the sphere sums stay bounded away from 0 and infinity.
    auto at_v = poincare_compare(m, aug, v, n, comp.vertices, ball);
    double lo = 1e300, hi = 0.0;
    for (int i = n / 2; i <= n; ++i) {
      double s = at_v.direct[static_cast<std::size_t>(i - 1)].real();
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    o.require(lo > 0 && hi / lo < 2.0, name + " linear partial sums");
    o.note(name + " discrepancy " + fmt("%.1e", cmp.max_relative_discrepancy) + ", sphere sums in [" +
           fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]");
  };
  run("Free(2)/word", fx.f2_aut, MetricModel::word(fx.f2), std::log(3.0), 12, nullptr);
  run("Free(2)/green", fx.f2_aut, MetricModel::green_closed_form(fx.f2), 1.0, 12, nullptr);
  run("Schottky/fuchsian", fx.sch_aut, fx.fuchsian, fx.delta, 12, nullptr);
  Ball ball(fx.s2, 6);
  run("genus2/word (n<=6)", fx.s2_aut, MetricModel::word(fx.s2), std::log(6.979835779), 6, &ball);
  return o;
}

Outcome c12(const Fixtures& fx) {
  Outcome o;
  auto run = [&](const std::string& name, const GeodesicAutomaton& aut, const std::vector<Component>& comps,
                 const MetricModel& m, int k) {
    auto ms = word_maximal_components(aut, comps);
    std::vector<double> at_half;
    for (int id : ms.ids) {
      const auto& comp = comps[static_cast<std::size_t>(id)];
      CylinderPotential pot(m, aut, k);
      auto space = cylinder_space(aut, comp, k);
      auto psi = tabulate(space, pot);
      double v = growth_rate(space, psi).value;
      o.require(std::abs(manhattan_word(space, psi, 0.0) - ms.max_value) < 1e-8, name + " theta(0) = v_S");
      o.require(std::abs(manhattan_word(space, psi, v)) < 1e-8, name + " theta(v_d) = 0");
      std::vector<double> th;
      for (int i = 0; i <= 40; ++i) th.push_back(manhattan_word(space, psi, 2 * v * i / 40.0));
      bool convex = true;
      for (std::size_t i = 1; i + 1 < th.size(); ++i) convex = convex && th[i] <= 0.5 * (th[i - 1] + th[i + 1]) + 1e-9;
      o.require(convex, name + " midpoint convexity");
      at_half.push_back(manhattan_word(space, psi, 0.5 * v));
    }
    for (double x : at_half) o.require(std::abs(x - at_half.front()) <= 2e-6, name + " agreement across components");
    o.note(name + " " + std::to_string(ms.ids.size()) + " maximal component(s)");
  };
  run("Free(2)/word", fx.f2_aut, fx.f2_comps, MetricModel::word(fx.f2), 1);
  run("Free(2)/green", fx.f2_aut, fx.f2_comps, MetricModel::green_closed_form(fx.f2), 1);
  run("Schottky/fuchsian", fx.sch_aut, fx.sch_comps, fx.fuchsian, 6);
  run("genus2/word", fx.s2_aut, fx.s2_comps, MetricModel::word(fx.s2), 1);
  return o;
}

Outcome c13(const Fixtures& fx) {
  Outcome o;
  const int k = 6;
  auto space = cylinder_space(fx.sch_aut, fx.sch_comps[1], k);
  CylinderPotential raw(fx.fuchsian, fx.sch_aut, k);
  double v = growth_rate(space, tabulate(space, raw)).value;
  MetricModel dn = MetricModel::word(fx.sch).rescaled(std::log(3.0));
  MetricModel dsn = fx.fuchsian.rescaled(v);
  CylinderPotential pw(dn, fx.sch_aut, k), pf(dsn, fx.sch_aut, k);
  auto ce = correlation_exponent(space, tabulate(space, pw), tabulate(space, pf));
  o.require(!ce.degenerate, "non-degenerate");
  o.require(ce.alpha > 0.01 && ce.alpha < 0.99, "alpha inside (0,1) with margin 0.01");
  auto cr = correlate(dn, dsn, 0.5, 14);
  o.require(cr.status == "ok", "correlation range");
  o.require(std::abs(cr.alpha_sqrt - ce.alpha) <= 0.05, "fitted exponent within 0.05");
  o.require(cr.residual_sqrt < cr.residual_plain, "sqrt(T) model has smaller residual");
  o.note("alpha " + fmt("%.6f", ce.alpha) + " (xi " + fmt("%.4f", ce.xi) + "), fit " + fmt("%.4f", cr.alpha_sqrt) +
         ", residuals " + fmt("%.4f", cr.residual_sqrt) + " < " + fmt("%.4f", cr.residual_plain));
  return o;
}

Outcome c14(const Fixtures& fx) {
  Outcome o;
  auto run = [&](const std::string& name, const GeodesicAutomaton& aut, const Component& comp, const MetricModel& m,
                 int k, int l_max, MixingVerdict expect) {
    CylinderPotential pot(m, aut, k);
    auto a = arithmeticity(pot, comp, l_max);
    auto mx = mixing_check(pot, comp, comp.period, l_max);
    MixingVerdict from_arith = a.verdict == Arithmeticity::Lattice ? MixingVerdict::NotWeakMixing
                                                                   : MixingVerdict::WeakMixing;
    o.require(mx.verdict == from_arith, name + " matches arithmeticity");
    o.require(mx.verdict == expect, name + " verdict");
    o.note(name + " " + to_string(mx.verdict));
  };
  run("Free(2)/word", fx.f2_aut, fx.f2_comps[1], MetricModel::word(fx.f2), 1, 8, MixingVerdict::NotWeakMixing);
  run("Free(2)/green", fx.f2_aut, fx.f2_comps[1], MetricModel::green_closed_form(fx.f2), 1, 8,
      MixingVerdict::NotWeakMixing);
  run("genus2/word", fx.s2_aut, maximal_component(fx.s2_aut, fx.s2_comps), MetricModel::word(fx.s2), 1, 6,
      MixingVerdict::NotWeakMixing);
  run("Schottky/fuchsian", fx.sch_aut, fx.sch_comps[1], fx.fuchsian, 8, 6, MixingVerdict::WeakMixing);
  return o;
}

Outcome c15(const Fixtures&) {
  Outcome o;
  const double C = 1.3, delta = 0.55, kappa = 2.0;
  CountSeries s;
  for (int i = 1; i <= 400; ++i) {
    double T = 30.0 * i / 400;
    s.T.push_back(T);
    s.N.push_back(std::floor(C * std::exp(delta * T) * (1 + std::pow(T, -kappa))));
  }
  auto fit = fit_asymptotic(s);
  auto err = error_term_fit(s, fit.C, fit.delta, Arithmeticity::NonArithmetic);
  o.require(std::abs(fit.C / C - 1) < 0.01, "C within 1%");
  o.require(std::abs(fit.delta / delta - 1) < 0.01, "delta within 1%");
  o.require(!err.unresolved && std::abs(err.kappa / kappa - 1) < 0.1, "kappa within 10%");
  o.note("C " + fmt("%.5f", fit.C) + ", delta " + fmt("%.6f", fit.delta) + ", kappa " + fmt("%.4f", err.kappa));
  return o;
}

}  // namespace

int main() {
  Fixtures fx;
  Witnesses w;
  struct Entry {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {"automaton bijection", [&] { return c01(fx); }},
      {"growth via pressure", [&] { return c02(fx); }},
      {"green function oracle", [&] { return c03(fx); }},
      {"component structure", [&] { return c04(fx); }},
      {"loops realise classes", [&] { return c05(fx, w); }},
      {"birkhoff sums and translation lengths", [&] { return c06(fx, w); }},
      {"arithmeticity verdicts", [&] { return c07(fx); }},
      {"complex spectral scan", [&] { return c08(fx); }},
      {"gibbs bound", [&] { return c09(fx); }},
      {"counting asymptotic", [&] { return c10(fx); }},
      {"poincare operator identity", [&] { return c11(fx); }},
      {"manhattan curve", [&] { return c12(fx); }},
      {"correlation exponent", [&] { return c13(fx); }},
      {"mixing check", [&] { return c14(fx); }},
      {"fit validation", [&] { return c15(fx); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entries[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, entries[i].name, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failed, entries.size());
  return failed == 0 ? 0 : 1;
}
