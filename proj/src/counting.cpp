#include "hyperorbit/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace hyperorbit {

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  LineFit f;
  if (x.size() < 2) return f;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw NumericError("degenerate regression abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  if (x.size() > 2) f.slope_se = std::sqrt(ss / (n - 2.0) / sxx);
  return f;
}

const Ball* ensure_ball(const Presentation& presentation, int n_max, const Ball* ball,
                        std::unique_ptr<Ball>& owned) {
  if (presentation.is_free()) return nullptr;
  if (ball != nullptr && ball->radius() >= n_max) return ball;
  owned = std::make_unique<Ball>(presentation, n_max);
  return owned.get();
}

double median_of(std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

}  // namespace

void for_each_ball_element(const Presentation& presentation, int n_max, const Ball* ball,
                           const std::function<void(const Word&)>& fn) {
  if (n_max < 0) throw InputError("ball radius must be nonnegative");
  std::unique_ptr<Ball> owned;
  const Ball* b = ensure_ball(presentation, n_max, ball, owned);
  if (b == nullptr) {
    for_each_free_word(presentation.symbol_count(), n_max, fn);
    return;
  }
  std::size_t end = b->sphere_end(n_max);
  for (std::size_t x = 0; x < end; ++x) fn(b->word(static_cast<Ball::Index>(x)));
}

std::size_t CountReport::count_below(double T) const {
  if (T > covered) throw ResourceError("T beyond the covered radius of the enumerated ball");
  return static_cast<std::size_t>(std::lower_bound(distances.begin(), distances.end(), T) - distances.begin());
}

CountReport count_ball(const MetricModel& metric, int n_max, const Ball* ball) {
  if (n_max < 1) throw InputError("counting needs n_max >= 1");
  if (metric.safe_length() >= 0 && metric.safe_length() < n_max)
    throw InputError("metric cannot be evaluated safely up to the requested radius");
  CountReport r;
  r.metric_tag = metric.tag();
  r.n_max = n_max;
  r.sphere_min.assign(static_cast<std::size_t>(n_max) + 1, std::numeric_limits<double>::infinity());
  for_each_ball_element(metric.presentation(), n_max, ball, [&](const Word& w) {
    double d = metric.dist(w);
    r.distances.push_back(d);
    auto& m = r.sphere_min[w.size()];
    m = std::min(m, d);
  });
  std::sort(r.distances.begin(), r.distances.end());
  r.covered = r.sphere_min[static_cast<std::size_t>(n_max)];
  return r;
}

CountSeries count_series(const CountReport& report, std::size_t points) {
  if (points < 3) throw InputError("count series needs at least 3 points");
  CountSeries s;
  for (std::size_t i = 1; i <= points; ++i) {
    double T = report.covered * static_cast<double>(i) / static_cast<double>(points);
    s.T.push_back(T);
    s.N.push_back(static_cast<double>(report.count_below(T)));
  }
  return s;
}

AsymptoticFit fit_asymptotic(const CountSeries& series, double delta_hint, double oscillation_threshold) {
  const std::size_t n = series.T.size();
  if (n < 3) throw InputError("series too short");
  double t_lo = series.T.front() + (series.T.back() - series.T.front()) * (2.0 / 3.0);
  std::vector<double> wt, wlog, wN;
  for (std::size_t i = 0; i < n; ++i) {
    if (series.T[i] >= t_lo && series.N[i] > 0) {
      wt.push_back(series.T[i]);
      wlog.push_back(std::log(series.N[i]));
      wN.push_back(series.N[i]);
    }
  }
  if (wt.size() < 20) throw InputError("fit window holds fewer than 20 sample points");
  AsymptoticFit f;
  f.window_points = wt.size();
  if (delta_hint > 0.0) {
    f.delta = delta_hint;
    f.delta_fixed = true;
  } else {
    f.delta = fit_line(wt, wlog).slope;
  }
  double sum = 0.0, sum_log = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < wt.size(); ++i) {
    double c = wN[i] * std::exp(-f.delta * wt[i]);
    sum += c;
    sum_log += std::log(c);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const auto m = static_cast<double>(wt.size());
  f.C = sum / m;
  f.C_lsq = std::exp(sum_log / m);
  f.variation = (hi - lo) / f.C;
  f.estimator_mismatch = std::abs(f.C - f.C_lsq) > 0.02 * f.C;
  f.oscillation = f.variation > oscillation_threshold;
  f.residuals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) f.residuals.push_back(series.N[i] * std::exp(-f.delta * series.T[i]) / f.C - 1.0);
  return f;
}

ErrorTermFit error_term_fit(const CountSeries& series, double C, double delta, Arithmeticity verdict) {
  if (verdict == Arithmeticity::Lattice)
    throw InputError("error term fit refused: length spectrum is arithmetic");
  if (C <= 0.0) throw InputError("error term fit needs C > 0");
  const std::size_t n = series.T.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = series.N[i] * std::exp(-delta * series.T[i]) / C - 1.0;
  double t_lo = series.T.front() + (series.T.back() - series.T.front()) * (2.0 / 3.0);
  double noise = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (series.T[i] >= t_lo) noise = std::max(noise, std::abs(r[i]));
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    if (series.T[i] <= 0.0 || series.N[i] <= 0.0) continue;
    if (std::abs(r[i]) > 10.0 * noise) {
      x.push_back(std::log(series.T[i]));
      y.push_back(std::log(std::abs(r[i])));
    }
  }
  ErrorTermFit f;
  f.points = x.size();
  if (x.size() < 5) {
    f.unresolved = true;
    return f;
  }
  LineFit lf = fit_line(x, y);
  f.kappa = -lf.slope;
  f.kappa_error = 2.0 * lf.slope_se;
  return f;
}

std::complex<double> PoincareComparison::partial_sum(int n) const {
  std::complex<double> s{0.0, 0.0};
  for (int i = 0; i < n && i < static_cast<int>(direct.size()); ++i) s += direct[static_cast<std::size_t>(i)];
  return s;
}

PoincareComparison poincare_compare(const MetricModel& metric, const GeodesicAutomaton& augmented,
                                    std::complex<double> s, int n_max, const std::vector<int>& comp_set,
                                    const Ball* ball) {
  if (!augmented.augmented()) throw InputError("Poincare comparison needs the augmented automaton");
  if (n_max < 1) throw InputError("n_max must be positive");
  const int nv = augmented.vertex_count();
  const int zero = augmented.zero();
  std::vector<std::uint8_t> allowed(static_cast<std::size_t>(nv), comp_set.empty() ? 1 : 0);
  for (int v : comp_set) {
    if (v < 0 || v >= nv) throw InputError("component vertex out of range");
    allowed[static_cast<std::size_t>(v)] = 1;
  }
  allowed[static_cast<std::size_t>(augmented.initial())] = 1;
  allowed[static_cast<std::size_t>(zero)] = 1;

  PoincareComparison out;
  out.s = s;
  const auto len = static_cast<std::size_t>(n_max);
  out.direct.assign(len, {0.0, 0.0});
  out.operator_form.assign(len, {0.0, 0.0});
  out.unrestricted.assign(len, {0.0, 0.0});

  // Direct sphere sums along accepted paths.
  for_each_ball_element(metric.presentation(), n_max, ball, [&](const Word& w) {
    if (w.empty()) return;
    std::complex<double> term = std::exp(-s * metric.dist(w));
    out.unrestricted[w.size() - 1] += term;
    int v = augmented.initial();
    bool inside = true;
    for (Symbol c : w) {
      v = augmented.target(v, c);
      if (v == GeodesicAutomaton::kNone) throw ValidationError("normal form rejected by the automaton");
      inside = inside && allowed[static_cast<std::size_t>(v)] != 0;
    }
    if (inside) out.direct[w.size() - 1] += term;
  });

  // Preimage tree of the fixed point 0-dot. A node is a chain y_j..y_m,0,0,..
  // with head y_j, the element E = label(y_{j+1})..label(y_m) and the weight
  // prod exp(-s psi) over the shifts already taken.
  std::vector<std::vector<int>> pred(static_cast<std::size_t>(nv));
  for (const auto& e : augmented.edges()) pred[static_cast<std::size_t>(e.to)].push_back(e.from);
  struct Node {
    int head;
    Word element;  // reversed: last letter first
    double dist;
    std::complex<double> weight;
  };
  std::vector<Node> stack;
  for (int t : pred[static_cast<std::size_t>(zero)]) {
    if (t == zero || allowed[static_cast<std::size_t>(t)] == 0) continue;
    stack.push_back({t, {}, 0.0, {1.0, 0.0}});
  }
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.head == augmented.initial()) {
      if (!node.element.empty()) out.operator_form[node.element.size() - 1] += node.weight;
      continue;
    }
    if (static_cast<int>(node.element.size()) >= n_max) continue;
    Word grown = node.element;
    grown.push_back(static_cast<Symbol>(augmented.label(node.head)));
    Word forward(grown.rbegin(), grown.rend());
    double d = metric.dist(forward);
    std::complex<double> w = node.weight * std::exp(-s * (d - node.dist));
    for (int t : pred[static_cast<std::size_t>(node.head)]) {
      if (allowed[static_cast<std::size_t>(t)] == 0 || t == zero) continue;
      stack.push_back({t, grown, d, w});
    }
  }

  for (std::size_t i = 0; i < len; ++i) {
    double scale = std::max(std::abs(out.direct[i]), 1e-300);
    out.max_relative_discrepancy =
        std::max(out.max_relative_discrepancy, std::abs(out.direct[i] - out.operator_form[i]) / scale);
  }
  return out;
}

CorrelationReport correlate(const MetricModel& d, const MetricModel& dstar, double eps, int n_max,
                            const Ball* ball, double fit_from) {
  if (eps <= 0.0) throw InputError("eps must be positive");
  if (&d.presentation() != &dstar.presentation() && d.presentation().describe() != dstar.presentation().describe())
    throw InputError("metrics live on different groups");
  CorrelationReport r;
  r.eps = eps;
  r.n_max = n_max;
  std::vector<std::pair<double, bool>> joint;
  double outer = std::numeric_limits<double>::infinity();
  for_each_ball_element(d.presentation(), n_max, ball, [&](const Word& w) {
    double a = d.dist(w);
    double b = dstar.dist(w);
    joint.emplace_back(a, std::abs(a - b) <= eps);
    if (static_cast<int>(w.size()) == n_max) outer = std::min(outer, a);
  });
  r.covered = outer;
  std::sort(joint.begin(), joint.end());
  // Step-function corners: the last index of each distinct d value.
  std::vector<double> tv, mv, nvv;
  std::size_t m = 0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (joint[i].second) ++m;
    bool last = i + 1 == joint.size() || joint[i + 1].first - joint[i].first > 1e-12 * (1.0 + joint[i].first);
    if (!last) continue;
    double T = joint[i].first;
    if (T >= outer) break;
    if (T >= fit_from * outer && m > 0) {
      tv.push_back(T);
      mv.push_back(static_cast<double>(m));
      nvv.push_back(static_cast<double>(i + 1));
    }
  }
  const std::size_t cap = 400;
  if (tv.size() > cap) {
    std::vector<double> t2, m2, n2;
    for (std::size_t k = 0; k < cap; ++k) {
      std::size_t i = k * (tv.size() - 1) / (cap - 1);
      t2.push_back(tv[i]);
      m2.push_back(mv[i]);
      n2.push_back(nvv[i]);
    }
    tv.swap(t2);
    mv.swap(m2);
    nvv.swap(n2);
  }
  r.T = tv;
  r.M = mv;
  r.N = nvv;
  if (tv.size() < 5 || tv.back() - tv.front() < 2.0) {
    r.status = "underpowered";
    if (tv.size() < 2) return r;
  }
  std::vector<double> y1, y2;
  for (std::size_t i = 0; i < tv.size(); ++i) {
    y1.push_back(std::log(mv[i]));
    y2.push_back(std::log(mv[i]) + 0.5 * std::log(tv[i]));
  }
  LineFit a = fit_line(tv, y1);
  LineFit b = fit_line(tv, y2);
  r.alpha_plain = a.slope;
  r.alpha_sqrt = b.slope;
  r.residual_plain = a.rms;
  r.residual_sqrt = b.rms;
  return r;
}

MeanRatioReport mean_ratio_diagnostic(const MetricModel& d, const MetricModel& dstar, double a, double b,
                                      int n_max, double eps, const Ball* ball) {
  if (n_max < 2) throw InputError("mean ratio diagnostic needs n_max >= 2");
  std::vector<std::vector<double>> ratios(static_cast<std::size_t>(n_max) + 1);
  for_each_ball_element(d.presentation(), n_max, ball, [&](const Word& w) {
    if (w.empty()) return;
    double v = a * d.dist(w) + b * dstar.dist(w);
    ratios[w.size()].push_back(v / static_cast<double>(w.size()));
  });
  MeanRatioReport r;
  for (int n = 1; n <= n_max; ++n) {
    auto copy = ratios[static_cast<std::size_t>(n)];
    r.median.push_back(median_of(copy));
  }
  r.lambda = r.median.back();
  std::vector<double> x, y;
  for (int n = 1; n <= n_max; ++n) {
    const auto& v = ratios[static_cast<std::size_t>(n)];
    std::size_t out = 0;
    for (double q : v)
      if (std::abs(q - r.lambda) > eps) ++out;
    double frac = static_cast<double>(out) / static_cast<double>(v.size());
    r.tail_fraction.push_back(frac);
    if (frac > 0.0 && n >= (n_max + 1) / 2) {
      x.push_back(n);
      y.push_back(std::log(frac));
    }
  }
  if (x.size() >= 2) {
    r.decay_rate = fit_line(x, y).slope;
    r.decaying = r.decay_rate < 0.0;
  } else {
    // Tail already empty on the upper spheres.
    r.decaying = r.tail_fraction.back() == 0.0;
    r.decay_rate = r.decaying ? -std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

}  // namespace hyperorbit
