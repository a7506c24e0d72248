#include "hyperorbit/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

namespace hyperorbit {

// --- Perron data -------------------------------------------------------------

namespace {

Eigen::VectorXd power_iterate(const SparseReal& a, double shift, double tol, int max_iter, int& iterations,
                              double& eigenvalue) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = a * x + shift * x;
    double sum = y.sum();
    if (!(sum > 0) || !std::isfinite(sum)) throw NumericError("power iteration lost positivity");
    y /= sum;
    double change = (y - x).lpNorm<1>();
    double next_lambda = sum - shift;
    x.swap(y);
    if (change < tol && std::abs(next_lambda - lambda) <= tol * std::max(1.0, std::abs(next_lambda))) {
      iterations = it;
      eigenvalue = next_lambda;
      return x;
    }
    lambda = next_lambda;
  }
  std::ostringstream msg;
  msg << "power iteration did not converge in " << max_iter << " steps (last eigenvalue " << lambda << ")";
  throw NumericError(msg.str());
}

}  // namespace

PerronData perron(const SparseReal& a, double tol, int max_iter, bool need_left) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InputError("perron needs a nonempty square matrix");
  PerronData out;
  // Half the mean row sum: large enough to make the shifted matrix
  // aperiodic, small enough to keep the spectral gap.
  const double shift = 0.5 * a.sum() / static_cast<double>(a.rows());
  out.right = power_iterate(a, shift, tol, max_iter, out.iterations, out.eigenvalue);
  out.residual = (a * out.right - out.eigenvalue * out.right).lpNorm<1>();
  if (need_left) {
    SparseReal at = a.transpose();
    int it = 0;
    double lambda_left = 0.0;
    out.left = power_iterate(at, shift, tol, max_iter, it, lambda_left);
    out.iterations = std::max(out.iterations, it);
    out.left /= out.left.dot(out.right);
  }
  return out;
}

// --- cylinder potentials ---------------------------------------------------------

CylinderPotential::CylinderPotential(const MetricModel& metric, const GeodesicAutomaton& aut, int depth)
    : metric_(metric), aut_(&aut), depth_(depth) {
  if (depth < 1) throw InputError("potential depth must be >= 1");
}

std::string CylinderPotential::tag() const { return metric_.tag() + "/depth" + std::to_string(depth_); }

double CylinderPotential::label_distance(const Word& w) const {
  auto it = cache_.find(w);
  if (it != cache_.end()) return it->second;
  double d = metric_.dist(Element{w});
  cache_.emplace(w, d);
  return d;
}

double CylinderPotential::value(const int* window) const {
  Word head, tail;
  for (int i = 1; i <= depth_; ++i) {
    int lab = aut_->label(window[i]);
    if (lab < 0) continue;
    head.push_back(static_cast<Symbol>(lab));
    if (i >= 2) tail.push_back(static_cast<Symbol>(lab));
  }
  if (head.size() == tail.size()) return 0.0;
  return label_distance(head) - label_distance(tail);
}

double CylinderPotential::value(const std::vector<int>& window) const {
  if (static_cast<int>(window.size()) != depth_ + 1) throw InputError("potential window has the wrong length");
  return value(window.data());
}

double CylinderPotential::birkhoff_cycle(const std::vector<int>& cycle) const {
  const std::size_t l = cycle.size();
  std::vector<int> window(static_cast<std::size_t>(depth_) + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < window.size(); ++j) window[j] = cycle[(i + j) % l];
    sum += value(window.data());
  }
  return sum;
}

double CylinderPotential::birkhoff_path(const std::vector<int>& path, int n) const {
  if (static_cast<int>(path.size()) < n + depth_) throw InputError("path too short for the Birkhoff sum");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += value(path.data() + i);
  return sum;
}

namespace {

// Paths of `len` vertices inside the component, in lexicographic order.
template <class Fn>
void for_each_component_path(const GeodesicAutomaton& aut, const Component& comp, int len, Fn&& fn) {
  std::vector<int> path;
  std::vector<std::size_t> pos;
  for (int start : comp.vertices) {
    path.assign(1, start);
    pos.assign(1, 0);
    while (!path.empty()) {
      if (static_cast<int>(path.size()) == len) {
        if (!fn(path)) return;
        path.pop_back();
        pos.pop_back();
        continue;
      }
      const auto& succ = aut.successors(path.back());
      std::size_t& p = pos.back();
      while (p < succ.size() && !comp.contains(succ[p])) ++p;
      if (p == succ.size()) {
        path.pop_back();
        pos.pop_back();
        continue;
      }
      path.push_back(succ[p++]);
      pos.push_back(0);
    }
  }
}

std::vector<int> sorted_successors(const GeodesicAutomaton& aut, int v) {
  std::vector<int> s = aut.successors(v);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double CylinderPotential::truncation_estimate(const Component& comp, std::size_t sample_cap) const {
  CylinderPotential finer(metric_, *aut_, depth_ + 1);
  double worst = 0.0;
  std::size_t seen = 0;
  for_each_component_path(*aut_, comp, depth_ + 2, [&](const std::vector<int>& w) {
    worst = std::max(worst, std::abs(finer.value(w.data()) - value(w.data())));
    return ++seen < sample_cap;
  });
  return worst;
}

bool CylinderPotential::is_constant_on(const Component& comp, double tol, double* constant) const {
  bool first = true, same = true;
  double c = 0.0;
  for_each_component_path(*aut_, comp, depth_ + 1, [&](const std::vector<int>& w) {
    double v = value(w.data());
    if (first) {
      c = v;
      first = false;
    } else if (std::abs(v - c) > tol) {
      same = false;
      return false;
    }
    return true;
  });
  if (constant != nullptr) *constant = c;
  return same && !first;
}

// --- cylinder spaces -------------------------------------------------------------

std::vector<int> CylinderSpace::window(std::size_t t) const {
  std::vector<int> w = states[static_cast<std::size_t>(transitions[t].from)];
  w.push_back(states[static_cast<std::size_t>(transitions[t].to)].back());
  return w;
}

CylinderSpace cylinder_space(const GeodesicAutomaton& aut, const Component& comp, int depth, std::size_t state_cap) {
  if (comp.trivial) throw InputError("cylinder space of a trivial component");
  if (depth < 1) throw InputError("cylinder depth must be >= 1");
  CylinderSpace space;
  space.depth = depth;
  space.vertices = comp.vertices;
  for_each_component_path(aut, comp, depth, [&](const std::vector<int>& p) {
    if (space.states.size() >= state_cap) throw ResourceError("cylinder space exceeds state cap");
    space.states.push_back(p);
    return true;
  });
  std::sort(space.states.begin(), space.states.end());
  std::map<std::vector<int>, int> id;
  for (std::size_t i = 0; i < space.states.size(); ++i) id.emplace(space.states[i], static_cast<int>(i));
  std::vector<int> key(static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    const auto& s = space.states[i];
    std::copy(s.begin() + 1, s.end(), key.begin());
    for (int w : sorted_successors(aut, s.back())) {
      if (!comp.contains(w)) continue;
      key.back() = w;
      space.transitions.push_back({static_cast<int>(i), id.at(key)});
    }
  }
  return space;
}

std::vector<double> tabulate(const CylinderSpace& space, const CylinderPotential& potential) {
  if (potential.depth() != space.depth) throw InputError("potential depth differs from the cylinder space");
  std::vector<double> out(space.transitions.size());
  std::vector<int> w;
  for (std::size_t t = 0; t < space.transitions.size(); ++t) {
    w = space.window(t);
    out[t] = potential.value(w.data());
  }
  return out;
}

template <class Scalar>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> transfer_matrix(const CylinderSpace& space,
                                                             const std::vector<const std::vector<double>*>& psi,
                                                             const std::vector<Scalar>& coeff) {
  if (psi.size() != coeff.size()) throw InputError("one coefficient per potential");
  const auto n = static_cast<Eigen::Index>(space.states.size());
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(space.transitions.size());
  for (std::size_t t = 0; t < space.transitions.size(); ++t) {
    Scalar e(0);
    for (std::size_t i = 0; i < psi.size(); ++i) e += coeff[i] * (*psi[i])[t];
    entries.emplace_back(space.transitions[t].from, space.transitions[t].to, std::exp(-e));
  }
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

template Eigen::SparseMatrix<double, Eigen::RowMajor> transfer_matrix<double>(
    const CylinderSpace&, const std::vector<const std::vector<double>*>&, const std::vector<double>&);
template Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> transfer_matrix<std::complex<double>>(
    const CylinderSpace&, const std::vector<const std::vector<double>*>&, const std::vector<std::complex<double>>&);

double pressure(const CylinderSpace& space, const std::vector<const std::vector<double>*>& psi,
                const std::vector<double>& coeff, double tol) {
  SparseReal a = transfer_matrix<double>(space, psi, coeff);
  return std::log(perron(a, tol, 200000, false).eigenvalue);
}

double word_pressure(const CylinderSpace& space) {
  return pressure(space, std::vector<const std::vector<double>*>{}, std::vector<double>{});
}

double periodic_orbit_pressure(const CylinderSpace& space, const std::vector<double>& psi, double s, int n) {
  if (n < 1) throw InputError("orbit length must be >= 1");
  SparseReal a = transfer_matrix<double>(space, {&psi}, {s});
  // trace(A^n) column by column, with a common log scale.
  long double total = 0.0L;
  const Eigen::Index m = a.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Unit(m, i);
    for (int k = 0; k < n; ++k) x = a * x;
    total += x[i];
  }
  if (!(total > 0)) throw NumericError("no periodic orbits of the requested length");
  return static_cast<double>(std::log(total)) / n;
}

// --- roots and growth ----------------------------------------------------------

RootReport find_decreasing_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  RootReport rep;
  auto eval = [&](double x) {
    ++rep.evaluations;
    return f(x);
  };
  double flo = eval(lo), fhi = eval(hi);
  for (int i = 0; i < 60 && flo < 0; ++i) {
    double w = hi - lo;
    hi = lo;
    fhi = flo;
    lo -= 2 * w;
    flo = eval(lo);
  }
  for (int i = 0; i < 60 && fhi > 0; ++i) {
    double w = hi - lo;
    lo = hi;
    flo = fhi;
    hi += 2 * w;
    fhi = eval(hi);
  }
  if (flo < 0 || fhi > 0) throw NumericError("root bracketing failed");
  while (hi - lo > 1e-8) {
    double mid = 0.5 * (lo + hi);
    double fm = eval(mid);
    if (fm > 0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Secant polish, kept inside the bracket.
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  double x = 0.5 * (lo + hi), fx = eval(x);
  for (int i = 0; i < 30 && std::abs(fx) > tol; ++i) {
    if (f1 == f0) break;
    double next = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double fn = eval(next);
    if (fn > 0) lo = next; else hi = next;
    x0 = x1;
    f0 = f1;
    x1 = next;
    f1 = fn;
    if (std::abs(fn) < std::abs(fx)) {
      x = next;
      fx = fn;
    }
    if (x1 == x0) break;
  }
  rep.root = x;
  rep.residual = fx;
  return rep;
}

namespace {

// Karp's minimum mean cycle weight.
double min_cycle_mean(const CylinderSpace& space, const std::vector<double>& psi) {
  const std::size_t n = space.states.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(n + 1, std::vector<double>(n, inf));
  std::fill(dist[0].begin(), dist[0].end(), 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t t = 0; t < space.transitions.size(); ++t) {
      const auto& tr = space.transitions[t];
      double d = dist[k - 1][static_cast<std::size_t>(tr.from)];
      if (d < inf) {
        double& target = dist[k][static_cast<std::size_t>(tr.to)];
        target = std::min(target, d + psi[t]);
      }
    }
  }
  double best = inf;
  for (std::size_t v = 0; v < n; ++v) {
    if (dist[n][v] == inf) continue;
    double worst = -inf;
    for (std::size_t k = 0; k < n; ++k) {
      if (dist[k][v] < inf) worst = std::max(worst, (dist[n][v] - dist[k][v]) / static_cast<double>(n - k));
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

GrowthReport growth_rate(const CylinderSpace& space, const std::vector<double>& psi) {
  GrowthReport rep;
  rep.min_cycle_average = space.states.size() <= 2000 ? min_cycle_mean(space, psi)
                                                      : std::numeric_limits<double>::quiet_NaN();
  if (rep.min_cycle_average <= 0) throw InputError("potential has a cycle with nonpositive average");
  double mean = 0.0;
  for (double p : psi) mean += p;
  mean /= static_cast<double>(psi.size());
  if (!(mean > 0)) throw InputError("potential is not positive on average");
  const double p0 = word_pressure(space);
  RootReport r = find_decreasing_root([&](double s) { return pressure(space, psi, s); }, 0.0,
                                      std::max(1e-3, 2 * p0 / mean), 1e-14);
  rep.value = r.root;
  rep.residual = r.residual;
  return rep;
}

// --- Gibbs data --------------------------------------------------------------------

GibbsReport gibbs_data(const CylinderSpace& space, const std::vector<double>& psi, double s, int depth_test,
                       std::size_t cylinder_cap) {
  GibbsReport rep;
  SparseReal a = transfer_matrix<double>(space, {&psi}, {s});
  rep.perron = perron(a, 1e-14);
  const double lambda = rep.perron.eigenvalue;
  rep.pressure = std::log(lambda);
  const Eigen::VectorXd& h = rep.perron.right;
  const Eigen::VectorXd& nu = rep.perron.left;
  const auto n = static_cast<std::size_t>(a.rows());

  // Markov chain p_ij = A_ij h_j / (lambda h_i), initial law nu_i h_i.
  std::vector<std::vector<std::pair<int, double>>> step(n);  // (j, log A_ij)
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseReal::InnerIterator it(a, i); it; ++it) {
      step[static_cast<std::size_t>(i)].push_back({static_cast<int>(it.col()), std::log(it.value())});
    }
  }
  // A state cylinder x_0..x_n is the vertex cylinder of m = n + k vertices.
  // Its Birkhoff sum S_m over m windows leaves the last k windows to the
  // extension; tail_lo/tail_hi bound them over every admissible extension.
  const int k = space.depth;
  std::vector<double> tail_lo(n, 0.0), tail_hi(n, 0.0);
  for (int j = 0; j < k; ++j) {
    std::vector<double> lo(n, std::numeric_limits<double>::infinity()), hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [t, log_a] : step[i]) {
        lo[i] = std::min(lo[i], log_a + tail_lo[static_cast<std::size_t>(t)]);
        hi[i] = std::max(hi[i], log_a + tail_hi[static_cast<std::size_t>(t)]);
      }
    }
    tail_lo.swap(lo);
    tail_hi.swap(hi);
  }
  // Deepest level whose cylinders all fit under the cap.
  int depth_eff = 0;
  {
    std::vector<double> paths(n, 1.0);
    double total = static_cast<double>(n);
    while (depth_eff < depth_test) {
      std::vector<double> next(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : step[i]) next[i] += paths[static_cast<std::size_t>(e.first)];
      double level = std::accumulate(next.begin(), next.end(), 0.0);
      if (total + level > static_cast<double>(cylinder_cap)) break;
      total += level;
      paths.swap(next);
      ++depth_eff;
    }
    if (depth_eff < depth_test) {
      std::cerr << "warning: Gibbs check limited to depth " << depth_eff << " by the cylinder cap\n";
    }
  }
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  rep.state_ratio_min = std::numeric_limits<double>::infinity();
  rep.state_ratio_max = 0.0;
  std::vector<double> mass_by_n(static_cast<std::size_t>(depth_eff) + 1, 0.0);
  struct Frame {
    int state;
    int n;
    double mass;
    double birkhoff;  // S_n(-s psi) over the n fixed windows
  };
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < n; ++i) stack.push_back({static_cast<int>(i), 0, nu[static_cast<Eigen::Index>(i)] * h[static_cast<Eigen::Index>(i)], 0.0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    ++rep.cylinders;
    double state_ratio = f.mass / std::exp(-f.n * rep.pressure + f.birkhoff);
    rep.state_ratio_min = std::min(rep.state_ratio_min, state_ratio);
    rep.state_ratio_max = std::max(rep.state_ratio_max, state_ratio);
    const auto st = static_cast<std::size_t>(f.state);
    double base = -(f.n + k) * rep.pressure + f.birkhoff;
    rep.ratio_min = std::min(rep.ratio_min, f.mass / std::exp(base + tail_hi[st]));
    rep.ratio_max = std::max(rep.ratio_max, f.mass / std::exp(base + tail_lo[st]));
    mass_by_n[static_cast<std::size_t>(f.n)] += f.mass;
    if (f.n == depth_eff) continue;
    const double hi = h[f.state];
    for (const auto& [j, log_a] : step[st]) {
      double p = std::exp(log_a) * h[j] / (lambda * hi);
      stack.push_back({j, f.n + 1, f.mass * p, f.birkhoff + log_a});
    }
  }
  rep.depth_tested = depth_eff;
  for (int k = 0; k <= rep.depth_tested; ++k) {
    rep.max_mass_defect = std::max(rep.max_mass_defect, std::abs(mass_by_n[static_cast<std::size_t>(k)] - 1.0));
  }
  return rep;
}

// --- Manhattan curves and correlation --------------------------------------------

double manhattan_word(const CylinderSpace& space, const std::vector<double>& psi_d, double t) {
  return pressure(space, psi_d, t);
}

double manhattan_pair(const CylinderSpace& space, const std::vector<double>& psi_d,
                      const std::vector<double>& psi_dstar, double t) {
  auto f = [&](double s) { return pressure(space, {&psi_d, &psi_dstar}, {s, t}); };
  return find_decreasing_root(f, -1.0, 2.0, 1e-14).root;
}

double derivative5(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

CorrelationExponent correlation_exponent(const CylinderSpace& space, const std::vector<double>& psi_d,
                                         const std::vector<double>& psi_dstar) {
  CorrelationExponent out;
  auto theta = [&](double t) { return manhattan_pair(space, psi_d, psi_dstar, t); };
  const double t0 = theta(0.0), t1 = theta(1.0), th = theta(0.5);
  out.convexity_margin = 0.5 * (t0 + t1) - th;
  if (std::abs(t0 - 1) > 1e-6 || std::abs(t1) > 1e-6) {
    throw InputError("correlation exponent needs metrics normalised to growth rate 1");
  }
  if (out.convexity_margin < 1e-9) {
    out.degenerate = true;
    out.xi = 0.0;
    out.theta_at_xi = t0;
    out.alpha = t0;
    return out;
  }
  // theta' is increasing; -1 is the mean slope over [0, 1].
  double lo = 0.0, hi = 1.0;
  auto slope = [&](double t) { return derivative5(theta, t); };
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (slope(mid) < -1.0) lo = mid; else hi = mid;
  }
  out.xi = 0.5 * (lo + hi);
  out.theta_at_xi = theta(out.xi);
  out.alpha = out.xi + out.theta_at_xi;
  return out;
}

// --- complex spectral scan ------------------------------------------------------

double spectral_radius_squaring(Eigen::MatrixXcd a, int squarings, double tol) {
  // log|A^(2^m)| / 2^m = log rho + c / 2^m + (exponentially small), so the
  // Richardson combination 2 e_m - e_(m-1) converges once the subdominant
  // part has died out.
  double log_scale = 0.0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double extrapolated = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXcd sq(a.rows(), a.cols());
  for (int m = 0; m <= squarings; ++m) {
    double nrm = a.norm();
    if (!(nrm > 0) || !std::isfinite(nrm)) throw NumericError("repeated squaring lost the matrix");
    double next = (log_scale + std::log(nrm)) / std::ldexp(1.0, m);
    double rich = 2.0 * next - estimate;
    if (m > 3 && std::abs(rich - extrapolated) < tol) return std::exp(rich);
    extrapolated = rich;
    estimate = next;
    a /= nrm;
    log_scale = 2 * (log_scale + std::log(nrm));
    sq.noalias() = a * a;
    a.swap(sq);
  }
  return std::exp(std::isfinite(extrapolated) ? extrapolated : estimate);
}

std::vector<SpectralPoint> spectral_scan(const CylinderSpace& space, const std::vector<double>& psi, double v,
                                         const std::vector<double>& t_grid, std::size_t dense_cap) {
  if (space.states.size() > dense_cap) throw ResourceError("spectral scan exceeds dense matrix cap");
  std::vector<SpectralPoint> out;
  for (double t : t_grid) {
    SpectralPoint p;
    p.t = t;
    auto a = transfer_matrix<std::complex<double>>(space, {&psi}, {std::complex<double>(v, t)});
    try {
      p.rho = spectral_radius_squaring(Eigen::MatrixXcd(a));
    } catch (const NumericError&) {
      p.failed = true;
    }
    out.push_back(p);
  }
  return out;
}

// --- arithmeticity, mixing and maximal components -------------------------------

ArithmeticityReport arithmeticity(const CylinderPotential& potential, const Component& comp, int l_max, double tol,
                                  double tol_fit) {
  std::vector<double> sums;
  for (const auto& cyc : periodic_orbits(potential.automaton(), comp, l_max)) {
    sums.push_back(potential.birkhoff_cycle(cyc));
  }
  return lattice_analysis(std::move(sums), tol, tol_fit);
}

std::string to_string(MixingVerdict v) {
  switch (v) {
    case MixingVerdict::WeakMixing: return "weak_mixing";
    case MixingVerdict::NotWeakMixing: return "not_weak_mixing";
    case MixingVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

MixingReport mixing_check(const CylinderPotential& potential, const Component& comp, int roof_steps, int l_max) {
  if (roof_steps < 1) throw InputError("roof needs at least one step");
  MixingReport rep;
  rep.roof_steps = roof_steps;
  std::vector<double> sums;
  for (const auto& cyc : periodic_orbits(potential.automaton(), comp, l_max)) {
    if (static_cast<int>(cyc.size()) % roof_steps == 0) sums.push_back(potential.birkhoff_cycle(cyc));
  }
  rep.roof = lattice_analysis(std::move(sums));
  switch (rep.roof.verdict) {
    case Arithmeticity::Lattice: rep.verdict = MixingVerdict::NotWeakMixing; break;
    case Arithmeticity::NonArithmetic: rep.verdict = MixingVerdict::WeakMixing; break;
    case Arithmeticity::Inconclusive: rep.verdict = MixingVerdict::Inconclusive; break;
  }
  return rep;
}

MaximalCrossCheck cross_check_maximal(const GeodesicAutomaton& aut, const std::vector<Component>& comps,
                                      const CylinderPotential& potential, double tol) {
  MaximalCrossCheck rep;
  const double ninf = -std::numeric_limits<double>::infinity();
  rep.growth.assign(comps.size(), ninf);
  rep.pressures.assign(comps.size(), ninf);
  Digraph g = to_digraph(aut);
  std::vector<int> candidates;
  for (const auto& c : comps) {
    if (c.trivial) continue;
    if (aut.augmented() && c.vertices.size() == 1 && c.vertices.front() == aut.zero()) continue;
    candidates.push_back(c.id);
    rep.growth[static_cast<std::size_t>(c.id)] = component_growth(g, c);
  }
  if (candidates.empty()) return rep;
  std::vector<CylinderSpace> spaces;
  std::vector<std::vector<double>> psis;
  rep.v = ninf;
  for (int id : candidates) {
    spaces.push_back(cylinder_space(aut, comps[static_cast<std::size_t>(id)], potential.depth()));
    psis.push_back(tabulate(spaces.back(), potential));
    rep.v = std::max(rep.v, growth_rate(spaces.back(), psis.back()).value);
  }
  double gmax = ninf, pmax = ninf;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto id = static_cast<std::size_t>(candidates[i]);
    rep.pressures[id] = pressure(spaces[i], psis[i], rep.v);
    gmax = std::max(gmax, rep.growth[id]);
    pmax = std::max(pmax, rep.pressures[id]);
  }
  for (int id : candidates) {
    if (rep.growth[static_cast<std::size_t>(id)] >= gmax - tol) rep.word_maximal.push_back(id);
    if (rep.pressures[static_cast<std::size_t>(id)] >= pmax - tol) rep.potential_maximal.push_back(id);
  }
  rep.sets_equal = rep.word_maximal == rep.potential_maximal;
  rep.disjoint = true;
  std::vector<int> all = rep.word_maximal;
  all.insert(all.end(), rep.potential_maximal.begin(), rep.potential_maximal.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (int a : all) {
    for (int b : all) {
      if (a != b && reachable(g, comps[static_cast<std::size_t>(a)], comps[static_cast<std::size_t>(b)])) {
        rep.disjoint = false;
      }
    }
  }
  return rep;
}

}  // namespace hyperorbit
