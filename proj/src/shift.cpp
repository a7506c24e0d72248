#include "hyperorbit/shift.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <numeric>
#include <set>

#include "hyperorbit/thermo.hpp"

namespace hyperorbit {

Digraph to_digraph(const GeodesicAutomaton& aut) {
  Digraph g(static_cast<std::size_t>(aut.vertex_count()));
  for (int v = 0; v < aut.vertex_count(); ++v) g[static_cast<std::size_t>(v)] = aut.successors(v);
  return g;
}

bool Component::contains(int v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

// --- strongly connected components ------------------------------------------------

std::vector<Component> scc_decompose(const Digraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> found;
  int counter = 0;
  // Iterative Tarjan: frames hold (vertex, next successor position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto vi = static_cast<std::size_t>(v);
      if (pos == 0 && index[vi] < 0) {
        index[vi] = low[vi] = counter++;
        stack.push_back(v);
        on_stack[vi] = 1;
      }
      if (pos < g[vi].size()) {
        int w = g[vi][pos++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] < 0) {
          frames.push_back({w, 0});
        } else if (on_stack[wi]) {
          low[vi] = std::min(low[vi], index[wi]);
        }
        continue;
      }
      if (low[vi] == index[vi]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        found.push_back(std::move(comp));
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        auto pi = static_cast<std::size_t>(frames.back().first);
        low[pi] = std::min(low[pi], low[static_cast<std::size_t>(finished)]);
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<Component> out;
  for (auto& vs : found) {
    Component c;
    c.id = static_cast<int>(out.size());
    c.vertices = std::move(vs);
    const auto& succ = g[static_cast<std::size_t>(c.vertices.front())];
    c.trivial = c.vertices.size() == 1 &&
                std::find(succ.begin(), succ.end(), c.vertices.front()) == succ.end();
    if (!c.trivial) {
      PeriodInfo p = period(g, c);
      c.period = p.period;
      c.cyclic_part.assign(c.vertices.size(), 0);
      for (int j = 0; j < p.period; ++j) {
        for (int v : p.parts[static_cast<std::size_t>(j)]) {
          auto it = std::lower_bound(c.vertices.begin(), c.vertices.end(), v);
          c.cyclic_part[static_cast<std::size_t>(it - c.vertices.begin())] = j;
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

Digraph condensation(const Digraph& g, const std::vector<Component>& comps) {
  std::vector<int> owner(g.size(), -1);
  for (const auto& c : comps)
    for (int v : c.vertices) owner[static_cast<std::size_t>(v)] = c.id;
  std::vector<std::set<int>> edges(comps.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (int w : g[v]) {
      int a = owner[v], b = owner[static_cast<std::size_t>(w)];
      if (a != b) edges[static_cast<std::size_t>(a)].insert(b);
    }
  }
  Digraph out(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) out[i].assign(edges[i].begin(), edges[i].end());
  return out;
}

bool is_acyclic(const Digraph& g) {
  // Kahn's algorithm.
  std::vector<int> indegree(g.size(), 0);
  for (const auto& succ : g)
    for (int w : succ) ++indegree[static_cast<std::size_t>(w)];
  std::vector<int> ready;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (indegree[v] == 0) ready.push_back(static_cast<int>(v));
  std::size_t removed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++removed;
    for (int w : g[static_cast<std::size_t>(v)])
      if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
  }
  return removed == g.size();
}

bool reachable(const Digraph& g, const Component& from, const Component& to) {
  std::vector<char> seen(g.size(), 0);
  std::vector<int> stack(from.vertices.begin(), from.vertices.end());
  for (int v : stack) seen[static_cast<std::size_t>(v)] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (to.contains(v)) return true;
    for (int w : g[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

PeriodInfo period(const Digraph& g, const Component& comp) {
  PeriodInfo info;
  if (comp.trivial) {
    std::cerr << "warning: period of a trivial component is reported as 0\n";
    return info;
  }
  std::vector<int> level(g.size(), -1);
  const int root = comp.vertices.front();
  level[static_cast<std::size_t>(root)] = 0;
  std::deque<int> queue = {root};
  int p = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : g[static_cast<std::size_t>(v)]) {
      if (!comp.contains(w)) continue;
      auto& lw = level[static_cast<std::size_t>(w)];
      if (lw < 0) {
        lw = level[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      } else {
        p = std::gcd(p, std::abs(level[static_cast<std::size_t>(v)] + 1 - lw));
      }
    }
  }
  info.period = p;
  info.parts.assign(static_cast<std::size_t>(p), {});
  for (int v : comp.vertices) info.parts[static_cast<std::size_t>(level[static_cast<std::size_t>(v)] % p)].push_back(v);
  return info;
}

std::vector<int> cycle_lengths(const Digraph& g, const Component& comp, int l_max) {
  // Reachability of each vertex from the root after exactly l steps.
  const int root = comp.vertices.front();
  std::vector<char> cur(g.size(), 0), nxt(g.size(), 0);
  cur[static_cast<std::size_t>(root)] = 1;
  std::vector<int> out;
  for (int l = 1; l <= l_max; ++l) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int v : comp.vertices) {
      if (!cur[static_cast<std::size_t>(v)]) continue;
      for (int w : g[static_cast<std::size_t>(v)])
        if (comp.contains(w)) nxt[static_cast<std::size_t>(w)] = 1;
    }
    std::swap(cur, nxt);
    if (cur[static_cast<std::size_t>(root)]) out.push_back(l);
  }
  return out;
}

double component_growth(const Digraph& g, const Component& comp) {
  if (comp.trivial) return -std::numeric_limits<double>::infinity();
  const auto n = static_cast<Eigen::Index>(comp.vertices.size());
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int w : g[static_cast<std::size_t>(comp.vertices[static_cast<std::size_t>(i)])]) {
      auto it = std::lower_bound(comp.vertices.begin(), comp.vertices.end(), w);
      if (it != comp.vertices.end() && *it == w) entries.emplace_back(i, it - comp.vertices.begin(), 1.0);
    }
  }
  SparseReal a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return std::log(perron(a, 1e-14, 200000, false).eigenvalue);
}

MaximalSet word_maximal_components(const GeodesicAutomaton& aut, const std::vector<Component>& comps, double tol) {
  Digraph g = to_digraph(aut);
  MaximalSet out;
  out.max_value = -std::numeric_limits<double>::infinity();
  for (const auto& c : comps) {
    out.values.push_back(component_growth(g, c));
    out.max_value = std::max(out.max_value, out.values.back());
  }
  for (const auto& c : comps) {
    if (!c.trivial && out.values[static_cast<std::size_t>(c.id)] >= out.max_value - tol) out.ids.push_back(c.id);
  }
  return out;
}

// --- periodic orbits and loops ------------------------------------------------

std::vector<std::vector<int>> periodic_orbits(const GeodesicAutomaton& aut, const Component& comp, int l_max,
                                              std::size_t cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  for (int start : comp.vertices) {
    // Closed walks from `start` through vertices >= start; the least
    // rotation then starts at `start`.
    path.assign(1, start);
    std::vector<std::size_t> pos(1, 0);
    while (!path.empty()) {
      const auto& succ = aut.successors(path.back());
      std::size_t& p = pos.back();
      if (p == succ.size() || static_cast<int>(path.size()) > l_max) {
        path.pop_back();
        pos.pop_back();
        continue;
      }
      int w = succ[p++];
      if (w < start || !comp.contains(w)) continue;
      if (w == start) {
        std::vector<int> cyc = path;
        bool least = true;
        for (std::size_t k = 1; k < cyc.size() && least; ++k) {
          std::vector<int> rot(cyc.begin() + static_cast<std::ptrdiff_t>(k), cyc.end());
          rot.insert(rot.end(), cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(k));
          if (rot < cyc) least = false;
        }
        if (least) {
          if (out.size() >= cap) throw ResourceError("periodic orbit enumeration exceeds cap");
          out.push_back(std::move(cyc));
        }
      }
      if (static_cast<int>(path.size()) < l_max) {
        path.push_back(w);
        pos.push_back(0);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

Word cycle_word(const GeodesicAutomaton& aut, const std::vector<int>& cycle) {
  Word w;
  for (std::size_t i = 1; i <= cycle.size(); ++i) {
    int lab = aut.label(cycle[i % cycle.size()]);
    if (lab >= 0) w.push_back(static_cast<Symbol>(lab));
  }
  return w;
}

std::optional<LoopWitness> loops_realizing_class(const GeodesicAutomaton& aut, const Presentation& presentation,
                                                 const Component& comp, const ConjClass& c, int n_max, int l_max) {
  if (c.is_torsion || c.representative.is_identity()) {
    throw InputError("loops_realizing_class needs a non-torsion class");
  }
  for (int n = 1; n <= n_max; ++n) {
    std::optional<LoopWitness> best;
    for (int sign : {1, -1}) {
      Word base = sign > 0 ? c.representative.word : inverse_word(c.representative.word);
      Word power;
      for (int i = 0; i < n; ++i) power.insert(power.end(), base.begin(), base.end());
      for (const Word& u : cyclic_geodesic_words(presentation, power)) {
        if (u.empty() || static_cast<int>(u.size()) > l_max) continue;
        if (best && u.size() > best->label.size()) continue;
        for (int x0 : comp.vertices) {
          std::vector<int> cyc = {x0};
          int x = x0;
          bool ok = true;
          for (std::size_t i = 0; i < u.size() && ok; ++i) {
            x = aut.target(x, u[i]);
            ok = x != GeodesicAutomaton::kNone && comp.contains(x);
            if (ok && i + 1 < u.size()) cyc.push_back(x);
          }
          if (!ok || x != x0) continue;
          LoopWitness cand{cyc, n, sign, u};
          auto key = [](const LoopWitness& w) { return std::make_tuple(w.label.size(), -w.sign, w.cycle); };
          if (!best || key(cand) < key(*best)) best = std::move(cand);
        }
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

// --- arithmeticity -----------------------------------------------------------------

std::string to_string(Arithmeticity a) {
  switch (a) {
    case Arithmeticity::Lattice: return "lattice";
    case Arithmeticity::NonArithmetic: return "non_arithmetic";
    case Arithmeticity::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

double lattice_residual(const std::vector<double>& values, double a) {
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - a * std::round(v / a)));
  return worst;
}

// Least-squares gap a given the integer multiples round(v / a0).
double refine_gap(const std::vector<double>& values, double a0) {
  double num = 0.0, den = 0.0;
  for (double v : values) {
    double m = std::round(v / a0);
    num += m * v;
    den += m * m;
  }
  return den > 0 ? num / den : a0;
}

}  // namespace

ArithmeticityReport lattice_analysis(std::vector<double> values, double tol, double tol_fit, double gap_min,
                                     std::size_t min_values) {
  ArithmeticityReport rep;
  values.erase(std::remove_if(values.begin(), values.end(), [&](double v) { return !(std::abs(v) > tol); }),
               values.end());
  for (double& v : values) v = std::abs(v);
  std::sort(values.begin(), values.end(), std::greater<>());
  rep.values = values;
  if (values.size() < min_values) return rep;

  std::vector<double> candidates;
  double g = values.front();
  candidates.push_back(g);
  for (std::size_t i = 1; i < values.size(); ++i) {
    double a = std::max(g, values[i]), b = std::min(g, values[i]);
    while (b > tol) {
      double r = std::fmod(a, b);
      if (b - r < tol) r = 0.0;
      a = b;
      b = r;
      if (a >= gap_min) candidates.push_back(a);
    }
    g = a;
  }
  double best_res = std::numeric_limits<double>::infinity(), best_a = 0.0;
  for (double a : candidates) {
    if (a < gap_min) continue;
    double refined = refine_gap(values, a);
    double res = lattice_residual(values, refined);
    if (res < best_res || (res == best_res && refined > best_a)) {
      best_res = res;
      best_a = refined;
    }
  }
  if (g >= gap_min) {
    double refined = refine_gap(values, g);
    double res = lattice_residual(values, refined);
    if (res <= tol_fit) {
      rep.verdict = Arithmeticity::Lattice;
      rep.gap = refined;
      rep.residual = res;
      rep.best_candidate = refined;
      return rep;
    }
  }
  rep.verdict = Arithmeticity::NonArithmetic;
  rep.best_candidate = best_a;
  rep.residual = std::isfinite(best_res) ? best_res : 0.0;
  rep.confidence = rep.residual / tol_fit;
  return rep;
}

BadlyApproximableReport badly_approximable_diagnostic(double l1, double l2, int depth, long long threshold) {
  if (!(l1 > 0) || !(l2 > 0)) throw InputError("continued fraction needs positive lengths");
  BadlyApproximableReport rep;
  rep.threshold = threshold;
  long double x = static_cast<long double>(l1) / static_cast<long double>(l2);
  // Relative precision of the ratio bounds how many quotients are meaningful.
  long double err = 4 * std::numeric_limits<double>::epsilon() * x;
  for (int i = 0; i < depth; ++i) {
    long double a = std::floor(x);
    rep.partial_quotients.push_back(static_cast<long long>(a));
    long double frac = x - a;
    if (frac <= err) {
      rep.rational = true;
      break;
    }
    err = err / (frac * frac);
    x = 1 / frac;
    if (err > 1e-3L) break;
  }
  rep.bounded_up_to_depth = !rep.rational;
  for (std::size_t i = 1; i < rep.partial_quotients.size(); ++i) {
    if (rep.partial_quotients[i] > threshold) rep.bounded_up_to_depth = false;
  }
  return rep;
}

// --- growth quasi-tightness cover -------------------------------------------------

CoverReport gqt_cover_check(const GeodesicAutomaton& aut, const Component& comp, const Ball& ball, int r, int n) {
  if (r < 0 || n < 0) throw InputError("cover check needs r, n >= 0");
  if (ball.radius() < n + 2 * r) throw ResourceError("cover check needs a ball of radius n + 2r");
  const int max_len = n + 2 * r;
  std::vector<char> in_gamma(ball.size(), 0);
  in_gamma[0] = 1;
  struct Frame {
    int vertex;
    Ball::Index element;
    int depth;
  };
  for (int start : comp.vertices) {
    std::vector<Frame> stack = {{start, 0, 0}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      in_gamma[static_cast<std::size_t>(f.element)] = 1;
      if (f.depth == max_len) continue;
      for (int w : aut.successors(f.vertex)) {
        if (!comp.contains(w) || aut.label(w) < 0) continue;
        Ball::Index e = ball.neighbor(f.element, static_cast<Symbol>(aut.label(w)));
        if (e == Ball::kOutside) continue;
        stack.push_back({w, e, f.depth + 1});
      }
    }
  }
  std::vector<char> covered(ball.size(), 0);
  const std::size_t lo = ball.sphere_begin(std::max(0, n - 2 * r));
  const std::size_t hi = ball.sphere_end(max_len);
  const std::size_t br = ball.sphere_end(r);
  for (std::size_t g = lo; g < hi; ++g) {
    if (!in_gamma[g]) continue;
    for (std::size_t f2 = 0; f2 < br; ++f2) {
      Ball::Index gf2 = ball.walk(static_cast<Ball::Index>(g), ball.word(static_cast<Ball::Index>(f2)));
      if (gf2 == Ball::kOutside) continue;
      Word tail = ball.word(gf2);
      for (std::size_t f1 = 0; f1 < br; ++f1) {
        Ball::Index x = ball.walk(static_cast<Ball::Index>(f1), tail);
        if (x != Ball::kOutside && ball.length(x) == n) covered[static_cast<std::size_t>(x)] = 1;
      }
    }
  }
  CoverReport rep;
  rep.r = r;
  rep.n = n;
  rep.sphere = ball.sphere_size(n);
  for (std::size_t x = ball.sphere_begin(n); x < ball.sphere_end(n); ++x) rep.covered += covered[x];
  return rep;
}

}  // namespace hyperorbit
