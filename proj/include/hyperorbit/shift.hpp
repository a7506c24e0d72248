#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperorbit/automaton.hpp"

namespace hyperorbit {

using Digraph = std::vector<std::vector<int>>;  // adjacency lists

// Successor lists of an automaton, identity edges included when augmented.
Digraph to_digraph(const GeodesicAutomaton& aut);

struct Component {
  int id = 0;
  std::vector<int> vertices;  // sorted
  bool trivial = true;        // single vertex without a self-loop
  int period = 0;             // 0 for trivial components
  std::vector<int> cyclic_part;  // per entry of `vertices`, in 0..period-1

  bool contains(int v) const;
};

// Tarjan's algorithm; components ordered by smallest vertex. Periods and
// cyclic parts are filled in for nontrivial components.
std::vector<Component> scc_decompose(const Digraph& g);
inline std::vector<Component> scc_decompose(const GeodesicAutomaton& aut) { return scc_decompose(to_digraph(aut)); }

// Condensation graph of the decomposition (edges between distinct
// components, deduplicated) and its acyclicity.
Digraph condensation(const Digraph& g, const std::vector<Component>& comps);
bool is_acyclic(const Digraph& g);
// Whether some path in g leads from a vertex of `from` to a vertex of `to`.
bool reachable(const Digraph& g, const Component& from, const Component& to);

struct PeriodInfo {
  int period = 0;
  std::vector<std::vector<int>> parts;  // V_1..V_p
};

// gcd of level differences along edges of a BFS from the smallest vertex.
PeriodInfo period(const Digraph& g, const Component& comp);

// Lengths of closed walks of length <= l_max through the component's
// smallest vertex (for property checks).
std::vector<int> cycle_lengths(const Digraph& g, const Component& comp, int l_max);

// Log Perron root of the component's 0-1 matrix; 0 for a lone self-loop.
double component_growth(const Digraph& g, const Component& comp);

struct MaximalSet {
  std::vector<int> ids;
  std::vector<double> values;  // per component id (-inf for trivial)
  double max_value = 0.0;
};

// Components whose value is within `tol` of the maximum.
MaximalSet word_maximal_components(const GeodesicAutomaton& aut, const std::vector<Component>& comps,
                                   double tol = 1e-9);

// Closed walks of length <= l_max inside a component, each listed once as
// its lexicographically least rotation; order is by length then sequence.
std::vector<std::vector<int>> periodic_orbits(const GeodesicAutomaton& aut, const Component& comp, int l_max,
                                              std::size_t cap = 2'000'000);

// Label word read around a cycle: the incoming labels of x_1..x_{l-1}, x_0.
Word cycle_word(const GeodesicAutomaton& aut, const std::vector<int>& cycle);

struct LoopWitness {
  std::vector<int> cycle;
  int power = 1;  // N
  int sign = 1;   // +1 for g^N, -1 for g^-N
  Word label;
};

// Smallest (N, l, sign, cycle) with a closed walk of length l <= l_max in
// the component whose label is conjugate to g^(sign N), N <= N_max.
std::optional<LoopWitness> loops_realizing_class(const GeodesicAutomaton& aut, const Presentation& presentation,
                                                 const Component& comp, const ConjClass& c, int n_max,
                                                 int l_max);

enum class Arithmeticity { Lattice, NonArithmetic, Inconclusive };
std::string to_string(Arithmeticity a);

struct ArithmeticityReport {
  Arithmeticity verdict = Arithmeticity::Inconclusive;
  double gap = 0.0;            // lattice gap a
  double residual = 0.0;       // max_i dist(v_i, aZ) for the best hypothesis
  double best_candidate = 0.0; // gap of the best hypothesis with a >= gap_min
  double confidence = 0.0;     // residual / tol for non-arithmetic verdicts
  std::vector<double> values;
};

// Approximate common lattice of positive values: Euclid on reals with
// tolerance tol. Lattice verdict when the gap is at least gap_min and every
// value is within tol_fit of aZ; otherwise non-arithmetic, reporting the
// smallest residual among the Euclid candidates with a >= gap_min.
ArithmeticityReport lattice_analysis(std::vector<double> values, double tol = 1e-8, double tol_fit = 1e-6,
                                     double gap_min = 1e-2, std::size_t min_values = 3);

struct BadlyApproximableReport {
  std::vector<long long> partial_quotients;
  bool rational = false;          // expansion terminated at working precision
  bool bounded_up_to_depth = false;
  long long threshold = 0;
};

BadlyApproximableReport badly_approximable_diagnostic(double l1, double l2, int depth, long long threshold = 50);

struct CoverReport {
  int r = 0;
  int n = 0;
  std::size_t sphere = 0;
  std::size_t covered = 0;
  double covered_fraction() const { return sphere == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(sphere); }
};

// Fraction of S_n of the form f1 g f2 with f1, f2 in B(r) and g spelled by a
// path inside the component. Needs a ball of radius >= n + 2r.
CoverReport gqt_cover_check(const GeodesicAutomaton& aut, const Component& comp, const Ball& ball, int r, int n);

}  // namespace hyperorbit
