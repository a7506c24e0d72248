#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hyperorbit/automaton.hpp"
#include "hyperorbit/metric.hpp"
#include "hyperorbit/shift.hpp"

namespace hyperorbit {

using SparseReal = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct PerronData {
  double eigenvalue = 0.0;
  Eigen::VectorXd right;  // A h = lambda h, sum h = 1
  Eigen::VectorXd left;   // nu A = lambda nu, <nu, h> = 1
  int iterations = 0;
  double residual = 0.0;
};

// Perron eigendata of a nonnegative irreducible matrix by shifted power
// iteration (the shift removes periodicity). Throws NumericError with the
// last iterates when the tolerance is not met.
PerronData perron(const SparseReal& a, double tol = 1e-13, int max_iter = 200000, bool need_left = true);

/// Depth-k cylinder approximation of the Busemann potential of a metric on
/// the paths of an automaton:
///   psi(x_0..x_k) = d(o, w_1..w_k) - d(o, w_2..w_k),
/// where w_i is the incoming label of x_i (identity labels are dropped).
class CylinderPotential {
 public:
  CylinderPotential(const MetricModel& metric, const GeodesicAutomaton& aut, int depth);

  int depth() const { return depth_; }
  const MetricModel& metric() const { return metric_; }
  const GeodesicAutomaton& automaton() const { return *aut_; }
  std::string tag() const;

  // Window of depth + 1 vertices.
  double value(const int* window) const;
  double value(const std::vector<int>& window) const;
  // Sum of psi over the windows of a closed walk (vertex cycle without the
  // repeated endpoint).
  double birkhoff_cycle(const std::vector<int>& cycle) const;
  // Sum of psi over the first n windows of a finite path (needs n + depth
  // vertices).
  double birkhoff_path(const std::vector<int>& path, int n) const;

  // max |psi^(k+1) - psi^(k)| over (k+2)-windows of the component, sampled
  // deterministically up to `sample_cap` windows.
  double truncation_estimate(const Component& comp, std::size_t sample_cap = 20000) const;

  bool is_constant_on(const Component& comp, double tol, double* constant = nullptr) const;

 private:
  double label_distance(const Word& w) const;

  MetricModel metric_;  // copied; the automaton must outlive the potential
  const GeodesicAutomaton* aut_;
  int depth_;
  mutable std::map<Word, double> cache_;
};

/// States are the k-vertex paths inside a component; a transition appends
/// one vertex and carries the potential of its (k+1)-window.
struct CylinderSpace {
  int depth = 1;
  std::vector<int> vertices;             // component vertices
  std::vector<std::vector<int>> states;  // sorted lexicographically
  struct Transition {
    int from;
    int to;
  };
  std::vector<Transition> transitions;   // sorted by (from, to)

  std::vector<int> window(std::size_t transition) const;
};

CylinderSpace cylinder_space(const GeodesicAutomaton& aut, const Component& comp, int depth,
                             std::size_t state_cap = 2'000'000);

// Potential values on every transition of the space.
std::vector<double> tabulate(const CylinderSpace& space, const CylinderPotential& potential);

// Matrix with entries exp(-(sum_i c_i psi_i)) on the transition pattern.
template <class Scalar>
Eigen::SparseMatrix<Scalar, Eigen::RowMajor> transfer_matrix(const CylinderSpace& space,
                                                             const std::vector<const std::vector<double>*>& psi,
                                                             const std::vector<Scalar>& coeff);

// Log spectral radius of the real transfer matrix for -(sum_i c_i psi_i).
double pressure(const CylinderSpace& space, const std::vector<const std::vector<double>*>& psi,
                const std::vector<double>& coeff, double tol = 1e-13);
inline double pressure(const CylinderSpace& space, const std::vector<double>& psi, double s, double tol = 1e-13) {
  return pressure(space, {&psi}, {s}, tol);
}

// Log Perron root of the 0-1 transition matrix.
double word_pressure(const CylinderSpace& space);

// (1/n) log trace(A^n): the periodic-orbit estimate of the pressure.
double periodic_orbit_pressure(const CylinderSpace& space, const std::vector<double>& psi, double s, int n);

struct RootReport {
  double root = 0.0;
  double residual = 0.0;
  int evaluations = 0;
};

// Root of a decreasing function: bracket expansion, bisection to width
// 1e-8, then secant polish.
RootReport find_decreasing_root(const std::function<double(double)>& f, double lo, double hi,
                                double tol = 1e-13);

struct GrowthReport {
  double value = 0.0;
  double residual = 0.0;
  double min_cycle_average = 0.0;  // positivity check on short cycles
};

// v with pressure(-v psi) = 0.
GrowthReport growth_rate(const CylinderSpace& space, const std::vector<double>& psi);

struct GibbsReport {
  PerronData perron;
  double pressure = 0.0;
  int depth_tested = 0;
  std::size_t cylinders = 0;
  double ratio_min = 0.0;  // over vertex cylinders and all their extensions
  double ratio_max = 0.0;
  double state_ratio_min = 0.0;  // nu(x_0) h(x_n) over state cylinders
  double state_ratio_max = 0.0;
  double max_mass_defect = 0.0;  // |sum of cylinder masses - 1| over depths
  double spread() const { return ratio_max / ratio_min; }
};

// Perron data at real s, the induced Markov measure, and the ratios
// mu[C] / exp(-m P + S_m(-s psi)(x)) over vertex cylinders C of m = n + depth
// vertices (n <= depth_test transitions) and every x in C. Enumeration is
// capped by cylinder_cap.
GibbsReport gibbs_data(const CylinderSpace& space, const std::vector<double>& psi, double s, int depth_test,
                       std::size_t cylinder_cap = 4'000'000);

// theta_{d/S}(t) = P(-t psi_d).
double manhattan_word(const CylinderSpace& space, const std::vector<double>& psi_d, double t);
// theta_{d*/d}(t): the s with P(-s psi_d - t psi_dstar) = 0.
double manhattan_pair(const CylinderSpace& space, const std::vector<double>& psi_d,
                      const std::vector<double>& psi_dstar, double t);

struct CorrelationExponent {
  double xi = 0.0;
  double alpha = 0.0;
  double theta_at_xi = 0.0;
  bool degenerate = false;  // affine Manhattan curve
  double convexity_margin = 0.0;  // (theta(0)+theta(1))/2 - theta(1/2)
};

// Inputs must be normalised to growth rate 1.
CorrelationExponent correlation_exponent(const CylinderSpace& space, const std::vector<double>& psi_d,
                                         const std::vector<double>& psi_dstar);

// Five-point central difference of f at x with step h.
double derivative5(const std::function<double(double)>& f, double x, double h = 1e-4);

struct SpectralPoint {
  double t = 0.0;
  double rho = 0.0;  // spectral radius of L_{v+it}
  bool failed = false;
};

// Spectral radius by normalised repeated squaring of the dense complex
// transfer matrix at s = v + i t.
double spectral_radius_squaring(Eigen::MatrixXcd a, int squarings = 40, double tol = 1e-12);
std::vector<SpectralPoint> spectral_scan(const CylinderSpace& space, const std::vector<double>& psi, double v,
                                         const std::vector<double>& t_grid, std::size_t dense_cap = 4000);

// Birkhoff sums of the potential over the component's periodic orbits of
// length <= l_max, passed to lattice_analysis.
ArithmeticityReport arithmeticity(const CylinderPotential& potential, const Component& comp, int l_max,
                                  double tol = 1e-8, double tol_fit = 1e-6);

enum class MixingVerdict { WeakMixing, NotWeakMixing, Inconclusive };
std::string to_string(MixingVerdict v);

struct MixingReport {
  MixingVerdict verdict = MixingVerdict::Inconclusive;
  int roof_steps = 1;
  ArithmeticityReport roof;
};

// Arithmeticity of the roof S_N psi: orbit sums over periodic orbits whose
// length is a multiple of N (N = roof_steps, typically the period).
MixingReport mixing_check(const CylinderPotential& potential, const Component& comp, int roof_steps, int l_max);

struct MaximalCrossCheck {
  std::vector<int> word_maximal;
  std::vector<int> potential_maximal;
  std::vector<double> growth;     // per component id, word growth
  std::vector<double> pressures;  // per component id, P_C(-v_d psi_d)
  double v = 0.0;                 // v_d, the largest component growth rate
  bool sets_equal = false;
  bool disjoint = false;          // no path between distinct maximal components
  bool ok() const { return sets_equal && disjoint; }
};

// Word-maximal components against the -v_d psi_d maximal ones. The
// component of the 0-vertex carries psi = 0 and is left out of both sets.
MaximalCrossCheck cross_check_maximal(const GeodesicAutomaton& aut, const std::vector<Component>& comps,
                                      const CylinderPotential& potential, double tol = 2e-6);

}  // namespace hyperorbit
