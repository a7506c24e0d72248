#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hyperorbit/automaton.hpp"
#include "hyperorbit/metric.hpp"
#include "hyperorbit/shift.hpp"

namespace hyperorbit {

// Calls fn(word) for the normal form of every element of B_S(n_max), in
// shortlex order for free families and ball order otherwise.
void for_each_ball_element(const Presentation& presentation, int n_max, const Ball* ball,
                           const std::function<void(const Word&)>& fn);

struct CountReport {
  std::string metric_tag;
  int n_max = 0;
  std::vector<double> distances;   // sorted
  std::vector<double> sphere_min;  // min d over S_n
  double covered = 0.0;            // T_cov = min d over the outer sphere

  // #{x : d(o, x) < T}; throws ResourceError beyond the covered radius.
  std::size_t count_below(double T) const;
};

CountReport count_ball(const MetricModel& metric, int n_max, const Ball* ball = nullptr);

/// Sampled counting function N(T_i).
struct CountSeries {
  std::vector<double> T;
  std::vector<double> N;
};

// N(T) on `points` equally spaced values in (0, T_cov).
CountSeries count_series(const CountReport& report, std::size_t points = 300);

struct AsymptoticFit {
  double C = 0.0;
  double delta = 0.0;
  bool delta_fixed = false;
  double C_lsq = 0.0;            // exp of the mean of log(N e^{-delta T})
  double variation = 0.0;        // (max - min) / C of N e^{-delta T} on the last third
  bool estimator_mismatch = false;  // C and C_lsq differ by more than 2%
  bool oscillation = false;      // variation above the threshold
  std::size_t window_points = 0;
  std::vector<double> residuals; // N e^{-delta T} / C - 1 over the whole series
};

// delta_hint <= 0 means fit delta by least squares on log N over the last
// third of the range.
AsymptoticFit fit_asymptotic(const CountSeries& series, double delta_hint = 0.0, double oscillation_threshold = 0.05);

struct ErrorTermFit {
  double kappa = 0.0;
  double kappa_error = 0.0;  // two standard errors
  std::size_t points = 0;
  bool unresolved = false;
};

// Log-log regression of |N e^{-delta T}/C - 1| against T over the points
// where the residual stands above ten times its tail level. Lattice length
// spectra are refused.
ErrorTermFit error_term_fit(const CountSeries& series, double C, double delta, Arithmeticity verdict);

struct PoincareComparison {
  std::complex<double> s;
  std::vector<std::complex<double>> direct;      // per sphere n = 1..n_max, restricted to comp_set
  std::vector<std::complex<double>> operator_form;
  std::vector<std::complex<double>> unrestricted;  // per sphere, every element
  double max_relative_discrepancy = 0.0;
  std::complex<double> partial_sum(int n) const;  // restricted, spheres 1..n
};

// Direct sums of e^{-s d(o,x)} over spheres, restricted to elements whose
// accepted path stays in comp_set (empty = no restriction), against the
// preimage expansion of L_s^{n+1} chi(0-dot) over the augmented automaton.
PoincareComparison poincare_compare(const MetricModel& metric, const GeodesicAutomaton& augmented,
                                    std::complex<double> s, int n_max, const std::vector<int>& comp_set,
                                    const Ball* ball = nullptr);

struct CorrelationReport {
  double eps = 0.0;
  int n_max = 0;
  double covered = 0.0;
  std::vector<double> T;       // fit points (distinct d values)
  std::vector<double> M;       // #{d <= T, |d* - d| <= eps}
  std::vector<double> N;       // #{d <= T}
  double alpha_plain = 0.0;    // log M = a + alpha T
  double alpha_sqrt = 0.0;     // log M = a + alpha T - log(T)/2
  double residual_plain = 0.0; // RMS residuals of the two fits
  double residual_sqrt = 0.0;
  std::string status = "ok";   // or "underpowered"
};

CorrelationReport correlate(const MetricModel& d, const MetricModel& dstar, double eps, int n_max,
                            const Ball* ball = nullptr, double fit_from = 0.5);

struct MeanRatioReport {
  double lambda = 0.0;                 // median ratio on the outer sphere
  std::vector<double> median;          // per sphere
  std::vector<double> tail_fraction;   // per sphere, outside lambda +- eps
  double decay_rate = 0.0;             // slope of log tail fraction per sphere
  bool decaying = false;
};

// Ratios (a d + b d*)(o, x) / |x|_S on spheres 1..n_max.
MeanRatioReport mean_ratio_diagnostic(const MetricModel& d, const MetricModel& dstar, double a, double b,
                                      int n_max, double eps, const Ball* ball = nullptr);

}  // namespace hyperorbit
