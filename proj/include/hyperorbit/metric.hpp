#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperorbit/group.hpp"

namespace hyperorbit {

/// Step distribution of a random walk: probability per symbol plus an
/// optional holding probability at the identity.
struct WalkSpec {
  std::vector<double> step;  // indexed by Symbol
  double identity = 0.0;

  static WalkSpec uniform(const Presentation& presentation);
  bool is_symmetric(double tol = 1e-12) const;
  bool is_uniform(double tol = 1e-12) const;
  // Throws InputError unless the walk is symmetric, sums to one and charges
  // every generator (so the support generates as a semigroup).
  void validate(const Presentation& presentation) const;
};

struct GreenSolution {
  std::vector<double> values;  // by ball index, or by radius when `radial`
  bool radial = false;
  int absorbing_radius = 0;
  double residual = 0.0;
};

// Solves (I - P) u = delta_o on B(absorbing_radius) with u = 0 outside. For
// the uniform walk on a free group the radial quotient is solved exactly;
// otherwise the ball is enumerated and the symmetric system solved by CG.
GreenSolution solve_green(const Presentation& presentation, const WalkSpec& walk,
                          int absorbing_radius, double tol = 1e-13, bool force_ball = false);

double green_function(const Presentation& presentation, const WalkSpec& walk, const Element& g,
                      int absorbing_radius);

enum class MetricKind { Word, ScaledWord, GreenClosedForm, GreenNumeric, FuchsianOrbit };

std::string to_string(MetricKind k);

/// Left-invariant metric d with d(o, g) evaluated on normal forms. Word-type
/// kinds read the length of the normal form; FuchsianOrbit works on any word.
class MetricModel {
 public:
  static MetricModel word(const Presentation& presentation);
  static MetricModel scaled_word(const Presentation& presentation, double factor);
  // Uniform nearest-neighbour walk on a free group.
  static MetricModel green_closed_form(const Presentation& presentation);
  static MetricModel green_numeric(const Presentation& presentation, WalkSpec walk,
                                   int absorbing_radius, int safety_margin = 5);
  // Orbit metric of the base point i under the declared SL(2,R) matrices.
  static MetricModel fuchsian(const Presentation& presentation);

  MetricKind kind() const { return kind_; }
  const Presentation& presentation() const { return *presentation_; }
  // Multiplier applied on top of the kind's natural scale.
  double scale() const { return scale_; }
  MetricModel rescaled(double factor) const;
  std::string tag() const;

  double dist(const Element& g) const;
  double dist(const Word& normal_form) const { return dist(Element{normal_form}); }
  // d(x, y) = d(o, x^-1 y); normal forms via `ball` when it is given.
  double dist(const Element& x, const Element& y, const Ball* ball = nullptr) const;

  // Word length that may be evaluated safely (GreenNumeric), else -1.
  int safe_length() const;

 private:
  MetricModel() = default;

  MetricKind kind_ = MetricKind::Word;
  const Presentation* presentation_ = nullptr;
  double scale_ = 1.0;
  double unit_ = 1.0;  // per-letter value for Word/Scaled/GreenClosedForm
  std::shared_ptr<const GreenSolution> green_;
  std::shared_ptr<const Ball> green_ball_;
  int safety_margin_ = 0;
};

// Hyperbolic displacement arccosh(|M|_F^2 / 2) of the base point i, computed
// with periodic renormalisation so long products do not overflow.
double fuchsian_displacement(const Presentation& presentation, const Word& w);

double gromov_product(const MetricModel& metric, const Element& x, const Element& y,
                      const Ball* ball = nullptr);

struct BusemannQuery {
  Element x;
  Word ray;  // geodesic prefix towards the boundary point
  int depth = 0;
};

// d(x, p_n) - d(o, p_n) for the depth-n point p_n of the ray.
double busemann_trunc(const MetricModel& metric, const BusemannQuery& q, const Ball* ball = nullptr);

struct TranslationLength {
  double value = 0.0;
  double error = 0.0;
  bool low_confidence = false;
};

TranslationLength translation_length(const MetricModel& metric, const ConjClass& c,
                                     int power_cap = 16, const Ball* ball = nullptr);

// Torsion test: extrapolated length below ten error bars (exact zero for the
// closed-form kinds).
bool is_torsion_by_length(const TranslationLength& t);

struct StrongHyperbolicityReport {
  std::size_t samples = 0;
  std::size_t in_range = 0;
  std::size_t violations = 0;  // at c_candidate
  double max_violation = 0.0;  // max of |four-point| - exp(-c R)
  double fitted_c = 0.0;       // largest c passing on every in-range sample
  bool inconclusive = false;
};

// Samples quadruples x, x' = x u, y = x v, y' = y w with short u, w and long
// v (freely reduced random words), then tests the four-point condition.
StrongHyperbolicityReport check_strong_hyperbolicity(const MetricModel& metric, std::size_t sample_count,
                                                     double R0, double c_candidate,
                                                     std::uint64_t seed = 1,
                                                     const Ball* ball = nullptr);

}  // namespace hyperorbit
