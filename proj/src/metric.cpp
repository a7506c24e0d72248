#include "hyperorbit/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

namespace hyperorbit {

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Word: return "word";
    case MetricKind::ScaledWord: return "scaled_word";
    case MetricKind::GreenClosedForm: return "green_closed_form";
    case MetricKind::GreenNumeric: return "green_numeric";
    case MetricKind::FuchsianOrbit: return "fuchsian_orbit";
  }
  return "?";
}

// --- walks and Green functions -------------------------------------------

WalkSpec WalkSpec::uniform(const Presentation& presentation) {
  WalkSpec w;
  w.step.assign(static_cast<std::size_t>(presentation.symbol_count()),
                1.0 / presentation.symbol_count());
  return w;
}

bool WalkSpec::is_symmetric(double tol) const {
  for (std::size_t s = 0; s + 1 < step.size(); s += 2) {
    if (std::abs(step[s] - step[s + 1]) > tol) return false;
  }
  return true;
}

bool WalkSpec::is_uniform(double tol) const {
  for (double p : step)
    if (std::abs(p - step.front()) > tol) return false;
  return true;
}

void WalkSpec::validate(const Presentation& presentation) const {
  if (static_cast<int>(step.size()) != presentation.symbol_count()) {
    throw InputError("walk needs one probability per symbol");
  }
  double total = identity;
  if (identity < 0) throw InputError("walk probabilities must be nonnegative");
  for (double p : step) {
    if (!(p > 0)) throw InputError("walk must charge every generator and inverse");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("walk probabilities must sum to 1");
  if (!is_symmetric(1e-12)) throw InputError("walk must be symmetric");
}

namespace {

GreenSolution solve_radial(const Presentation& presentation, const WalkSpec& walk, int radius) {
  const double k2 = presentation.symbol_count();
  const double q = walk.step.front();
  const double diag = 1.0 - walk.identity;
  const auto n = static_cast<std::size_t>(radius + 1);
  // Rows: diag*u_0 - k2*q*u_1 = 1; -q*u_{m-1} + diag*u_m - (k2-1)*q*u_{m+1} = 0.
  std::vector<double> lower(n, -q), main(n, diag), upper(n, -(k2 - 1) * q), rhs(n, 0.0);
  upper[0] = -k2 * q;
  rhs[0] = 1.0;
  // Thomas algorithm.
  std::vector<double> c(n), d(n);
  c[0] = upper[0] / main[0];
  d[0] = rhs[0] / main[0];
  for (std::size_t i = 1; i < n; ++i) {
    double m = main[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / m;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
  }
  GreenSolution out;
  out.values.assign(n, 0.0);
  out.values[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) out.values[i] = d[i] - c[i] * out.values[i + 1];
  out.radial = true;
  out.absorbing_radius = radius;
  double res = std::abs(diag * out.values[0] + upper[0] * (n > 1 ? out.values[1] : 0.0) - 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    double next = i + 1 < n ? out.values[i + 1] : 0.0;
    res = std::max(res, std::abs(lower[i] * out.values[i - 1] + main[i] * out.values[i] + upper[i] * next));
  }
  out.residual = res;
  return out;
}

GreenSolution solve_on_ball(const Ball& ball, const WalkSpec& walk, double tol) {
  const auto n = static_cast<Eigen::Index>(ball.size());
  const int k = ball.presentation().symbol_count();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k + 1));
  for (Eigen::Index x = 0; x < n; ++x) {
    entries.emplace_back(x, x, 1.0 - walk.identity);
    for (int s = 0; s < k; ++s) {
      Ball::Index y = ball.neighbor(static_cast<Ball::Index>(x), static_cast<Symbol>(s));
      if (y == Ball::kOutside) continue;
      entries.emplace_back(x, y, -walk.step[static_cast<std::size_t>(s)]);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(100000);
  cg.compute(a);
  Eigen::VectorXd u = cg.solve(rhs);
  GreenSolution out;
  out.residual = (a * u - rhs).norm();
  if (cg.info() != Eigen::Success || !u.allFinite()) {
    std::ostringstream msg;
    msg << "Green solve did not converge (residual " << out.residual << ")";
    throw NumericError(msg.str());
  }
  out.values.assign(u.data(), u.data() + n);
  out.absorbing_radius = ball.radius();
  return out;
}

}  // namespace

GreenSolution solve_green(const Presentation& presentation, const WalkSpec& walk,
                          int absorbing_radius, double tol, bool force_ball) {
  walk.validate(presentation);
  if (absorbing_radius < 1) throw InputError("absorbing radius must be >= 1");
  if (presentation.is_free() && walk.is_uniform() && !force_ball) {
    return solve_radial(presentation, walk, absorbing_radius);
  }
  Ball ball(presentation, absorbing_radius);
  return solve_on_ball(ball, walk, tol);
}

double green_function(const Presentation& presentation, const WalkSpec& walk, const Element& g,
                      int absorbing_radius) {
  if (static_cast<int>(g.length()) > absorbing_radius) {
    throw InputError("element lies outside the absorbing ball");
  }
  if (presentation.is_free() && walk.is_uniform()) {
    return solve_radial(presentation, walk, absorbing_radius).values[g.length()];
  }
  walk.validate(presentation);
  Ball ball(presentation, absorbing_radius);
  GreenSolution sol = solve_on_ball(ball, walk, 1e-13);
  Ball::Index x = ball.find(g.word);
  if (x == Ball::kOutside) throw InputError("element lies outside the absorbing ball");
  return sol.values[static_cast<std::size_t>(x)];
}

// --- metric models -----------------------------------------------------------

MetricModel MetricModel::word(const Presentation& presentation) {
  MetricModel m;
  m.kind_ = MetricKind::Word;
  m.presentation_ = &presentation;
  return m;
}

MetricModel MetricModel::scaled_word(const Presentation& presentation, double factor) {
  if (!(factor > 0)) throw InputError("scale factor must be positive");
  MetricModel m = word(presentation);
  m.kind_ = MetricKind::ScaledWord;
  m.unit_ = factor;
  return m;
}

MetricModel MetricModel::green_closed_form(const Presentation& presentation) {
  if (presentation.family() != Family::Free) {
    throw InputError("closed-form Green metric is defined for free groups only");
  }
  MetricModel m = word(presentation);
  m.kind_ = MetricKind::GreenClosedForm;
  m.unit_ = std::log(presentation.symbol_count() - 1.0);
  return m;
}

MetricModel MetricModel::green_numeric(const Presentation& presentation, WalkSpec walk,
                                       int absorbing_radius, int safety_margin) {
  MetricModel m;
  m.kind_ = MetricKind::GreenNumeric;
  m.presentation_ = &presentation;
  m.safety_margin_ = safety_margin;
  walk.validate(presentation);
  if (presentation.is_free() && walk.is_uniform()) {
    m.green_ = std::make_shared<GreenSolution>(solve_radial(presentation, walk, absorbing_radius));
  } else {
    auto ball = std::make_shared<Ball>(presentation, absorbing_radius);
    m.green_ = std::make_shared<GreenSolution>(solve_on_ball(*ball, walk, 1e-13));
    m.green_ball_ = std::move(ball);
  }
  return m;
}

MetricModel MetricModel::fuchsian(const Presentation& presentation) {
  if (!presentation.has_representation()) {
    throw InputError("Fuchsian orbit metric needs generator matrices");
  }
  MetricModel m;
  m.kind_ = MetricKind::FuchsianOrbit;
  m.presentation_ = &presentation;
  return m;
}

MetricModel MetricModel::rescaled(double factor) const {
  if (!(factor > 0)) throw InputError("scale factor must be positive");
  MetricModel m = *this;
  m.scale_ *= factor;
  return m;
}

std::string MetricModel::tag() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(kind_);
  if (kind_ == MetricKind::ScaledWord) out << "(" << unit_ << ")";
  if (kind_ == MetricKind::GreenNumeric) out << "(R=" << green_->absorbing_radius << ")";
  if (scale_ != 1.0) out << "*" << scale_;
  return out.str();
}

int MetricModel::safe_length() const {
  if (kind_ != MetricKind::GreenNumeric) return -1;
  return green_->absorbing_radius - safety_margin_;
}

double MetricModel::dist(const Element& g) const {
  switch (kind_) {
    case MetricKind::Word:
    case MetricKind::ScaledWord:
    case MetricKind::GreenClosedForm: {
      std::size_t len = presentation_->is_free() ? free_reduce(g.word).size() : g.length();
      return scale_ * unit_ * static_cast<double>(len);
    }
    case MetricKind::GreenNumeric: {
      double u0 = green_->values[0];
      double u = 0.0;
      if (green_->radial) {
        std::size_t len = free_reduce(g.word).size();
        if (static_cast<int>(len) > safe_length()) throw NumericError("Green metric evaluated beyond safe radius");
        u = green_->values[len];
      } else {
        if (static_cast<int>(g.length()) > safe_length()) {
          throw NumericError("Green metric evaluated beyond safe radius");
        }
        Ball::Index x = green_ball_->find(g.word);
        if (x == Ball::kOutside) throw NumericError("Green metric evaluated outside the ball");
        u = green_->values[static_cast<std::size_t>(x)];
      }
      return -scale_ * std::log(u / u0);
    }
    case MetricKind::FuchsianOrbit:
      return scale_ * fuchsian_displacement(*presentation_, g.word);
  }
  return 0.0;
}

double MetricModel::dist(const Element& x, const Element& y, const Ball* ball) const {
  Word w = concat(inverse_word(x.word), y.word);
  if (kind_ == MetricKind::FuchsianOrbit) return dist(Element{w});
  return dist(reduce(*presentation_, w, ball));
}

double fuchsian_displacement(const Presentation& presentation, const Word& w) {
  Matrix2 m = Matrix2::Identity();
  double log_scale = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    m = m * presentation.symbol_matrix(w[i]);
    if (i % 8 == 7) {
      double c = m.cwiseAbs().maxCoeff();
      m /= c;
      log_scale += std::log(c);
    }
  }
  const double log_x = 2.0 * log_scale + std::log(m.squaredNorm() / 2.0);
  if (log_x < 30.0) return std::acosh(std::max(1.0, std::exp(log_x)));
  return log_x + std::log1p(std::sqrt(1.0 - std::exp(-2.0 * log_x)));
}

double gromov_product(const MetricModel& metric, const Element& x, const Element& y, const Ball* ball) {
  return 0.5 * (metric.dist(x) + metric.dist(y) - metric.dist(x, y, ball));
}

double busemann_trunc(const MetricModel& metric, const BusemannQuery& q, const Ball* ball) {
  const Presentation& p = metric.presentation();
  if (q.depth < 0 || q.depth > static_cast<int>(q.ray.size())) {
    throw InputError("Busemann depth exceeds the ray prefix");
  }
  Word prefix(q.ray.begin(), q.ray.begin() + q.depth);
  Element pn = reduce(p, prefix, ball);
  if (pn.length() != prefix.size()) throw InputError("Busemann ray prefix is not geodesic");
  return metric.dist(q.x, pn, ball) - metric.dist(pn);
}

namespace {

Word power(const Word& w, int m) {
  Word out;
  for (int i = 0; i < m; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

}  // namespace

TranslationLength translation_length(const MetricModel& metric, const ConjClass& c, int power_cap,
                                     const Ball* ball) {
  const Presentation& p = metric.presentation();
  const Word& rep = c.representative.word;
  TranslationLength out;
  if (rep.empty()) return out;
  const bool word_kind = metric.kind() == MetricKind::Word || metric.kind() == MetricKind::ScaledWord ||
                         metric.kind() == MetricKind::GreenClosedForm;
  if (word_kind && p.is_free()) {
    out.value = metric.dist(Element{rep});
    return out;
  }
  if (metric.kind() == MetricKind::FuchsianOrbit) {
    double tr = std::abs(p.word_matrix(rep).trace());
    out.value = tr > 2.0 ? metric.scale() * 2.0 * std::acosh(tr / 2.0) : 0.0;
    return out;
  }
  // Difference quotients (d(g^m) - d(g^{m/2})) / (m/2) over m = 2, 4, ...
  std::vector<double> quotients;
  double prev = metric.dist(reduce(p, rep, ball));
  for (int m = 2; m <= power_cap; m *= 2) {
    Word gm = power(rep, m);
    if (metric.safe_length() >= 0 && static_cast<int>(gm.size()) > metric.safe_length() &&
        p.is_free()) {
      break;
    }
    double d = 0.0;
    try {
      d = metric.dist(reduce(p, gm, ball));
    } catch (const std::exception&) {
      break;
    }
    quotients.push_back((d - prev) / (m / 2));
    prev = d;
  }
  if (quotients.empty()) {
    out.value = prev;
    out.low_confidence = true;
    return out;
  }
  out.value = quotients.back();
  const std::size_t tail = std::max<std::size_t>(2, quotients.size() / 2);
  auto first = quotients.end() - static_cast<std::ptrdiff_t>(std::min(tail, quotients.size()));
  auto [lo, hi] = std::minmax_element(first, quotients.end());
  out.error = *hi - *lo;
  out.low_confidence = quotients.size() < 2;
  return out;
}

bool is_torsion_by_length(const TranslationLength& t) {
  if (t.error == 0.0) return t.value == 0.0;
  return t.value < 10.0 * t.error;
}

StrongHyperbolicityReport check_strong_hyperbolicity(const MetricModel& metric, std::size_t sample_count,
                                                     double R0, double c_candidate, std::uint64_t seed,
                                                     const Ball* ball) {
  const Presentation& p = metric.presentation();
  const int k = p.symbol_count();
  std::mt19937_64 rng(seed);
  auto random_reduced = [&](int len) {
    Word w;
    while (static_cast<int>(w.size()) < len) {
      auto s = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(k));
      if (!w.empty() && s == inverse_symbol(w.back())) continue;
      w.push_back(s);
    }
    return w;
  };
  int long_len = 8;
  int short_len = 2;
  if (metric.safe_length() >= 0) long_len = std::max(2, std::min(long_len, metric.safe_length() - 2 * short_len - 2));
  if (!p.is_free() && ball != nullptr) long_len = std::max(2, std::min(long_len, ball->radius() - 2 * short_len));

  StrongHyperbolicityReport rep;
  rep.fitted_c = std::numeric_limits<double>::infinity();
  auto d = [&](const Word& a, const Word& b) {
    return metric.dist(Element{a}, Element{b}, ball);
  };
  for (std::size_t i = 0; i < sample_count; ++i) {
    Word x = random_reduced(static_cast<int>(rng() % 3));
    Word xp = free_reduce(concat(x, random_reduced(1 + static_cast<int>(rng() % short_len))));
    Word y = free_reduce(concat(x, random_reduced(long_len)));
    Word yp = free_reduce(concat(y, random_reduced(1 + static_cast<int>(rng() % short_len))));
    ++rep.samples;
    double dxy = 0, dxxp = 0, dxpyp = 0, dyyp = 0, dxpy = 0, dxyp = 0;
    try {
      dxy = d(x, y);
      dxxp = d(x, xp);
      dxpyp = d(xp, yp);
      dyyp = d(y, yp);
      dxpy = d(xp, y);
      dxyp = d(x, yp);
    } catch (const std::exception&) {
      continue;
    }
    const double gap = dxy - dxxp + dxpyp - dyyp;
    if (gap < R0) continue;
    ++rep.in_range;
    const double four = std::abs(dxy - dxpy - dxyp + dxpyp);
    const double bound = std::exp(-c_candidate * gap);
    if (four > bound + 1e-12) {
      ++rep.violations;
      rep.max_violation = std::max(rep.max_violation, four - bound);
    }
    if (four > 1e-12) rep.fitted_c = std::min(rep.fitted_c, -std::log(four) / gap);
  }
  rep.inconclusive = rep.in_range < 10;
  return rep;
}

}  // namespace hyperorbit
