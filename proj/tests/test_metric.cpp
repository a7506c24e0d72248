#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hyperorbit/metric.hpp"

using namespace hyperorbit;

namespace {

Element el(const Presentation& p, const char* w) { return reduce(p, std::string_view(w)); }

}  // namespace

TEST_CASE("word and closed-form Green distances") {
  auto f2 = Presentation::free_group(2);
  auto word = MetricModel::word(f2);
  auto green = MetricModel::green_closed_form(f2);
  CHECK(word.dist(el(f2, "ab")) == 2.0);
  CHECK(word.dist(el(f2, "")) == 0.0);
  for (int n = 0; n <= 6; ++n) {
    Word w(static_cast<std::size_t>(n), 0);
    CHECK(green.dist(Element{w}) == doctest::Approx(n * std::log(3.0)).epsilon(1e-15));
  }
  CHECK(MetricModel::scaled_word(f2, 2.5).dist(el(f2, "aB")) == 5.0);
  CHECK_THROWS_AS(MetricModel::green_closed_form(Presentation::surface(2)), InputError);
}

TEST_CASE("Green function on the 4-regular tree") {
  auto f2 = Presentation::free_group(2);
  auto walk = WalkSpec::uniform(f2);
  // First return probability 1/3 gives G(o,o) = 3/2 and G(o,x) = (3/2) 3^-|x|.
  CHECK(std::abs(green_function(f2, walk, el(f2, ""), 30) - 1.5) < 1e-6);
  CHECK(std::abs(green_function(f2, walk, el(f2, "ab"), 30) - 1.5 / 9.0) < 1e-6);
  double prev_delta = 1.0;
  double prev = green_function(f2, walk, el(f2, ""), 5);
  for (int r = 10; r <= 30; r += 5) {
    double u = green_function(f2, walk, el(f2, ""), r);
    CHECK(u >= prev);
    CHECK(u - prev < prev_delta);
    prev_delta = u - prev;
    prev = u;
  }
}

TEST_CASE("radial and full-ball Green solves agree") {
  auto f2 = Presentation::free_group(2);
  auto walk = WalkSpec::uniform(f2);
  auto radial = solve_green(f2, walk, 8);
  auto full = solve_green(f2, walk, 8, 1e-14, true);
  REQUIRE(radial.radial);
  REQUIRE_FALSE(full.radial);
  Ball ball(f2, 8);
  for (std::size_t x = 0; x < ball.size(); ++x) {
    CHECK(std::abs(full.values[x] - radial.values[static_cast<std::size_t>(ball.length(static_cast<Ball::Index>(x)))]) < 1e-10);
  }
}

TEST_CASE("numeric Green metric matches the closed form") {
  auto f2 = Presentation::free_group(2);
  auto numeric = MetricModel::green_numeric(f2, WalkSpec::uniform(f2), 30);
  auto closed = MetricModel::green_closed_form(f2);
  Ball ball(f2, 5);
  for (std::size_t x = 0; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    CHECK(std::abs(numeric.dist(g) - closed.dist(g)) < 1e-5);
  }
  CHECK_THROWS_AS(numeric.dist(Element{Word(28, 0)}), NumericError);
}

TEST_CASE("non-uniform walk: symmetry and triangle inequality") {
  auto f2 = Presentation::free_group(2);
  WalkSpec walk;
  walk.step = {0.3, 0.3, 0.15, 0.15};
  walk.identity = 0.1;
  // Truncation at the absorbing sphere breaks exact symmetry; its size is
  // estimated by the change between radii 10 and 11.
  auto metric = MetricModel::green_numeric(f2, walk, 11, 3);
  auto coarser = MetricModel::green_numeric(f2, walk, 10, 3);
  Ball ball(f2, 4);
  double truncation = 0;
  for (std::size_t x = 0; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    truncation = std::max(truncation, std::abs(metric.dist(g) - coarser.dist(g)));
  }
  CHECK(truncation < 1e-3);
  for (std::size_t x = 1; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    CHECK(metric.dist(g) > 0);
    CHECK(std::abs(metric.dist(g) - metric.dist(inverse(f2, g))) < 4 * truncation);
  }
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    Element g{ball.word(static_cast<Ball::Index>(rng() % ball.sphere_end(2)))};
    Element h{ball.word(static_cast<Ball::Index>(rng() % ball.sphere_end(2)))};
    CHECK(metric.dist(multiply(f2, g, h)) <= metric.dist(g) + metric.dist(h) + 4 * truncation);
  }
  WalkSpec bad = walk;
  bad.step = {0.4, 0.2, 0.15, 0.15};
  CHECK_THROWS_AS(bad.validate(f2), InputError);
}

TEST_CASE("Green metric on a surface group via the ball solve") {
  auto s2 = Presentation::surface(2);
  auto metric = MetricModel::green_numeric(s2, WalkSpec::uniform(s2), 5, 2);
  auto coarser = MetricModel::green_numeric(s2, WalkSpec::uniform(s2), 4, 1);
  Ball ball(s2, 3);
  double truncation = 0;
  for (std::size_t x = 1; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    truncation = std::max(truncation, std::abs(metric.dist(g) - coarser.dist(g)));
  }
  CHECK(truncation < 5e-2);
  for (std::size_t x = 1; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    CHECK(metric.dist(g) > 0);
    CHECK(std::abs(metric.dist(g) - metric.dist(Element{ball.word(ball.inverse(static_cast<Ball::Index>(x)))})) <
          truncation);
  }
}

TEST_CASE("Gromov products on the tree") {
  auto f3 = Presentation::free_group(3);
  auto word = MetricModel::word(f3);
  CHECK(gromov_product(word, el(f3, "ab"), el(f3, "ac")) == 1.0);
  CHECK(gromov_product(word, el(f3, "ab"), el(f3, "ab")) == 2.0);
  CHECK(gromov_product(word, el(f3, "ab"), el(f3, "Ac")) == 0.0);
}

TEST_CASE("truncated Busemann values") {
  auto f2 = Presentation::free_group(2);
  Word ray = f2.alphabet().parse("abaabbab");
  auto word = MetricModel::word(f2);
  auto green = MetricModel::green_closed_form(f2);
  for (int n = 2; n <= 8; ++n) {
    CHECK(busemann_trunc(word, {el(f2, "a"), ray, n}) == -1.0);
    CHECK(busemann_trunc(green, {el(f2, "a"), ray, n}) == doctest::Approx(-std::log(3.0)));
    CHECK(busemann_trunc(word, {el(f2, ""), ray, n}) == 0.0);
  }
  CHECK_THROWS_AS(busemann_trunc(word, {el(f2, "a"), f2.alphabet().parse("abBa"), 4}), InputError);

  // Depth stability on the Fuchsian orbit metric.
  auto sch = fixtures::schottky_3_5();
  auto fu = MetricModel::fuchsian(sch);
  double prev = busemann_trunc(fu, {el(sch, "b"), ray, 4});
  double prev_step = 1.0;
  for (int n = 5; n <= 8; ++n) {
    double v = busemann_trunc(fu, {el(sch, "b"), ray, n});
    CHECK(std::abs(v - prev) < prev_step + 1e-12);
    prev_step = std::abs(v - prev);
    prev = v;
  }
  CHECK(prev_step < 1e-2);
}

TEST_CASE("translation lengths") {
  auto f2 = Presentation::free_group(2);
  auto word = MetricModel::word(f2);
  CHECK(translation_length(word, canonical_class(f2, el(f2, ""), 0)).value == 0.0);
  CHECK(translation_length(word, canonical_class(f2, el(f2, "Babb"), 0)).value == 2.0);

  auto sch = fixtures::schottky_3_5();
  auto fu = MetricModel::fuchsian(sch);
  auto la = translation_length(fu, canonical_class(sch, el(sch, "a"), 0));
  CHECK(la.value == doctest::Approx(2 * std::acosh(1.5)).epsilon(1e-14));
  CHECK(la.value == doctest::Approx(1.9248473002384139).epsilon(1e-12));
  CHECK(fu.dist(Element{Word(64, 0)}) / 64 == doctest::Approx(la.value).epsilon(1e-10));

  auto green = MetricModel::green_numeric(f2, WalkSpec::uniform(f2), 30);
  auto lg = translation_length(green, canonical_class(f2, el(f2, "ab"), 0), 8);
  CHECK(std::abs(lg.value - 2 * std::log(3.0)) < 1e-6);
  CHECK_FALSE(is_torsion_by_length(lg));

  // Translation length never exceeds the representative's distance.
  Ball ball(f2, 4);
  for (std::size_t x = 1; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    auto c = canonical_class(sch, g, 0);
    CHECK(translation_length(fu, c).value <= fu.dist(c.representative) + 1e-9);
  }
}

TEST_CASE("Fuchsian distances") {
  auto sch = fixtures::schottky_3_5();
  auto fu = MetricModel::fuchsian(sch);
  CHECK(fu.dist(Element{}) == 0.0);
  Ball ball(sch, 5);
  for (std::size_t x = 1; x < ball.size(); ++x) {
    Element g{ball.word(static_cast<Ball::Index>(x))};
    // Upper half-plane distance formula as an independent oracle.
    Matrix2 m = sch.word_matrix(g.word);
    std::complex<double> z0(0, 1);
    std::complex<double> z = (m(0, 0) * z0 + m(0, 1)) / (m(1, 0) * z0 + m(1, 1));
    double oracle = std::acosh(1 + std::norm(z - z0) / (2 * z.imag() * z0.imag()));
    CHECK(fu.dist(g) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(fu.dist(g) == doctest::Approx(fu.dist(inverse(sch, g))).epsilon(1e-9));
  }
  // Long products do not overflow.
  Word w;
  for (int i = 0; i < 400; ++i) w.push_back(static_cast<Symbol>(2 * (i % 2)));
  double d = fu.dist(Element{w});
  CHECK(std::isfinite(d));
  CHECK(d > 400);
}

TEST_CASE("sampled strong hyperbolicity") {
  auto f2 = Presentation::free_group(2);
  auto tree = MetricModel::scaled_word(f2, 1.7);
  auto rep = check_strong_hyperbolicity(tree, 400, 3.0, 5.0);
  CHECK_FALSE(rep.inconclusive);
  CHECK(rep.violations == 0);

  auto sch = fixtures::schottky_3_5();
  auto fu = MetricModel::fuchsian(sch);
  auto frep = check_strong_hyperbolicity(fu, 400, 4.0, 0.5);
  CHECK_FALSE(frep.inconclusive);
  CHECK(frep.fitted_c > 0);
  CHECK(check_strong_hyperbolicity(fu, 400, 4.0, frep.fitted_c).violations == 0);

  auto s2 = Presentation::surface(2);
  Ball ball(s2, 5);
  auto srep = check_strong_hyperbolicity(MetricModel::word(s2), 50, 2.0, 0.5, 1, &ball);
  CHECK(srep.samples == 50);
}
