#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "hyperorbit/group.hpp"

using namespace hyperorbit;

namespace {

// Coefficients of the growth series of the genus-2 surface group in the
// standard generators: (1+2x+2x^2+2x^3+x^4) / (1-6x-6x^2-6x^3+x^4).
std::vector<long long> surface2_growth(int n) {
  std::vector<long long> num = {1, 2, 2, 2, 1};
  std::vector<long long> a(static_cast<std::size_t>(n + 1), 0);
  for (int i = 0; i <= n; ++i) {
    long long v = i < 5 ? num[static_cast<std::size_t>(i)] : 0;
    for (int j = 1; j <= 3; ++j)
      if (i - j >= 0) v += 6 * a[static_cast<std::size_t>(i - j)];
    if (i - 4 >= 0) v -= a[static_cast<std::size_t>(i - 4)];
    a[static_cast<std::size_t>(i)] = v;
  }
  return a;
}

// Free reduction on strings, written independently of the library.
std::string string_free_reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string string_cyclic_reduce(std::string w) {
  w = string_free_reduce(w);
  while (w.size() >= 2 && w.front() != w.back() && std::tolower(w.front()) == std::tolower(w.back())) {
    w = w.substr(1, w.size() - 2);
  }
  return w;
}

std::set<std::string> all_rotations(const std::string& w) {
  std::set<std::string> out;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, w.size()); ++k) out.insert(w.substr(k) + w.substr(0, k));
  return out;
}

Word random_word(std::mt19937& rng, int symbols, int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> sym_dist(0, symbols - 1);
  Word w(static_cast<std::size_t>(len_dist(rng)));
  for (auto& s : w) s = static_cast<Symbol>(sym_dist(rng));
  return w;
}

}  // namespace

TEST_CASE("alphabet parses every inverse notation") {
  Alphabet alpha({'a', 'b'});
  CHECK(alpha.parse("aA b") == Word{0, 1, 2});
  CHECK(alpha.parse("a a^-1 b") == Word{0, 1, 2});
  CHECK(alpha.parse("a a⁻¹ b") == Word{0, 1, 2});
  CHECK(alpha.format(Word{3, 0}) == "Ba");
  CHECK_THROWS_AS(alpha.parse("ac"), InputError);
}

TEST_CASE("free reduction examples") {
  auto f2 = Presentation::free_group(2);
  CHECK(reduce(f2, std::string_view("a a^-1 b")).word == f2.alphabet().parse("b"));
  CHECK(reduce(f2, std::string_view("")).is_identity());
  auto x = reduce(f2, std::string_view("a"));
  CHECK(multiply(f2, x, inverse(f2, x)).is_identity());
  auto ab = reduce(f2, std::string_view("ab"));
  auto ba = reduce(f2, std::string_view("Ba"));
  CHECK(f2.alphabet().format(multiply(f2, ab, ba).word) == "aa");
  CHECK_THROWS_AS(reduce(f2, Word{0, 7}), InputError);
}

TEST_CASE("non-elementary and small-cancellation checks reject bad input") {
  CHECK_THROWS_AS(Presentation::free_group(1), InputError);
  CHECK_THROWS_AS(Presentation::surface(1), InputError);
  CHECK_THROWS_AS(Presentation::small_cancellation({'a', 'b'}, {"abAB"}), InputError);
  CHECK_THROWS_AS(Presentation::small_cancellation({'a', 'b'}, {"abab"}), InputError);
  auto s2 = Presentation::surface(2);
  CHECK(s2.max_piece_length() == 1);
  CHECK(s2.relators().front().size() == 8);
}

TEST_CASE("surface relator reduces to the identity") {
  for (int g : {2, 3}) {
    auto s = Presentation::surface(g);
    const Word& r = s.relators().front();
    CHECK(s.is_trivial(r));
    CHECK(s.is_trivial(inverse_word(r)));
    Word rot(r.begin() + 3, r.end());
    rot.insert(rot.end(), r.begin(), r.begin() + 3);
    CHECK(s.is_trivial(rot));
    CHECK_FALSE(s.is_trivial(Word(r.begin(), r.end() - 1)));
  }
}

TEST_CASE("Free(k) spheres follow the tree formula") {
  for (int k : {2, 3}) {
    auto f = Presentation::free_group(k);
    Ball ball(f, k == 2 ? 10 : 6);
    for (int n = 1; n <= ball.radius(); ++n) {
      CHECK(ball.sphere_size(n) == static_cast<std::size_t>(2 * k * std::pow(2 * k - 1, n - 1)));
    }
  }
  auto f2 = Presentation::free_group(2);
  CHECK(enumerate_sphere(f2, 1).size() == 4);
  CHECK(enumerate_sphere(f2, 10).size() == 78732);
  CHECK_THROWS_AS(enumerate_sphere(f2, 20, 1000), ResourceError);
}

TEST_CASE("Free(2) spheres match a brute-force word oracle") {
  std::map<std::size_t, std::set<std::string>> by_length;
  const std::string letters = "aAbB";
  std::vector<std::string> frontier = {""};
  for (int len = 0; len <= 6; ++len) {
    std::vector<std::string> next;
    for (const auto& w : frontier) {
      std::string r = string_free_reduce(w);
      by_length[r.size()].insert(r);
      if (len < 6)
        for (char c : letters) next.push_back(w + c);
    }
    frontier = std::move(next);
  }
  auto f2 = Presentation::free_group(2);
  for (int n = 0; n <= 6; ++n) {
    auto sphere = enumerate_sphere(f2, n);
    std::set<std::string> got;
    for (const auto& e : sphere) got.insert(f2.alphabet().format(e.word));
    CHECK(got == by_length[static_cast<std::size_t>(n)]);
  }
}

TEST_CASE("genus-2 spheres match the growth series") {
  auto s2 = Presentation::surface(2);
  Ball ball(s2, 6);
  auto expected = surface2_growth(6);
  for (int n = 0; n <= 6; ++n) CHECK(ball.sphere_size(n) == static_cast<std::size_t>(expected[n]));
  CHECK(enumerate_sphere(s2, 1).size() == 8);
}

TEST_CASE("genus-2 small balls match a pure Dehn BFS") {
  auto s2 = Presentation::surface(2);
  const int radius = 3;
  // Oracle: pairwise Dehn comparison with no hashing.
  std::vector<Word> elements = {Word{}};
  std::vector<int> sizes = {1};
  std::size_t begin = 0;
  for (int n = 1; n <= radius; ++n) {
    std::size_t end = elements.size();
    int count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      for (Symbol s = 0; s < 8; ++s) {
        Word c = elements[i];
        c.push_back(s);
        bool seen = false;
        for (const auto& e : elements) {
          if (s2.equal(e, c)) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          elements.push_back(c);
          ++count;
        }
      }
    }
    sizes.push_back(count);
    begin = end;
  }
  Ball ball(s2, radius);
  for (int n = 0; n <= radius; ++n) CHECK(ball.sphere_size(n) == static_cast<std::size_t>(sizes[n]));
  // The stored words are the shortlex-least representatives.
  for (std::size_t x = 0; x < ball.size(); ++x) {
    Word w = ball.word(static_cast<Ball::Index>(x));
    CHECK(static_cast<int>(w.size()) == ball.length(static_cast<Ball::Index>(x)));
    CHECK(ball.find(w) == static_cast<Ball::Index>(x));
  }
}

TEST_CASE("genus-2 products and inverses") {
  auto s2 = Presentation::surface(2);
  Ball ball(s2, 6);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Word raw = random_word(rng, 8, 8);
    Element g = reduce(s2, raw);
    CHECK(static_cast<int>(g.length()) <= 8);
    CHECK(reduce(s2, g.word) == g);
    CHECK(multiply(s2, g, inverse(s2, g)).is_identity());
    CHECK(s2.equal(g.word, raw));
    // Ball lookups agree with the bounded search wherever the ball reaches.
    if (g.length() <= 6) CHECK(reduce(s2, raw, &ball) == g);
  }
  CHECK(reduce(s2, s2.relators().front()).is_identity());
}

TEST_CASE("ball multiplication table is consistent") {
  auto s2 = Presentation::surface(2);
  Ball ball(s2, 4);
  for (std::size_t x = 0; x < ball.sphere_end(3); ++x) {
    for (Symbol s = 0; s < 8; ++s) {
      auto y = ball.neighbor(static_cast<Ball::Index>(x), s);
      REQUIRE(y != Ball::kOutside);
      CHECK(ball.neighbor(y, inverse_symbol(s)) == static_cast<Ball::Index>(x));
      CHECK(std::abs(ball.length(y) - ball.length(static_cast<Ball::Index>(x))) <= 1);
    }
  }
}

TEST_CASE("spheres are independent of the generator order") {
  auto s2 = Presentation::surface(2);
  auto permuted = Presentation::surface(2, {'c', 'a', 'd', 'b'});
  Ball a(s2, 4), b(permuted, 4);
  for (int n = 0; n <= 4; ++n) {
    REQUIRE(a.sphere_size(n) == b.sphere_size(n));
    // Every element of b's sphere, read in a's alphabet, lies on a's sphere.
    for (std::size_t x = b.sphere_begin(n); x < b.sphere_end(n); ++x) {
      std::string text = permuted.alphabet().format(b.word(static_cast<Ball::Index>(x)));
      auto y = a.find(s2.alphabet().parse(text));
      REQUIRE(y != Ball::kOutside);
      CHECK(a.length(y) == n);
    }
  }
}

TEST_CASE("free conjugacy classes") {
  auto f2 = Presentation::free_group(2);
  auto cls = [&](const char* w) { return canonical_class(f2, reduce(f2, std::string_view(w)), 0); };
  CHECK(cls("bAB").representative.word == Word{1});
  CHECK(cls("bab^-1").representative == cls("a").representative);
  CHECK(cls("ab") == cls("ba"));
  CHECK_FALSE(cls("ab") == cls("Ab"));
  CHECK(cls("").is_torsion);
  CHECK_FALSE(cls("ab").is_torsion);

  // Idempotence and conjugation invariance over B(2).
  std::vector<Word> hs;
  for_each_free_word(4, 2, [&](const Word& h) { hs.push_back(h); });
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Element g = reduce(f2, random_word(rng, 4, 7));
    ConjClass c = canonical_class(f2, g, 0);
    CHECK(canonical_class(f2, c.representative, 0) == c);
    for (const auto& h : hs) {
      Element conj = reduce(f2, concat(concat(h, g.word), inverse_word(h)));
      CHECK(canonical_class(f2, conj, 0) == c);
    }
  }
}

TEST_CASE("free class enumeration matches a cyclic-word oracle") {
  auto f2 = Presentation::free_group(2);
  auto classes = enumerate_classes(f2, 1, 0);
  CHECK(classes.size() == 5);
  CHECK(classes.front().representative.is_identity());

  for (int n_max : {2, 4}) {
    std::set<std::set<std::string>> oracle;
    std::vector<std::string> frontier = {""};
    for (int len = 0; len <= n_max; ++len) {
      std::vector<std::string> next;
      for (const auto& w : frontier) {
        std::string c = string_cyclic_reduce(w);
        oracle.insert(all_rotations(c));
        if (len < n_max)
          for (char ch : std::string("aAbB")) next.push_back(w + ch);
      }
      frontier = std::move(next);
    }
    CHECK(enumerate_classes(f2, n_max, 0).size() == oracle.size());
  }
}

TEST_CASE("surface conjugacy search is conjugation invariant on samples") {
  auto s2 = Presentation::surface(2);
  auto cls = [&](const Word& w) { return canonical_class(s2, Element{w}, 1); };
  Word a = s2.alphabet().parse("a");
  Word ab = s2.alphabet().parse("ab");
  CHECK(cls(s2.alphabet().parse("bAB")) == cls(s2.alphabet().parse("A")));
  CHECK(cls(ab) == cls(s2.alphabet().parse("ba")));
  CHECK_FALSE(cls(a) == cls(s2.alphabet().parse("A")));
  CHECK(cls(ab).status == ClassStatus::Heuristic);
  // Conjugating by a relator half swap keeps the class.
  Word w = s2.alphabet().parse("abAc");
  Word h = s2.alphabet().parse("dC");
  CHECK(cls(w) == cls(concat(concat(h, w), inverse_word(h))));
  CHECK(canonical_class(s2, Element{w}, 16).status == ClassStatus::Unresolved);
}

TEST_CASE("Schottky matrix models are checked by ping-pong") {
  auto m = fixtures::schottky_3_5();
  Matrix2 b = m.matrices()[1];
  Matrix2 a = m.matrices()[0];
  CHECK(m.is_free());
  CHECK(std::abs(m.word_matrix(m.alphabet().parse("aA")).trace() - 2.0) < 1e-12);

  Matrix2 weak;
  weak << 1.2, 0, 0, 1 / 1.2;
  CHECK_THROWS_AS(Presentation::matrix_model({'a', 'b'}, {weak, b}), InputError);
  Matrix2 elliptic;
  elliptic << 0, -1, 1, 0;
  CHECK_THROWS_AS(Presentation::matrix_model({'a', 'b'}, {a, elliptic}), InputError);
}
