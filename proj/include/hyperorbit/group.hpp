#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hyperorbit/errors.hpp"

namespace hyperorbit {

// Symbol 2*i is generator i, symbol 2*i+1 its inverse. Shortlex order on
// words is induced by the symbol order, so inverses are interleaved:
// a < A < b < B < ...
using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;
using Matrix2 = Eigen::Matrix2d;

constexpr Symbol inverse_symbol(Symbol s) noexcept {
  return static_cast<Symbol>(s ^ 1U);
}

Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);
Word free_reduce(const Word& w);
bool shortlex_less(const Word& a, const Word& b);

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<char> generator_names);

  int generator_count() const { return static_cast<int>(names_.size()); }
  int size() const { return 2 * generator_count(); }
  char generator_name(int i) const { return names_.at(i); }
  std::string symbol_name(Symbol s) const;

  // Accepts lowercase letters for generators, uppercase for inverses, and the
  // postfix forms "x^-1" / "x⁻¹". Whitespace is ignored.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

 private:
  std::vector<char> names_;
};

enum class Family { Free, SmallCancellation, Matrix };

std::string to_string(Family f);

/// A finitely presented group with a decidable word problem.
///
/// Free and Matrix families are free on their generators (the matrix model is
/// a Schottky group, checked by ping-pong at construction). Small-cancellation
/// presentations must satisfy C'(1/6); their word problem is Dehn's
/// algorithm. A small-cancellation presentation may carry a faithful
/// SL(2,R) representation used only to bucket elements during ball
/// enumeration.
class Presentation {
 public:
  static Presentation free_group(int rank);
  static Presentation free_group(std::vector<char> names);
  static Presentation small_cancellation(std::vector<char> names,
                                         const std::vector<std::string>& relators,
                                         std::vector<Matrix2> hash_representation = {});
  // Closed orientable surface of genus g with relator [a1,b1]...[ag,bg].
  // `order` optionally permutes the generator order (shortlex order).
  static Presentation surface(int genus, std::vector<char> order = {});
  static Presentation matrix_model(std::vector<char> names, std::vector<Matrix2> matrices);

  Family family() const { return family_; }
  bool is_free() const { return family_ != Family::SmallCancellation; }
  const Alphabet& alphabet() const { return alphabet_; }
  int symbol_count() const { return alphabet_.size(); }
  int generator_count() const { return alphabet_.generator_count(); }
  const std::vector<Word>& relators() const { return relators_; }
  int max_relator_length() const;

  // Generator images (Matrix family) or the hashing representation (small
  // cancellation; may be empty).
  const std::vector<Matrix2>& matrices() const { return matrices_; }
  bool has_representation() const { return !matrices_.empty(); }
  Matrix2 symbol_matrix(Symbol s) const;
  Matrix2 word_matrix(const Word& w) const;

  // Free reduction, then (small cancellation) Dehn's algorithm. The result
  // is shorter or equal and represents the same element; it is empty iff the
  // input is trivial.
  Word dehn_reduce(const Word& w) const;
  bool is_trivial(const Word& w) const { return dehn_reduce(w).empty(); }
  bool equal(const Word& u, const Word& v) const {
    return is_trivial(concat(u, inverse_word(v)));
  }
  // Longest piece among the symmetrised relators.
  int max_piece_length() const;

  std::string describe() const;

 private:
  Presentation() = default;
  void build_dehn_tables();
  void check_small_cancellation() const;
  void check_representation() const;
  void check_schottky() const;

  Family family_ = Family::Free;
  Alphabet alphabet_;
  std::vector<Word> relators_;
  std::vector<Matrix2> matrices_;

  struct DehnRule {
    int window = 0;
    std::unordered_map<std::string, Word> replace;
  };
  std::vector<DehnRule> dehn_rules_;
};

struct Element {
  Word word;
  std::size_t length() const { return word.size(); }
  bool is_identity() const { return word.empty(); }
  friend bool operator==(const Element&, const Element&) = default;
};

class Ball;

// Canonical normal form: freely reduced word (free families) or the
// shortlex-least geodesic (small cancellation). Small-cancellation words are
// looked up in `ball` when it covers the Dehn-reduced length; otherwise the
// form comes from a bounded search over half-relator rewrites.
Element reduce(const Presentation& presentation, const Word& raw, const Ball* ball = nullptr);
Element reduce(const Presentation& presentation, std::string_view raw, const Ball* ball = nullptr);
Element multiply(const Presentation& presentation, const Element& a, const Element& b,
                 const Ball* ball = nullptr);
Element inverse(const Presentation& presentation, const Element& a, const Ball* ball = nullptr);

/// Exact ball B(radius) of the Cayley graph, elements stored in shortlex
/// order of their normal forms (so spheres are contiguous index ranges).
class Ball {
 public:
  using Index = std::int32_t;
  static constexpr Index kOutside = -1;

  Ball(const Presentation& presentation, int radius, std::size_t element_cap = 4'000'000);

  const Presentation& presentation() const { return *presentation_; }
  int radius() const { return radius_; }
  std::size_t size() const { return length_.size(); }
  std::size_t sphere_begin(int n) const { return sphere_offset_.at(n); }
  std::size_t sphere_end(int n) const { return sphere_offset_.at(n + 1); }
  std::size_t sphere_size(int n) const { return sphere_end(n) - sphere_begin(n); }

  int length(Index x) const { return length_[x]; }
  Word word(Index x) const;
  Index neighbor(Index x, Symbol s) const { return table_[static_cast<std::size_t>(x) * width_ + s]; }
  // Walks `w` from `start`; kOutside when the walk leaves the ball.
  Index walk(Index start, const Word& w) const;
  Index find(const Word& w) const { return walk(0, w); }
  Index inverse(Index x) const;

 private:
  const Presentation* presentation_;
  int radius_;
  int width_;
  std::vector<std::int32_t> parent_;
  std::vector<Symbol> last_;
  std::vector<std::uint8_t> length_;
  std::vector<Index> table_;
  std::vector<std::size_t> sphere_offset_;
};

// Projected size of S_n; exact for free families, growth-extrapolated
// otherwise (from the spheres of `ball` when given).
double projected_sphere_size(const Presentation& presentation, int n);

std::vector<Element> enumerate_sphere(const Presentation& presentation, int n,
                                      std::size_t cap = 2'000'000);

// Calls fn(word) for every normal form of length <= n in shortlex order.
// Free families are generated lazily; small cancellation uses `ball`.
template <class Fn>
void for_each_free_word(int symbol_count, int n, Fn&& fn);

enum class ClassStatus { Exact, Heuristic, Unresolved };
std::string to_string(ClassStatus s);

struct ConjClass {
  Element representative;
  bool is_torsion = false;
  ClassStatus status = ClassStatus::Exact;
  friend bool operator==(const ConjClass& a, const ConjClass& b) {
    return a.representative == b.representative;
  }
};

// Default conjugacy search radius: 2 * (longest relator length); 0 for free
// groups, which are solved exactly by cyclic reduction.
int default_search_radius(const Presentation& presentation);

ConjClass canonical_class(const Presentation& presentation, const Element& g, int search_radius,
                          const Ball* ball = nullptr, std::size_t budget = 200'000);

// Cyclically geodesic words of the class of g: rotations of the cyclic free
// reduction (free families), or of every word in the rotation/half-swap
// closure of the cyclic Dehn reduction (small cancellation).
std::vector<Word> cyclic_geodesic_words(const Presentation& presentation, const Word& g,
                                        std::size_t budget = 100'000);

std::vector<ConjClass> enumerate_classes(const Presentation& presentation, int n_max,
                                         int search_radius, const Ball* ball = nullptr);

// --- template implementation -------------------------------------------

template <class Fn>
void for_each_free_word(int symbol_count, int n, Fn&& fn) {
  Word w;
  fn(static_cast<const Word&>(w));
  if (n == 0) return;
  // Iterative shortlex enumeration: length by length, lexicographic within.
  for (int len = 1; len <= n; ++len) {
    w.assign(static_cast<std::size_t>(len), 0);
    while (true) {
      fn(static_cast<const Word&>(w));
      // Advance to the next freely reduced word of the same length.
      int pos = len - 1;
      while (pos >= 0) {
        Symbol next = static_cast<Symbol>(w[pos] + 1);
        while (next < symbol_count && pos > 0 && next == inverse_symbol(w[pos - 1])) ++next;
        if (next < symbol_count) {
          w[pos] = next;
          for (int i = pos + 1; i < len; ++i) {
            Symbol c = 0;
            while (c == inverse_symbol(w[i - 1])) ++c;
            w[i] = c;
          }
          break;
        }
        --pos;
      }
      if (pos < 0) break;
    }
  }
}

}  // namespace hyperorbit
