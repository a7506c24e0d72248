#include "hyperorbit/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace hyperorbit {

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& s : out) s = inverse_symbol(s);
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Symbol s : w) {
    if (!out.empty() && out.back() == inverse_symbol(s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// --- Alphabet ------------------------------------------------------------

Alphabet::Alphabet(std::vector<char> generator_names) : names_(std::move(generator_names)) {
  if (names_.empty()) throw InputError("alphabet needs at least one generator");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    char c = names_[i];
    if (!std::islower(static_cast<unsigned char>(c))) {
      throw InputError(std::string("generator names must be lowercase letters, got '") + c + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[j] == c) throw InputError(std::string("duplicate generator '") + c + "'");
    }
  }
  if (names_.size() > 120) throw InputError("too many generators");
}

std::string Alphabet::symbol_name(Symbol s) const {
  char c = names_.at(s / 2);
  if (s % 2 == 1) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return std::string(1, c);
}

Word Alphabet::parse(std::string_view text) const {
  Word out;
  std::size_t i = 0;
  auto lookup = [&](char c) -> int {
    for (std::size_t k = 0; k < names_.size(); ++k) {
      if (names_[k] == c) return static_cast<int>(2 * k);
      if (std::toupper(static_cast<unsigned char>(names_[k])) == c) return static_cast<int>(2 * k + 1);
    }
    return -1;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    int sym = lookup(c);
    if (sym < 0) throw InputError(std::string("symbol '") + c + "' is not in the alphabet");
    ++i;
    if (text.substr(i, 3) == "^-1") {
      sym ^= 1;
      i += 3;
    } else if (text.substr(i, 5) == "⁻¹") {
      sym ^= 1;
      i += 5;
    }
    out.push_back(static_cast<Symbol>(sym));
  }
  return out;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (Symbol s : w) out += symbol_name(s);
  return out;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Free: return "free";
    case Family::SmallCancellation: return "small_cancellation";
    case Family::Matrix: return "matrix";
  }
  return "?";
}

std::string to_string(ClassStatus s) {
  switch (s) {
    case ClassStatus::Exact: return "exact";
    case ClassStatus::Heuristic: return "heuristic";
    case ClassStatus::Unresolved: return "unresolved";
  }
  return "?";
}

// --- Presentation ----------------------------------------------------------

namespace {

std::vector<char> default_names(int n) {
  if (n < 1 || n > 26) throw InputError("generator count must be in [1, 26]");
  std::vector<char> names;
  for (int i = 0; i < n; ++i) names.push_back(static_cast<char>('a' + i));
  return names;
}

std::string key_of(const Word& w, std::size_t begin, std::size_t len) {
  return std::string(w.begin() + static_cast<std::ptrdiff_t>(begin),
                     w.begin() + static_cast<std::ptrdiff_t>(begin + len));
}

Word rotation(const Word& r, std::size_t k) {
  Word out;
  out.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out.push_back(r[(k + i) % r.size()]);
  return out;
}

std::vector<Word> symmetrise(const std::vector<Word>& relators) {
  std::vector<Word> out;
  for (const auto& r : relators) {
    for (const auto& base : {r, inverse_word(r)}) {
      for (std::size_t k = 0; k < base.size(); ++k) out.push_back(rotation(base, k));
    }
  }
  return out;
}

using Matrix2c = Eigen::Matrix2cd;

Matrix2c disk_rotation(double angle) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = std::polar(1.0, angle / 2);
  m(1, 1) = std::polar(1.0, -angle / 2);
  return m;
}

Matrix2c disk_translation(double distance) {
  Matrix2c m;
  m << std::cosh(distance / 2), std::sinh(distance / 2), std::sinh(distance / 2),
      std::cosh(distance / 2);
  return m;
}

// Upper half-plane <-> disk, z -> (z - i) / (z + i).
Matrix2c cayley() {
  const std::complex<double> i(0, 1);
  Matrix2c m;
  m << 1.0, -i, 1.0, i;
  return m;
}

Matrix2 to_upper_half_plane(const Matrix2c& disk) {
  const Matrix2c c = cayley();
  const Matrix2c c_inv = c.inverse();
  Matrix2c m = c_inv * disk * c;
  std::complex<double> det = m.determinant();
  m /= std::sqrt(det);
  // Fix the global sign so the matrix is real.
  if (std::abs(m(0, 0).imag()) + std::abs(m(1, 0).imag()) > 1e-9) m *= std::complex<double>(0, 1);
  Matrix2 out;
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) out(r, col) = m(r, col).real();
  return out;
}

Matrix2c to_disk(const Matrix2& g) {
  const Matrix2c c = cayley();
  const Matrix2c c_inv = c.inverse();
  const Matrix2c gc = g.cast<std::complex<double>>();
  Matrix2c m = c * gc * c_inv;
  m /= std::sqrt(m.determinant());
  return m;
}

// Side pairings of the regular hyperbolic 4g-gon with interior angles
// 2*pi/(4g), sides labelled a1 b1 A1 B1 a2 b2 A2 B2 ... counterclockwise.
std::vector<Matrix2> surface_representation(int genus) {
  const int n = 4 * genus;
  const double pi = std::numbers::pi;
  const double half_side_distance = std::acosh(1.0 / std::tan(pi / n));
  auto angle = [&](int k) { return 2 * pi * k / n; };
  auto pairing = [&](int from, int to) -> Matrix2c {
    return disk_rotation(angle(to)) * disk_translation(2 * half_side_distance) *
           disk_rotation(pi - angle(from));
  };
  std::vector<Matrix2> gens;
  for (int q = 0; q < genus; ++q) {
    gens.push_back(to_upper_half_plane(pairing(4 * q + 2, 4 * q)));
    gens.push_back(to_upper_half_plane(pairing(4 * q + 1, 4 * q + 3)));
  }
  return gens;
}

}  // namespace

Presentation Presentation::free_group(int rank) {
  if (rank < 2) throw InputError("free group must have rank >= 2 (non-elementary)");
  return free_group(default_names(rank));
}

Presentation Presentation::free_group(std::vector<char> names) {
  Presentation p;
  p.family_ = Family::Free;
  p.alphabet_ = Alphabet(std::move(names));
  if (p.generator_count() < 2) throw InputError("free group must have rank >= 2 (non-elementary)");
  return p;
}

Presentation Presentation::small_cancellation(std::vector<char> names,
                                              const std::vector<std::string>& relators,
                                              std::vector<Matrix2> hash_representation) {
  Presentation p;
  p.family_ = Family::SmallCancellation;
  p.alphabet_ = Alphabet(std::move(names));
  if (p.generator_count() < 2) throw InputError("presentation must have >= 2 generators");
  if (relators.empty()) throw InputError("small-cancellation presentation needs a relator");
  for (const auto& r : relators) {
    Word w = p.alphabet_.parse(r);
    Word reduced = free_reduce(w);
    if (reduced != w || (w.size() > 1 && w.front() == inverse_symbol(w.back()))) {
      throw InputError("relator '" + r + "' is not cyclically reduced");
    }
    p.relators_.push_back(std::move(w));
  }
  p.check_small_cancellation();
  p.build_dehn_tables();
  if (!hash_representation.empty()) {
    if (static_cast<int>(hash_representation.size()) != p.generator_count()) {
      throw InputError("representation needs one matrix per generator");
    }
    p.matrices_ = std::move(hash_representation);
    p.check_representation();
  }
  return p;
}

Presentation Presentation::surface(int genus, std::vector<char> order) {
  if (genus < 2) throw InputError("surface genus must be >= 2 (non-elementary)");
  if (genus > 6) throw InputError("surface genus > 6 not supported");
  std::vector<char> names = default_names(2 * genus);
  std::string relator;
  for (int q = 0; q < genus; ++q) {
    char x = names[2 * q], y = names[2 * q + 1];
    relator += x;
    relator += y;
    relator += static_cast<char>(std::toupper(x));
    relator += static_cast<char>(std::toupper(y));
  }
  std::vector<Matrix2> rep = surface_representation(genus);
  if (!order.empty()) {
    std::vector<char> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != names) throw InputError("generator_order must permute the surface generators");
    std::vector<Matrix2> permuted;
    for (char c : order) permuted.push_back(rep[static_cast<std::size_t>(c - 'a')]);
    return small_cancellation(order, {relator}, permuted);
  }
  return small_cancellation(names, {relator}, rep);
}

Presentation Presentation::matrix_model(std::vector<char> names, std::vector<Matrix2> matrices) {
  Presentation p;
  p.family_ = Family::Matrix;
  p.alphabet_ = Alphabet(std::move(names));
  if (p.generator_count() < 2) throw InputError("matrix model needs >= 2 generators");
  if (static_cast<int>(matrices.size()) != p.generator_count()) {
    throw InputError("matrix model needs one matrix per generator");
  }
  p.matrices_ = std::move(matrices);
  p.check_schottky();
  return p;
}

int Presentation::max_relator_length() const {
  int out = 0;
  for (const auto& r : relators_) out = std::max(out, static_cast<int>(r.size()));
  return out;
}

Matrix2 Presentation::symbol_matrix(Symbol s) const {
  if (matrices_.empty()) throw InputError("presentation has no matrix representation");
  const Matrix2& m = matrices_.at(s / 2);
  if (s % 2 == 0) return m;
  Matrix2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv;
}

Matrix2 Presentation::word_matrix(const Word& w) const {
  Matrix2 m = Matrix2::Identity();
  for (Symbol s : w) m = m * symbol_matrix(s);
  return m;
}

int Presentation::max_piece_length() const {
  auto sym = symmetrise(relators_);
  int best = 0;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    for (std::size_t j = i + 1; j < sym.size(); ++j) {
      if (sym[i] == sym[j]) continue;
      std::size_t len = std::min(sym[i].size(), sym[j].size());
      int k = 0;
      while (static_cast<std::size_t>(k) < len && sym[i][k] == sym[j][k]) ++k;
      best = std::max(best, k);
    }
  }
  return best;
}

void Presentation::check_small_cancellation() const {
  auto sym = symmetrise(relators_);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    for (std::size_t j = i + 1; j < sym.size(); ++j) {
      if (sym[i] == sym[j]) {
        throw InputError("relator is a proper power or repeated; C'(1/6) fails");
      }
      std::size_t len = std::min(sym[i].size(), sym[j].size());
      std::size_t k = 0;
      while (k < len && sym[i][k] == sym[j][k]) ++k;
      if (6 * k >= sym[i].size() || 6 * k >= sym[j].size()) {
        throw InputError("presentation violates C'(1/6): piece of length " + std::to_string(k));
      }
    }
  }
}

void Presentation::build_dehn_tables() {
  dehn_rules_.clear();
  for (const auto& rot : symmetrise(relators_)) {
    const int len = static_cast<int>(rot.size());
    const int window = len / 2 + 1;
    auto it = std::find_if(dehn_rules_.begin(), dehn_rules_.end(),
                           [&](const DehnRule& r) { return r.window == window; });
    if (it == dehn_rules_.end()) {
      dehn_rules_.push_back(DehnRule{window, {}});
      it = std::prev(dehn_rules_.end());
    }
    Word rest(rot.begin() + window, rot.end());
    it->replace.emplace(key_of(rot, 0, static_cast<std::size_t>(window)), inverse_word(rest));
  }
}

Word Presentation::dehn_reduce(const Word& input) const {
  Word w = free_reduce(input);
  if (family_ != Family::SmallCancellation) return w;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : dehn_rules_) {
      const auto window = static_cast<std::size_t>(rule.window);
      if (w.size() < window) continue;
      for (std::size_t p = 0; p + window <= w.size(); ++p) {
        auto it = rule.replace.find(key_of(w, p, window));
        if (it == rule.replace.end()) continue;
        Word next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
        next.insert(next.end(), it->second.begin(), it->second.end());
        next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(p + window), w.end());
        w = free_reduce(next);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return w;
}

void Presentation::check_representation() const {
  for (const auto& m : matrices_) {
    if (!m.allFinite() || !(std::abs(m.determinant() - 1.0) <= 1e-9)) {
      throw InputError("representation matrix has det != 1");
    }
  }
  for (const auto& r : relators_) {
    Matrix2 m = word_matrix(r);
    double err = std::min((m - Matrix2::Identity()).cwiseAbs().maxCoeff(),
                          (m + Matrix2::Identity()).cwiseAbs().maxCoeff());
    if (!(err <= 1e-8)) throw InputError("representation does not satisfy relator");
  }
}

void Presentation::check_schottky() const {
  struct Disc {
    std::complex<double> center;
    double radius;
  };
  std::vector<Disc> discs;
  for (std::size_t g = 0; g < matrices_.size(); ++g) {
    const Matrix2& m = matrices_[g];
    if (!m.allFinite() || !(std::abs(m.determinant() - 1.0) <= 1e-9)) {
      throw InputError("matrix generator has det != 1");
    }
    if (std::abs(m.trace()) <= 2.0 + 1e-12) throw InputError("matrix generator is not loxodromic");
    for (Symbol s : {static_cast<Symbol>(2 * g), static_cast<Symbol>(2 * g + 1)}) {
      // Isometric circle in the disk centred at the base point i: the
      // perpendicular bisector of 0 and the image of 0 under the inverse.
      Matrix2c d = to_disk(symbol_matrix(s));
      if (std::abs(d(1, 0)) < 1e-14) throw InputError("matrix generator fixes the base point");
      discs.push_back({-d(1, 1) / d(1, 0), 1.0 / std::abs(d(1, 0))});
    }
  }
  for (std::size_t i = 0; i < discs.size(); ++i) {
    for (std::size_t j = i + 1; j < discs.size(); ++j) {
      if (std::abs(discs[i].center - discs[j].center) <= discs[i].radius + discs[j].radius) {
        throw InputError("matrix generators fail the ping-pong (Schottky) disc test");
      }
    }
  }
}

std::string Presentation::describe() const {
  std::ostringstream out;
  out << to_string(family_) << " <";
  for (int i = 0; i < generator_count(); ++i) out << (i ? "," : "") << alphabet_.generator_name(i);
  if (!relators_.empty()) {
    out << " |";
    for (std::size_t i = 0; i < relators_.size(); ++i) out << (i ? ", " : " ") << alphabet_.format(relators_[i]);
  }
  out << ">";
  return out.str();
}

// --- elements ---------------------------------------------------------------

namespace {

// Equal-length rewrites: a subword equal to half of a relator is replaced by
// the inverse of the other half. Shorter words found on the way restart the
// search.
Word shortlex_search(const Presentation& p, Word w, std::size_t budget) {
  std::vector<std::pair<Word, Word>> swaps;
  for (const auto& rel : p.relators()) {
    if (rel.size() % 2 != 0) continue;
    const auto half = static_cast<std::ptrdiff_t>(rel.size() / 2);
    for (const Word& base : {rel, inverse_word(rel)}) {
      for (std::size_t k = 0; k < base.size(); ++k) {
        Word c = rotation(base, k);
        swaps.emplace_back(Word(c.begin(), c.begin() + half),
                           inverse_word(Word(c.begin() + half, c.end())));
      }
    }
  }
  while (true) {
    std::set<Word> seen = {w};
    std::vector<Word> queue = {w};
    bool shorter = false;
    for (std::size_t head = 0; head < queue.size() && !shorter; ++head) {
      if (seen.size() > budget) throw ResourceError("normal-form search budget exceeded");
      const Word cur = queue[head];
      for (const auto& [u, v] : swaps) {
        for (std::size_t pos = 0; pos + u.size() <= cur.size(); ++pos) {
          if (!std::equal(u.begin(), u.end(), cur.begin() + static_cast<std::ptrdiff_t>(pos))) continue;
          Word next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(pos));
          next.insert(next.end(), v.begin(), v.end());
          next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(pos + u.size()), cur.end());
          next = p.dehn_reduce(next);
          if (next.size() < w.size()) {
            w = std::move(next);
            shorter = true;
            break;
          }
          if (seen.insert(next).second) queue.push_back(std::move(next));
        }
        if (shorter) break;
      }
    }
    if (!shorter) return *seen.begin();
  }
}

}  // namespace

Element reduce(const Presentation& presentation, const Word& raw, const Ball* ball) {
  for (Symbol s : raw) {
    if (s >= presentation.symbol_count()) throw InputError("symbol outside alphabet");
  }
  Word w = presentation.dehn_reduce(raw);
  if (presentation.is_free() || w.empty()) return Element{std::move(w)};
  if (ball != nullptr && &ball->presentation() == &presentation &&
      static_cast<int>(w.size()) <= ball->radius()) {
    Ball::Index x = ball->find(w);
    if (x == Ball::kOutside) throw ResourceError("word leaves the enumerated ball");
    return Element{ball->word(x)};
  }
  return Element{shortlex_search(presentation, std::move(w), 100'000)};
}

Element reduce(const Presentation& presentation, std::string_view raw, const Ball* ball) {
  return reduce(presentation, presentation.alphabet().parse(raw), ball);
}

Element multiply(const Presentation& presentation, const Element& a, const Element& b,
                 const Ball* ball) {
  return reduce(presentation, concat(a.word, b.word), ball);
}

Element inverse(const Presentation& presentation, const Element& a, const Ball* ball) {
  return reduce(presentation, inverse_word(a.word), ball);
}

double projected_sphere_size(const Presentation& presentation, int n) {
  if (n == 0) return 1.0;
  const double k = presentation.symbol_count();
  return k * std::pow(k - 1.0, n - 1);
}

}  // namespace hyperorbit
