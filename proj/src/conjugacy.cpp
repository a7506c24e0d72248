#include <algorithm>
#include <deque>
#include <set>

#include "hyperorbit/group.hpp"

namespace hyperorbit {

namespace {

Word cyclic_free_reduce(Word w) {
  w = free_reduce(w);
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == inverse_symbol(w[j - 1])) {
    ++i;
    --j;
  }
  return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
}

Word rotate(const Word& w, std::size_t k) {
  Word out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.push_back(w[(k + i) % w.size()]);
  return out;
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Word r = rotate(w, k);
    if (r < best) best = r;
  }
  return best;
}

// Shortens a word until no cyclic rotation contains more than half of a
// relator.
Word cyclic_dehn_reduce(const Presentation& p, Word w) {
  w = cyclic_free_reduce(w);
  bool changed = true;
  while (changed && !w.empty()) {
    changed = false;
    for (std::size_t k = 0; k < w.size(); ++k) {
      Word r = cyclic_free_reduce(p.dehn_reduce(rotate(w, k)));
      if (r.size() < w.size()) {
        w = std::move(r);
        changed = true;
        break;
      }
    }
  }
  return w;
}

// Length-preserving moves: replace exactly half of a relator by the inverse
// of the other half.
std::vector<Word> half_swaps(const Presentation& p, const Word& w) {
  std::vector<Word> out;
  const std::size_t n = w.size();
  for (const auto& rel : p.relators()) {
    const std::size_t len = rel.size();
    if (len % 2 != 0 || len / 2 > n) continue;
    const std::size_t half = len / 2;
    for (const Word& base : {rel, inverse_word(rel)}) {
      for (std::size_t rot = 0; rot < len; ++rot) {
        Word c = rotate(base, rot);
        Word u(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
        Word v_inv = inverse_word(Word(c.begin() + static_cast<std::ptrdiff_t>(half), c.end()));
        for (std::size_t k = 0; k < n; ++k) {
          Word r = rotate(w, k);
          if (!std::equal(u.begin(), u.end(), r.begin())) continue;
          Word next = v_inv;
          next.insert(next.end(), r.begin() + static_cast<std::ptrdiff_t>(half), r.end());
          out.push_back(std::move(next));
        }
      }
    }
  }
  return out;
}

struct Closure {
  Word best;
  bool exhausted_budget = false;
  std::set<Word> members;  // least rotations at the final length
};

// Least cyclic word reachable from `start` through rotations and half swaps,
// restarting whenever a shorter cyclic word turns up.
Closure cyclic_closure(const Presentation& p, Word start, std::size_t& budget) {
  Word current = cyclic_dehn_reduce(p, std::move(start));
  while (true) {
    std::set<Word> seen;
    std::deque<Word> queue;
    Word root = least_rotation(current);
    seen.insert(root);
    queue.push_back(root);
    bool restarted = false;
    while (!queue.empty()) {
      if (budget == 0) return {*seen.begin(), true, seen};
      --budget;
      Word w = std::move(queue.front());
      queue.pop_front();
      for (Word& nb : half_swaps(p, w)) {
        Word reduced = cyclic_dehn_reduce(p, nb);
        if (reduced.size() < current.size()) {
          current = std::move(reduced);
          restarted = true;
          break;
        }
        Word key = least_rotation(reduced);
        if (seen.insert(key).second) queue.push_back(std::move(key));
      }
      if (restarted) break;
    }
    if (!restarted) return {*seen.begin(), false, seen};
  }
}

}  // namespace

int default_search_radius(const Presentation& presentation) {
  if (presentation.is_free()) return 0;
  return 2 * presentation.max_relator_length();
}

ConjClass canonical_class(const Presentation& presentation, const Element& g, int search_radius,
                          const Ball* /*ball*/, std::size_t budget) {
  ConjClass out;
  if (presentation.is_free()) {
    out.representative = Element{least_rotation(cyclic_free_reduce(g.word))};
    out.is_torsion = out.representative.is_identity();
    out.status = ClassStatus::Exact;
    return out;
  }
  if (search_radius < 0) throw InputError("search radius must be >= 0");

  // Conjugate by every h of length <= search_radius, then close each cyclic
  // word under rotations and half swaps; keep the least result.
  Word best;
  bool have = false;
  bool unresolved = false;
  auto consider = [&](const Word& h) {
    if (unresolved) return;
    Word conj = concat(concat(h, g.word), inverse_word(h));
    Closure c = cyclic_closure(presentation, conj, budget);
    if (c.exhausted_budget) {
      unresolved = true;
      return;
    }
    if (!have || shortlex_less(c.best, best)) {
      best = c.best;
      have = true;
    }
  };
  const double words = projected_sphere_size(presentation, search_radius) * 2.0;
  if (words > static_cast<double>(budget)) {
    unresolved = true;
  } else {
    for_each_free_word(presentation.symbol_count(), search_radius, consider);
  }
  if (unresolved) {
    std::size_t fallback = 200'000;
    Closure c = cyclic_closure(presentation, g.word, fallback);
    out.representative = Element{c.best};
    out.status = ClassStatus::Unresolved;
  } else {
    out.representative = Element{best};
    out.status = search_radius >= default_search_radius(presentation) ? ClassStatus::Exact
                                                                      : ClassStatus::Heuristic;
  }
  out.is_torsion = out.representative.is_identity();
  return out;
}

std::vector<Word> cyclic_geodesic_words(const Presentation& presentation, const Word& g, std::size_t budget) {
  std::set<Word> roots;
  if (presentation.is_free()) {
    roots.insert(cyclic_free_reduce(g));
  } else {
    Closure c = cyclic_closure(presentation, g, budget);
    if (c.exhausted_budget) throw ResourceError("cyclic closure exceeds its budget");
    roots = std::move(c.members);
  }
  std::set<Word> all;
  for (const Word& w : roots) {
    for (std::size_t k = 0; k < std::max<std::size_t>(w.size(), 1); ++k) all.insert(w.empty() ? w : rotate(w, k));
  }
  return {all.begin(), all.end()};
}

std::vector<ConjClass> enumerate_classes(const Presentation& presentation, int n_max,
                                         int search_radius, const Ball* ball) {
  if (n_max < 0) throw InputError("n_max must be >= 0");
  std::set<Word, decltype(&shortlex_less)> seen(&shortlex_less);
  std::vector<ConjClass> out;
  auto visit = [&](const Word& w) {
    ConjClass c = canonical_class(presentation, Element{w}, search_radius, ball);
    if (c.status == ClassStatus::Unresolved) {
      throw ResourceError("conjugacy search budget exceeded while enumerating classes");
    }
    if (static_cast<int>(c.representative.length()) > n_max) return;
    if (seen.insert(c.representative.word).second) out.push_back(std::move(c));
  };
  if (presentation.is_free()) {
    if (projected_sphere_size(presentation, n_max) > 4e6) throw ResourceError("class enumeration exceeds cap");
    for_each_free_word(presentation.symbol_count(), n_max, visit);
  } else {
    if (ball == nullptr || ball->radius() < n_max) {
      throw ResourceError("class enumeration for small cancellation needs a ball of radius n_max");
    }
    for (std::size_t x = 0; x < ball->sphere_end(n_max); ++x) visit(ball->word(static_cast<Ball::Index>(x)));
  }
  std::sort(out.begin(), out.end(), [](const ConjClass& a, const ConjClass& b) {
    return shortlex_less(a.representative.word, b.representative.word);
  });
  return out;
}

}  // namespace hyperorbit
