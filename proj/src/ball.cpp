#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "hyperorbit/group.hpp"

namespace hyperorbit {

namespace {

// Displacement of a generic base point; conjugating by a fixed matrix moves
// the base point off every symmetry axis of the built-in representations.
Matrix2 generic_frame() {
  Matrix2 m;
  m << 1.13, 0.37, 0.21, 0.0;
  m(1, 1) = (1.0 + m(0, 1) * m(1, 0)) / m(0, 0);
  return m;
}

constexpr double kBucketScale = 1e4;

std::int64_t displacement_key(const Matrix2& m) {
  double r = std::acosh(std::max(1.0, m.squaredNorm() / 2.0));
  return static_cast<std::int64_t>(std::llround(r * kBucketScale));
}

bool matrices_close(const Matrix2& a, const Matrix2& b) {
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  double tol = 1e-7 * scale;
  return (a - b).cwiseAbs().maxCoeff() < tol || (a + b).cwiseAbs().maxCoeff() < tol;
}

// Exponent-sum key; used when no representation is declared. Valid only when
// every relator has zero exponent sum in every generator.
bool exponent_sums_vanish(const Presentation& p) {
  for (const auto& r : p.relators()) {
    std::vector<int> sums(static_cast<std::size_t>(p.generator_count()), 0);
    for (Symbol s : r) sums[s / 2] += (s % 2 == 0) ? 1 : -1;
    for (int v : sums)
      if (v != 0) return false;
  }
  return true;
}

}  // namespace

Ball::Ball(const Presentation& presentation, int radius, std::size_t element_cap)
    : presentation_(&presentation), radius_(radius), width_(presentation.symbol_count()) {
  if (radius < 0) throw InputError("ball radius must be >= 0");
  if (radius > 250) throw ResourceError("ball radius too large");
  const int k = width_;

  parent_.push_back(-1);
  last_.push_back(0);
  length_.push_back(0);
  sphere_offset_.push_back(0);
  sphere_offset_.push_back(1);

  auto append_row = [&]() { table_.resize(table_.size() + static_cast<std::size_t>(k), kOutside); };
  append_row();

  if (presentation.is_free()) {
    for (int n = 1; n <= radius + 1; ++n) {
      const auto begin = sphere_offset_[static_cast<std::size_t>(n - 1)];
      const auto end = sphere_offset_[static_cast<std::size_t>(n)];
      for (std::size_t x = begin; x < end; ++x) {
        for (int s = 0; s < k; ++s) {
          const auto sym = static_cast<Symbol>(s);
          if (x != 0 && sym == inverse_symbol(last_[x])) {
            table_[x * k + s] = parent_[x];
            continue;
          }
          if (n > radius) continue;
          if (length_.size() >= element_cap) throw ResourceError("ball exceeds element cap");
          const auto y = static_cast<Index>(length_.size());
          parent_.push_back(static_cast<std::int32_t>(x));
          last_.push_back(sym);
          length_.push_back(static_cast<std::uint8_t>(n));
          append_row();
          table_[x * k + s] = y;
        }
      }
      if (n <= radius) sphere_offset_.push_back(length_.size());
    }
    return;
  }

  // Small cancellation: candidates are bucketed, merges are decided by Dehn.
  const bool use_matrix = presentation.has_representation();
  const bool use_exponents = !use_matrix && exponent_sums_vanish(presentation);
  const Matrix2 frame = generic_frame();
  const Matrix2 frame_inv = frame.inverse();
  std::vector<Matrix2> mats;
  std::vector<std::vector<int>> exps;
  if (use_matrix) mats.push_back(Matrix2::Identity());
  const int g = presentation.generator_count();
  if (use_exponents) exps.push_back(std::vector<int>(static_cast<std::size_t>(g), 0));

  std::unordered_map<std::int64_t, std::vector<Index>> buckets;
  auto exponent_key = [&](const std::vector<int>& e) {
    std::int64_t h = 1469598103934665603LL;
    for (int v : e) h = (h ^ (v + 1000)) * 1099511628211LL;
    return h;
  };
  auto key_of_candidate = [&](const Matrix2* m, const std::vector<int>* e) -> std::int64_t {
    if (use_matrix) return displacement_key(frame_inv * *m * frame);
    if (use_exponents) return exponent_key(*e);
    return 0;
  };
  buckets[key_of_candidate(use_matrix ? &mats[0] : nullptr, use_exponents ? &exps[0] : nullptr)]
      .push_back(0);

  Word wx;
  for (int n = 1; n <= radius + 1; ++n) {
    const auto begin = sphere_offset_[static_cast<std::size_t>(n - 1)];
    const auto end = sphere_offset_[static_cast<std::size_t>(n)];
    for (std::size_t x = begin; x < end; ++x) {
      wx = word(static_cast<Index>(x));
      for (int s = 0; s < k; ++s) {
        const auto sym = static_cast<Symbol>(s);
        if (x != 0 && sym == inverse_symbol(last_[x])) {
          table_[x * k + s] = parent_[x];
          continue;
        }
        Matrix2 m;
        std::vector<int> e;
        if (use_matrix) m = mats[x] * presentation.symbol_matrix(sym);
        if (use_exponents) {
          e = exps[x];
          e[s / 2] += (s % 2 == 0) ? 1 : -1;
        }
        const std::int64_t key = key_of_candidate(&m, &e);
        Word candidate = wx;
        candidate.push_back(sym);
        Index found = kOutside;
        const std::int64_t spread = use_matrix ? 1 : 0;
        for (std::int64_t kk = key - spread; kk <= key + spread && found == kOutside; ++kk) {
          auto it = buckets.find(kk);
          if (it == buckets.end()) continue;
          for (Index y : it->second) {
            if (length_[y] + 2 < n) continue;
            if (use_matrix && !matrices_close(mats[y], m)) continue;
            if (presentation.equal(word(y), candidate)) {
              found = y;
              break;
            }
          }
        }
        if (found != kOutside || n > radius) {
          table_[x * k + s] = found;
          continue;
        }
        if (length_.size() >= element_cap) throw ResourceError("ball exceeds element cap");
        const auto y = static_cast<Index>(length_.size());
        parent_.push_back(static_cast<std::int32_t>(x));
        last_.push_back(sym);
        length_.push_back(static_cast<std::uint8_t>(n));
        append_row();
        if (use_matrix) mats.push_back(m);
        if (use_exponents) exps.push_back(std::move(e));
        buckets[key].push_back(y);
        table_[x * k + s] = y;
      }
    }
    if (n <= radius) sphere_offset_.push_back(length_.size());
  }
}

Word Ball::word(Index x) const {
  Word w(length_[x]);
  for (auto i = static_cast<std::ptrdiff_t>(w.size()) - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = last_[x];
    x = parent_[x];
  }
  return w;
}

Ball::Index Ball::walk(Index start, const Word& w) const {
  Index x = start;
  for (Symbol s : w) {
    if (s >= width_) throw InputError("symbol outside alphabet");
    x = neighbor(x, s);
    if (x == kOutside) return kOutside;
  }
  return x;
}

Ball::Index Ball::inverse(Index x) const { return walk(0, inverse_word(word(x))); }

std::vector<Element> enumerate_sphere(const Presentation& presentation, int n, std::size_t cap) {
  if (n < 0) throw InputError("sphere radius must be >= 0");
  if (projected_sphere_size(presentation, n) > static_cast<double>(cap)) {
    throw ResourceError("projected sphere size exceeds cap");
  }
  std::vector<Element> out;
  if (presentation.is_free()) {
    for_each_free_word(presentation.symbol_count(), n, [&](const Word& w) {
      if (static_cast<int>(w.size()) == n) out.push_back(Element{w});
    });
    return out;
  }
  Ball ball(presentation, n, 8 * cap);
  for (std::size_t x = ball.sphere_begin(n); x < ball.sphere_end(n); ++x) {
    out.push_back(Element{ball.word(static_cast<Ball::Index>(x))});
  }
  return out;
}

}  // namespace hyperorbit
