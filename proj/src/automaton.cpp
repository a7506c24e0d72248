#include "hyperorbit/automaton.hpp"

#include <algorithm>
#include <deque>
#include <iostream>
#include <map>
#include <set>

#include <json.hpp>

namespace hyperorbit {

// --- GeodesicAutomaton ----------------------------------------------------

GeodesicAutomaton::GeodesicAutomaton(int symbol_count, std::vector<std::vector<int>> next,
                                     std::vector<int> labels, bool shortlex_unique, int r_cone)
    : symbol_count_(symbol_count),
      next_(std::move(next)),
      labels_(std::move(labels)),
      shortlex_unique_(shortlex_unique),
      r_cone_(r_cone) {
  if (next_.size() != labels_.size() || labels_.empty()) throw InputError("malformed automaton");
  for (std::size_t v = 0; v < next_.size(); ++v) {
    if (static_cast<int>(next_[v].size()) != symbol_count_) throw InputError("malformed automaton row");
    for (int s = 0; s < symbol_count_; ++s) {
      int t = next_[v][static_cast<std::size_t>(s)];
      if (t == kNone) continue;
      if (t < 0 || t >= vertex_count() || labels_[static_cast<std::size_t>(t)] != s) {
        throw InputError("automaton edge disagrees with the target's label");
      }
    }
  }
  rebuild_successors();
}

void GeodesicAutomaton::rebuild_successors() {
  successors_.assign(labels_.size(), {});
  for (std::size_t v = 0; v < next_.size(); ++v) {
    for (int s = 0; s < symbol_count_; ++s) {
      int t = next_[v][static_cast<std::size_t>(s)];
      if (t != kNone) successors_[v].push_back(t);
    }
    if (zero_ != kNone && to_zero_[v]) successors_[v].push_back(zero_);
  }
}

bool GeodesicAutomaton::has_edge(int from, int to) const {
  const auto& s = successors(from);
  return std::find(s.begin(), s.end(), to) != s.end();
}

std::vector<GeodesicAutomaton::Edge> GeodesicAutomaton::edges() const {
  std::vector<Edge> out;
  for (int v = 0; v < vertex_count(); ++v) {
    for (int t : successors(v)) out.push_back({v, t, label(t)});
  }
  return out;
}

std::size_t GeodesicAutomaton::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : successors_) n += s.size();
  return n;
}

int GeodesicAutomaton::run(const Word& w) const {
  int v = initial();
  for (Symbol s : w) {
    if (s >= symbol_count_) return kNone;
    v = target(v, s);
    if (v == kNone) return kNone;
  }
  return v;
}

std::vector<std::uint64_t> GeodesicAutomaton::count_by_length(int n) const {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> cur(labels_.size(), 0), nxt(labels_.size(), 0);
  cur[0] = 1;
  for (int len = 0; len <= n; ++len) {
    std::uint64_t total = 0;
    for (std::size_t v = 0; v < cur.size(); ++v)
      if (static_cast<int>(v) != zero_) total += cur[v];
    counts.push_back(total);
    std::fill(nxt.begin(), nxt.end(), 0);
    for (std::size_t v = 0; v < cur.size(); ++v) {
      if (cur[v] == 0) continue;
      for (int s = 0; s < symbol_count_; ++s) {
        int t = next_[v][static_cast<std::size_t>(s)];
        if (t != kNone) nxt[static_cast<std::size_t>(t)] += cur[v];
      }
    }
    std::swap(cur, nxt);
  }
  return counts;
}

GeodesicAutomaton GeodesicAutomaton::augmented_copy() const {
  GeodesicAutomaton out = *this;
  out.zero_ = vertex_count();
  out.labels_.push_back(kIdentity);
  out.next_.push_back(std::vector<int>(static_cast<std::size_t>(symbol_count_), kNone));
  out.to_zero_.assign(out.labels_.size(), 1);
  out.to_zero_[0] = 0;
  out.rebuild_successors();
  return out;
}

GeodesicAutomaton GeodesicAutomaton::without_edge(int from, int to) const {
  GeodesicAutomaton out = *this;
  for (auto& t : out.next_[static_cast<std::size_t>(from)])
    if (t == to) t = kNone;
  if (out.zero_ != kNone && to == out.zero_) out.to_zero_[static_cast<std::size_t>(from)] = 0;
  out.rebuild_successors();
  return out;
}

GeodesicAutomaton augment(const GeodesicAutomaton& aut) {
  if (aut.augmented()) {
    std::cerr << "warning: automaton already augmented; augment is a no-op\n";
    return aut;
  }
  return aut.augmented_copy();
}

// --- construction ---------------------------------------------------------------

namespace {

enum Flag : std::uint8_t { kLess = 0, kEqual = 1, kGreater = 2 };

// Competitor: d = v^-1 w for a competing word v of the same length as the
// accepted word w, a lexicographic flag comparing v with w, and the last
// letter of v when d is trivial.
std::uint64_t pack(Ball::Index d, std::uint8_t flag, int last) {
  return (static_cast<std::uint64_t>(d) << 16) | (static_cast<std::uint64_t>(flag) << 8) |
         static_cast<std::uint64_t>(last + 1);
}
Ball::Index unpack_d(std::uint64_t c) { return static_cast<Ball::Index>(c >> 16); }
std::uint8_t unpack_flag(std::uint64_t c) { return static_cast<std::uint8_t>((c >> 8) & 0xFF); }
int unpack_last(std::uint64_t c) { return static_cast<int>(c & 0xFF) - 1; }

struct RawAutomaton {
  std::vector<std::vector<int>> next;  // -1 = reject
};

RawAutomaton word_difference_automaton(const Presentation& p, int radius, bool shortlex) {
  const int k = p.symbol_count();
  Ball ball(p, radius + 1);
  // Inverses and left multiplication t^-1 * y inside B(radius + 1).
  std::vector<Ball::Index> inv(ball.size());
  for (std::size_t x = 0; x < ball.size(); ++x) inv[x] = ball.inverse(static_cast<Ball::Index>(x));
  auto left = [&](Symbol t, Ball::Index y) -> Ball::Index {
    Ball::Index z = ball.neighbor(inv[static_cast<std::size_t>(y)], t);
    if (z == Ball::kOutside) return Ball::kOutside;
    return inv[static_cast<std::size_t>(z)];
  };

  using State = std::vector<std::uint64_t>;
  std::map<State, int> index;
  std::vector<State> states;
  RawAutomaton raw;
  State init = {pack(0, kEqual, -1)};
  index.emplace(init, 0);
  states.push_back(init);
  raw.next.emplace_back(static_cast<std::size_t>(k), -1);

  constexpr std::size_t kStateCap = 2'000'000;
  std::set<std::uint64_t> fresh;
  for (std::size_t head = 0; head < states.size(); ++head) {
    for (int si = 0; si < k; ++si) {
      const auto s = static_cast<Symbol>(si);
      const Ball::Index s_inv = ball.neighbor(0, inverse_symbol(s));
      bool reject = false;
      for (std::uint64_t c : states[head]) {
        if (unpack_d(c) == s_inv || (unpack_d(c) == 0 && unpack_last(c) == inverse_symbol(s))) {
          reject = true;
          break;
        }
      }
      if (reject) continue;
      fresh.clear();
      for (std::uint64_t c : states[head]) {
        const Ball::Index ds = ball.neighbor(unpack_d(c), s);
        if (ds == Ball::kOutside) continue;
        for (int ti = 0; ti < k && !reject; ++ti) {
          const auto t = static_cast<Symbol>(ti);
          Ball::Index nd = left(t, ds);
          if (nd == Ball::kOutside || ball.length(nd) > radius) continue;
          std::uint8_t flag = unpack_flag(c);
          if (flag == kEqual) flag = t < s ? kLess : (t > s ? kGreater : kEqual);
          if (!shortlex && flag != kEqual) flag = kGreater;
          if (nd == 0 && flag == kLess) {
            reject = true;
            break;
          }
          fresh.insert(pack(nd, flag, nd == 0 ? ti : -1));
        }
        if (reject) break;
      }
      if (reject) continue;
      State next(fresh.begin(), fresh.end());
      auto [it, inserted] = index.emplace(next, static_cast<int>(states.size()));
      if (inserted) {
        if (states.size() >= kStateCap) throw ResourceError("word-difference automaton exceeds state cap");
        states.push_back(std::move(next));
        raw.next.emplace_back(static_cast<std::size_t>(k), -1);
      }
      raw.next[head][static_cast<std::size_t>(si)] = it->second;
    }
  }
  return raw;
}

// Moore minimisation; every state accepts, rejection is the implicit sink.
std::vector<int> minimise(const RawAutomaton& raw, int k) {
  const std::size_t n = raw.next.size();
  std::vector<int> part(n, 0);
  std::size_t classes = 1;
  while (true) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> next_part(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<int> key = {part[v]};
      for (int s = 0; s < k; ++s) {
        int t = raw.next[v][static_cast<std::size_t>(s)];
        key.push_back(t < 0 ? -1 : part[static_cast<std::size_t>(t)]);
      }
      next_part[v] = sig.emplace(std::move(key), static_cast<int>(sig.size())).first->second;
    }
    part = std::move(next_part);
    if (sig.size() == classes) break;
    classes = sig.size();
  }
  return part;
}

// Canonical vertices: (minimal state, incoming label), numbered in BFS order
// from the initial vertex with labels explored in symbol order.
GeodesicAutomaton canonical_split(const RawAutomaton& raw, const std::vector<int>& part, int k,
                                  bool shortlex, int r_cone) {
  const int classes = *std::max_element(part.begin(), part.end()) + 1;
  std::vector<std::vector<int>> quotient(static_cast<std::size_t>(classes),
                                         std::vector<int>(static_cast<std::size_t>(k), -1));
  for (std::size_t v = 0; v < raw.next.size(); ++v) {
    for (int s = 0; s < k; ++s) {
      int t = raw.next[v][static_cast<std::size_t>(s)];
      quotient[static_cast<std::size_t>(part[v])][static_cast<std::size_t>(s)] =
          t < 0 ? -1 : part[static_cast<std::size_t>(t)];
    }
  }
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> order = {{part[0], GeodesicAutomaton::kNone}};
  id[order[0]] = 0;
  std::vector<std::vector<int>> next;
  std::vector<int> labels;
  for (std::size_t head = 0; head < order.size(); ++head) {
    labels.push_back(order[head].second);
    next.emplace_back(static_cast<std::size_t>(k), GeodesicAutomaton::kNone);
    for (int s = 0; s < k; ++s) {
      int t = quotient[static_cast<std::size_t>(order[head].first)][static_cast<std::size_t>(s)];
      if (t < 0) continue;
      auto key = std::make_pair(t, s);
      auto [it, inserted] = id.emplace(key, static_cast<int>(order.size()));
      if (inserted) order.push_back(key);
      next[head][static_cast<std::size_t>(s)] = it->second;
    }
  }
  return GeodesicAutomaton(k, std::move(next), std::move(labels), shortlex, r_cone);
}

GeodesicAutomaton build_saturated(const Presentation& p, int r_cone, bool shortlex, AutomatonBuildStats* stats) {
  GeodesicAutomaton at = build_acceptor_at(p, r_cone, shortlex, stats);
  // Relator swaps produce word differences of length ceil(L/2), so a radius
  // below that is stable under r -> r+1 while still wrong. Probe past it.
  const int probe = std::max(r_cone + 1, (p.max_relator_length() + 1) / 2 + 1);
  GeodesicAutomaton above = build_acceptor_at(p, probe, shortlex);
  bool same = at.vertex_count() == above.vertex_count();
  for (int v = 0; same && v < at.vertex_count(); ++v) {
    for (int s = 0; s < p.symbol_count(); ++s) {
      if (at.target(v, static_cast<Symbol>(s)) != above.target(v, static_cast<Symbol>(s))) {
        same = false;
        break;
      }
    }
  }
  if (!same) {
    throw UnsaturatedError("automaton at R_cone = " + std::to_string(r_cone) + " differs from R_cone = " +
                               std::to_string(probe),
                           r_cone);
  }
  return at;
}

}  // namespace

GeodesicAutomaton build_acceptor_at(const Presentation& presentation, int r_cone, bool shortlex,
                                    AutomatonBuildStats* stats) {
  if (r_cone < 1) throw InputError("R_cone must be >= 1");
  RawAutomaton raw = word_difference_automaton(presentation, r_cone, shortlex);
  std::vector<int> part = minimise(raw, presentation.symbol_count());
  if (stats != nullptr) {
    stats->raw_states = raw.next.size();
    stats->minimal_states = static_cast<std::size_t>(*std::max_element(part.begin(), part.end()) + 1);
  }
  return canonical_split(raw, part, presentation.symbol_count(), shortlex, r_cone);
}

GeodesicAutomaton build_geodesic_acceptor(const Presentation& presentation, int r_cone,
                                          AutomatonBuildStats* stats) {
  return build_saturated(presentation, r_cone, false, stats);
}

GeodesicAutomaton build_shortlex_acceptor(const Presentation& presentation, int r_cone,
                                          AutomatonBuildStats* stats) {
  return build_saturated(presentation, r_cone, true, stats);
}

// --- paths ------------------------------------------------------------------------

Word path_word(const GeodesicAutomaton& aut, const std::vector<int>& path) {
  if (path.empty() || path.front() != aut.initial()) throw InputError("path must start at the initial vertex");
  Word w;
  for (std::size_t i = 1; i < path.size(); ++i) {
    int from = path[i - 1], to = path[i];
    if (to < 0 || to >= aut.vertex_count() || !aut.has_edge(from, to)) {
      throw InputError("vertex sequence is not a path");
    }
    if (aut.label(to) >= 0) w.push_back(static_cast<Symbol>(aut.label(to)));
  }
  return w;
}

Element ev(const GeodesicAutomaton& aut, const Presentation& presentation, const std::vector<int>& path,
           const Ball* ball) {
  Word w = path_word(aut, path);
  if (aut.shortlex_unique()) return Element{std::move(w)};
  return reduce(presentation, w, ball);
}

Element ev_n(const GeodesicAutomaton& aut, const Presentation& presentation, const std::vector<int>& path,
             int n, const Ball* ball) {
  if (n < 0 || static_cast<std::size_t>(n) >= path.size()) throw InputError("ev_n index outside the path");
  return ev(aut, presentation, std::vector<int>(path.begin(), path.begin() + n + 1), ball);
}

// --- validation -----------------------------------------------------------------

BijectionReport validate_bijection(const GeodesicAutomaton& aut, const Ball& ball, int n_max) {
  BijectionReport rep;
  rep.n_max = n_max;
  if (n_max > ball.radius()) throw ResourceError("validation radius exceeds the enumerated ball");
  const Presentation& p = ball.presentation();
  rep.accepted = aut.count_by_length(n_max);
  auto fail = [&](int len, std::string why) {
    if (!rep.first_failure_length || len < *rep.first_failure_length) {
      rep.first_failure_length = len;
      rep.first_failure = std::move(why);
    }
    rep.ok = false;
  };

  if (aut.shortlex_unique()) {
    for (int n = 0; n <= n_max; ++n) rep.expected.push_back(ball.sphere_size(n));
    // Depth-first walk over accepted words, marking the elements reached.
    std::vector<std::uint8_t> hit(ball.sphere_end(n_max), 0);
    struct Frame {
      int vertex;
      Ball::Index element;
      int depth;
    };
    std::vector<Frame> stack = {{aut.initial(), 0, 0}};
    Word current;
    std::vector<Symbol> labels_on_stack;
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (ball.length(f.element) != f.depth) {
        fail(f.depth, "accepted word of length " + std::to_string(f.depth) + " is not geodesic");
        continue;
      }
      if (hit[static_cast<std::size_t>(f.element)]) {
        fail(f.depth, "two accepted words of length " + std::to_string(f.depth) + " evaluate to " +
                          p.alphabet().format(ball.word(f.element)));
        continue;
      }
      hit[static_cast<std::size_t>(f.element)] = 1;
      if (f.depth == n_max) continue;
      for (int s = p.symbol_count() - 1; s >= 0; --s) {
        int t = aut.target(f.vertex, static_cast<Symbol>(s));
        if (t == GeodesicAutomaton::kNone) continue;
        stack.push_back({t, ball.neighbor(f.element, static_cast<Symbol>(s)), f.depth + 1});
      }
    }
  } else {
    // Geodesic words ending at x: sum over predecessors one step closer.
    std::vector<std::uint64_t> paths(ball.sphere_end(n_max), 0);
    paths[0] = 1;
    rep.expected.push_back(1);
    for (int n = 1; n <= n_max; ++n) {
      std::uint64_t total = 0;
      for (std::size_t x = ball.sphere_begin(n); x < ball.sphere_end(n); ++x) {
        std::uint64_t c = 0;
        for (int s = 0; s < p.symbol_count(); ++s) {
          Ball::Index y = ball.neighbor(static_cast<Ball::Index>(x), static_cast<Symbol>(s));
          if (y != Ball::kOutside && ball.length(y) == n - 1) c += paths[static_cast<std::size_t>(y)];
        }
        paths[x] = c;
        total += c;
      }
      rep.expected.push_back(total);
    }
  }
  for (int n = 0; n <= n_max; ++n) {
    if (rep.accepted[static_cast<std::size_t>(n)] != rep.expected[static_cast<std::size_t>(n)]) {
      fail(n, "length " + std::to_string(n) + ": accepted " + std::to_string(rep.accepted[static_cast<std::size_t>(n)]) +
                  " words, expected " + std::to_string(rep.expected[static_cast<std::size_t>(n)]));
      break;
    }
  }
  return rep;
}

// --- serialisation ------------------------------------------------------------------

std::string to_json(const GeodesicAutomaton& aut, const Alphabet& alphabet) {
  nlohmann::ordered_json j;
  j["format"] = "hyperorbit-automaton";
  j["version"] = 1;
  std::vector<std::string> symbols;
  for (int s = 0; s < alphabet.size(); ++s) symbols.push_back(alphabet.symbol_name(static_cast<Symbol>(s)));
  j["symbols"] = symbols;
  j["vertices"] = aut.vertex_count();
  j["initial"] = aut.initial();
  j["zero"] = aut.augmented() ? nlohmann::ordered_json(aut.zero()) : nlohmann::ordered_json(nullptr);
  j["flags"] = {{"shortlex_unique", aut.shortlex_unique()},
                {"accepts_all_geodesics", aut.accepts_all_geodesics()},
                {"augmented", aut.augmented()},
                {"r_cone", aut.r_cone()}};
  auto name = [&](int label) -> std::string {
    if (label == GeodesicAutomaton::kIdentity) return "1";
    return alphabet.symbol_name(static_cast<Symbol>(label));
  };
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : aut.edges()) edges.push_back({e.from, e.to, name(e.label)});
  j["edges"] = edges;
  return j.dump(1);
}

GeodesicAutomaton automaton_from_json(const std::string& text, const Alphabet& alphabet) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("automaton JSON: ") + e.what());
  }
  if (j.value("format", "") != "hyperorbit-automaton" || j.value("version", 0) != 1) {
    throw InputError("unsupported automaton format or version");
  }
  const int n = j.at("vertices").get<int>();
  const bool augmented = j.at("flags").at("augmented").get<bool>();
  const int base = augmented ? n - 1 : n;
  std::vector<std::vector<int>> next(static_cast<std::size_t>(base),
                                     std::vector<int>(static_cast<std::size_t>(alphabet.size()), GeodesicAutomaton::kNone));
  std::vector<int> labels(static_cast<std::size_t>(base), GeodesicAutomaton::kNone);
  for (const auto& e : j.at("edges")) {
    int from = e.at(0).get<int>(), to = e.at(1).get<int>();
    std::string name = e.at(2).get<std::string>();
    if (name == "1") continue;
    Word w = alphabet.parse(name);
    if (w.size() != 1 || from >= base || to >= base || from < 0 || to < 0) throw InputError("bad automaton edge");
    next[static_cast<std::size_t>(from)][w[0]] = to;
    labels[static_cast<std::size_t>(to)] = w[0];
  }
  GeodesicAutomaton aut(alphabet.size(), std::move(next), std::move(labels),
                        j.at("flags").at("shortlex_unique").get<bool>(), j.at("flags").at("r_cone").get<int>());
  return augmented ? aut.augmented_copy() : aut;
}

// --- cone signatures -------------------------------------------------------------

ConeSignature cone_signature(const Ball& ball, Ball::Index g, int radius) {
  ConeSignature sig;
  sig.g = ball.word(g);
  const int base = ball.length(g);
  for (std::size_t h = 0; h < ball.sphere_end(radius); ++h) {
    Ball::Index gh = ball.walk(g, ball.word(static_cast<Ball::Index>(h)));
    if (gh == Ball::kOutside) throw ResourceError("cone signature leaves the enumerated ball");
    sig.values.push_back(static_cast<std::int8_t>(ball.length(gh) - base));
  }
  return sig;
}

}  // namespace hyperorbit
