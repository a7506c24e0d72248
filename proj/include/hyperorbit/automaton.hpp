#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperorbit/group.hpp"

namespace hyperorbit {

/// Finite labelled digraph whose paths from the initial vertex (vertex 0)
/// spell geodesic words. Every non-initial vertex has a single incoming
/// label, so a path is determined by its vertex sequence.
class GeodesicAutomaton {
 public:
  static constexpr int kNone = -1;
  static constexpr int kIdentity = -2;  // label of edges into the 0-vertex

  struct Edge {
    int from;
    int to;
    int label;
  };

  GeodesicAutomaton() = default;
  GeodesicAutomaton(int symbol_count, std::vector<std::vector<int>> next, std::vector<int> labels,
                    bool shortlex_unique, int r_cone);

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int symbol_count() const { return symbol_count_; }
  int initial() const { return 0; }
  int zero() const { return zero_; }
  bool augmented() const { return zero_ != kNone; }
  bool shortlex_unique() const { return shortlex_unique_; }
  bool accepts_all_geodesics() const { return !shortlex_unique_; }
  int r_cone() const { return r_cone_; }

  // Incoming label of v: a Symbol, kIdentity for the 0-vertex, kNone for the
  // initial vertex.
  int label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
  // Generator transition (kNone when the extension is not accepted).
  int target(int v, Symbol s) const { return next_[static_cast<std::size_t>(v)][s]; }
  // All out-neighbours in label order, the 0-vertex last when augmented.
  const std::vector<int>& successors(int v) const { return successors_[static_cast<std::size_t>(v)]; }
  bool has_edge(int from, int to) const;
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;

  // Runs the word from the initial vertex; kNone when rejected.
  int run(const Word& w) const;
  bool accepts(const Word& w) const { return run(w) != kNone; }
  // Accepted words of each length 0..n (identity edges excluded).
  std::vector<std::uint64_t> count_by_length(int n) const;

  GeodesicAutomaton augmented_copy() const;
  GeodesicAutomaton without_edge(int from, int to) const;

  friend bool operator==(const GeodesicAutomaton&, const GeodesicAutomaton&) = default;

 private:
  void rebuild_successors();

  int symbol_count_ = 0;
  std::vector<std::vector<int>> next_;
  std::vector<int> labels_;
  std::vector<std::vector<int>> successors_;
  bool shortlex_unique_ = true;
  int r_cone_ = 0;
  int zero_ = kNone;
  std::vector<std::uint8_t> to_zero_;  // identity edge v -> 0-vertex present
};

struct AutomatonBuildStats {
  std::size_t raw_states = 0;
  std::size_t minimal_states = 0;
};

// Word-difference construction with competitors in B(r_cone), Moore
// minimisation, then a split so each vertex has one incoming label. Throws
// UnsaturatedError unless radii r_cone and r_cone + 1 give the same result.
GeodesicAutomaton build_geodesic_acceptor(const Presentation& presentation, int r_cone,
                                          AutomatonBuildStats* stats = nullptr);
GeodesicAutomaton build_shortlex_acceptor(const Presentation& presentation, int r_cone,
                                          AutomatonBuildStats* stats = nullptr);

// Single construction at a fixed radius, no saturation check.
GeodesicAutomaton build_acceptor_at(const Presentation& presentation, int r_cone, bool shortlex,
                                    AutomatonBuildStats* stats = nullptr);

// Adds the 0-vertex, identity edges into it from every vertex except the
// initial one, and an identity self-loop at 0. Idempotent.
GeodesicAutomaton augment(const GeodesicAutomaton& aut);

// Product of the labels along a vertex path (must start at the initial
// vertex), reduced to normal form; ev_n uses the first n+1 vertices.
Element ev(const GeodesicAutomaton& aut, const Presentation& presentation, const std::vector<int>& path,
           const Ball* ball = nullptr);
Element ev_n(const GeodesicAutomaton& aut, const Presentation& presentation, const std::vector<int>& path,
             int n, const Ball* ball = nullptr);
// Labels along a path, identity edges dropped; throws InputError on a non-path.
Word path_word(const GeodesicAutomaton& aut, const std::vector<int>& path);

struct BijectionReport {
  bool ok = true;
  int n_max = 0;
  std::vector<std::uint64_t> accepted;  // per length
  std::vector<std::uint64_t> expected;  // sphere sizes (shortlex) or geodesic counts
  std::optional<int> first_failure_length;
  std::string first_failure;
};

// Shortlex acceptors: every accepted word of length <= n_max is geodesic and
// evaluates to a distinct element, and counts equal sphere sizes. Geodesic
// acceptors: accepted counts equal the number of geodesic words, computed on
// the ball.
BijectionReport validate_bijection(const GeodesicAutomaton& aut, const Ball& ball, int n_max);

// Versioned JSON form {format, version, symbols, vertices, initial, zero,
// flags, labels, edges:[[from,to,label]...]}. Labels are symbol names with
// "1" for identity edges.
std::string to_json(const GeodesicAutomaton& aut, const Alphabet& alphabet);
GeodesicAutomaton automaton_from_json(const std::string& text, const Alphabet& alphabet);

/// Cone signature {(h, |gh| - |g|) : h in B(radius)} of g, kept as a
/// diagnostic. Values are in {-radius..radius} and indexed by ball order.
struct ConeSignature {
  Word g;
  std::vector<std::int8_t> values;
  friend bool operator==(const ConeSignature& a, const ConeSignature& b) { return a.values == b.values; }
};

ConeSignature cone_signature(const Ball& ball, Ball::Index g, int radius);

}  // namespace hyperorbit
