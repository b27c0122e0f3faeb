#pragma once

// Non-oriented graph complex: graphs with parity-odd ordered edges, their
// canonical forms with sign, zero-graph detection and the vertex blow-up
// differential.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gck/rational.hpp"

namespace gck {

/// Unordered edge {a, b}; endpoint order is preserved only for I/O.
struct Edge {
  int a = 0;
  int b = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Graph on vertices 0..n-1 whose edge list order is the wedge order of E(γ).
class NonOrientedGraph {
 public:
  NonOrientedGraph() = default;
  /// Throws InvalidGraph on a loop or an out-of-range endpoint.
  NonOrientedGraph(int vertices, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<int> valencies() const;
  /// Every vertex at least tri-valent (the subcomplex the differential lives on).
  bool is_admissible() const;
  bool has_multi_edges() const;

  auto operator<=>(const NonOrientedGraph&) const = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct SignedGraph {
  NonOrientedGraph graph;
  int sign = 1;
};

/// Canonical representative plus the flag telling whether the graph equals minus itself.
struct CanonicalGraph {
  NonOrientedGraph graph;
  int sign = 1;
  bool zero = false;
};

/// Full canonicalization: relabeling, sign of the induced edge permutation, zero flag.
CanonicalGraph canonicalize(const NonOrientedGraph& g);

/// Canonical representative with edges sorted ascending and sign = parity of
/// the edge permutation from g's wedge order to the canonical wedge order.
SignedGraph canonical_form(const NonOrientedGraph& g);

/// True iff some automorphism induces an odd permutation of the edges.
bool is_zero_graph(const NonOrientedGraph& g);

/// Relabel vertices: vertex v becomes perm[v]; edge order is kept.
NonOrientedGraph relabel(const NonOrientedGraph& g, std::span<const int> perm);

/// Sign of the permutation of edges induced by relabeling with `perm`, or 0 when
/// `perm` is not an automorphism's edge bijection (possible only for multigraphs).
int induced_edge_sign(const NonOrientedGraph& g, std::span<const int> perm);

/// Formal rational combination of canonical, nonzero graphs.
class GraphSum {
 public:
  using Terms = std::map<NonOrientedGraph, Rational>;

  GraphSum() = default;

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c·g after canonicalization; zero graphs are absorbed.
  void add(const NonOrientedGraph& g, const Rational& c);
  /// Adds c·g for a graph already in canonical form with sign +1.
  void add_canonical(const NonOrientedGraph& g, const Rational& c);

  GraphSum& operator+=(const GraphSum& other);
  GraphSum operator*(const Rational& c) const;
  bool operator==(const GraphSum& other) const { return terms_ == other.terms_; }

 private:
  Terms terms_;
};

struct RawTerm {
  SignedGraph graph;
  Rational coefficient;
};

/// Canonicalizes each term, folds signs, merges, drops zero graphs and zero coefficients.
GraphSum reduce(std::span<const RawTerm> terms);

struct DifferentialOptions {
  /// Also generate blow-ups leaving an end of the new edge uni-valent and
  /// check that they cancel against the antenna terms of the bracket with
  /// the one-edge graph. Throws std::logic_error if they do not.
  bool debug_univalent = false;
};

/// Vertex-expanding differential; the new edge is placed first in the wedge.
GraphSum differential(const GraphSum& s, const DifferentialOptions& options = {});
/// Same, on raw (possibly non-canonical, possibly zero) input graphs.
GraphSum differential(std::span<const RawTerm> terms, const DifferentialOptions& options = {});

bool is_cocycle(const GraphSum& s);

// Text format, one graph per line: `n m  a1 b1 ... am bm  c`, 1-based labels.

/// Parses a graph file into raw terms (no canonicalization). Throws ParseError.
std::vector<RawTerm> read_graph_terms(std::istream& in);
std::vector<RawTerm> parse_graph_terms(const std::string& text);
/// Serializes one raw term; `parse_graph_line(format_graph_line(t))` is the identity.
std::string format_graph_line(const NonOrientedGraph& g, const Rational& c);
RawTerm parse_graph_line(const std::string& line, int line_number = 0);
void write_graph_sum(std::ostream& out, const GraphSum& s);

namespace graphs {
/// Tetrahedron, the three-wheel cocycle.
NonOrientedGraph tetrahedron();
/// Wheel with `spokes` rim vertices: hub 0, rim 1..spokes, rim edges then spokes.
NonOrientedGraph wheel(int spokes);
/// Companion graph of the pentagon wheel inside the pentagon-wheel cocycle.
NonOrientedGraph pentagon_companion();
/// Pentagon-wheel cocycle: wheel(5) + 5/2 * pentagon_companion(), signs fixed by ker d.
GraphSum pentagon_wheel_cocycle();
}  // namespace graphs

}  // namespace gck
