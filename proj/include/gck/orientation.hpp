#pragma once

// Orienting non-oriented cocycles into parameterized bi-vector ansätze.

#include <iosfwd>
#include <vector>

#include "gck/graph_complex.hpp"
#include "gck/kontsevich.hpp"

namespace gck {

/// One unknown coefficient per parameter; each parameter is a primitive
/// integer skew sum (content 1, first coefficient in key order positive).
struct OrientationAnsatz {
  std::vector<KontsevichSum> parameters;
};

/// All admissible oriented graphs of one non-oriented graph: every edge
/// oriented, two extra edges into the sinks 0 and 1, every internal vertex
/// with out-degree exactly two. Vertex v of g becomes internal vertex v+2.
std::vector<KontsevichGraph> admissible_orientations(const NonOrientedGraph& g);

/// Throws GradingError unless every graph has n vertices, 2n-2 edges, valencies >= 3.
OrientationAnsatz orient(const GraphSum& gamma);

/// Divides by the content and fixes the sign so the first coefficient is positive.
KontsevichSum primitive(const KontsevichSum& s);

/// Index of the parameter whose support contains g, or -1.
int parameter_containing(const OrientationAnsatz& ansatz, const KontsevichGraph& g);

/// Σ λ_i · parameter_i.
KontsevichSum combine(const OrientationAnsatz& ansatz, const std::vector<Rational>& lambda);

// Parameter file: a `parameter <k>` line (k from 1) opens each block, followed
// by the block's normalized graphs as table rows.
void write_ansatz(std::ostream& out, const OrientationAnsatz& ansatz);
/// Throws ParseError; rows before the first `parameter` line are an error.
OrientationAnsatz read_ansatz(std::istream& in);

}  // namespace gck
