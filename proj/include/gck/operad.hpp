#pragma once

// Graph-level operadic insertion and the Schouten bracket [[P, Q]] with the
// single-wedge bi-vector P.

#include "gck/kontsevich.hpp"

namespace gck {

/// The single wedge 2 -> (0, 1): the Poisson bi-vector P itself.
KontsevichGraph wedge_graph();
/// The graph on one sink and no wedges: the identity for insertion.
KontsevichGraph sink_graph();

/// Replaces sink k of a by the whole of b. Every edge of a into sink k lands,
/// by the Leibniz rule, on each vertex of b in turn. Result sinks: a's sinks
/// before k, b's sinks, a's sinks after k. Result internals: a's, then b's.
/// Returned as raw terms in insertion order (unnormalized, coefficient 1 each).
std::vector<KontsevichGraph> insert_terms(const KontsevichGraph& a, int k, const KontsevichGraph& b);

/// insert_terms(), normalized with fixed sinks. Throws std::out_of_range if k >= a.sinks().
KontsevichSum insert(const KontsevichGraph& a, int k, const KontsevichGraph& b);
/// Bilinear extension to sums.
KontsevichSum insert(const KontsevichSum& a, int k, const KontsevichSum& b);

/// [[P, Q]](f,g,h) = Σ_cyclic P(Q(f,g),h) + Q(P(f,g),h), normalized as a
/// tri-vector (sinks antisymmetric). Throws GradingError for non-bi-vector input.
KontsevichSum schouten_P_Q(const KontsevichSum& q);
/// Same bracket without the sink quotient (fixed sinks), for operator-level checks.
KontsevichSum schouten_P_Q_fixed(const KontsevichSum& q);

/// Σ_cyclic P(P(f,g),h) after the Leibniz cancellations: the three graphs
/// a -> (x, y), b -> (a, z) over cyclic (x, y, z) of (0, 1, 2).
KontsevichSum jacobiator(SinkSymmetry symmetry = SinkSymmetry::Antisymmetric);

}  // namespace gck
