#pragma once

// Leibniz tri-vector graphs: one Jacobiator vertex with three ordered legs,
// their expansion into Kontsevich graphs and the iterative generation of all
// Leibniz graphs needed to factor a tri-vector sum.

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gck/kontsevich.hpp"

namespace gck {

/// Sinks 0..m-1, wedges m..m+k-1, the Jacobiator vertex is m+k.
class LeibnizGraph {
 public:
  LeibnizGraph() = default;
  /// Throws InvalidGraph on out-of-range targets or edges to oneself.
  LeibnizGraph(int sinks, std::vector<Wedge> wedges, std::array<std::uint8_t, 3> jacobiator,
               int sign = 1);

  int sinks() const { return sinks_; }
  int wedge_count() const { return static_cast<int>(wedges_.size()); }
  int jacobiator_label() const { return sinks_ + wedge_count(); }
  int vertex_count() const { return sinks_ + wedge_count() + 1; }
  const std::vector<Wedge>& wedges() const { return wedges_; }
  const std::array<std::uint8_t, 3>& legs() const { return legs_; }
  int sign() const { return sign_; }
  LeibnizGraph with_sign(int sign) const;

  friend bool operator==(const LeibnizGraph& a, const LeibnizGraph& b) {
    return a.sinks_ == b.sinks_ && a.wedges_ == b.wedges_ && a.legs_ == b.legs_;
  }
  friend std::strong_ordering operator<=>(const LeibnizGraph& a, const LeibnizGraph& b) {
    if (auto c = a.sinks_ <=> b.sinks_; c != 0) return c;
    if (auto c = a.wedges_ <=> b.wedges_; c != 0) return c;
    return a.legs_ <=> b.legs_;
  }

 private:
  int sinks_ = 3;
  std::vector<Wedge> wedges_;
  std::array<std::uint8_t, 3> legs_{};
  int sign_ = 1;
};

struct LeibnizNormalForm {
  LeibnizGraph graph;
  bool zero = false;
};

/// Normal form under wedge relabeling, Left/Right swaps, leg permutations
/// (sign of the permutation) and, by default, signed sink permutations.
LeibnizNormalForm normal_form(const LeibnizGraph& g,
                              SinkSymmetry symmetry = SinkSymmetry::Antisymmetric);

/// Replaces the Jacobiator vertex by a -> (x, y), b -> (a, z) over cyclic
/// (x, y, z) of its legs; every edge into it lands on a or on b.
std::vector<KontsevichGraph> expansion_terms(const LeibnizGraph& g);
KontsevichSum expand_leibniz(const LeibnizGraph& g,
                             SinkSymmetry symmetry = SinkSymmetry::Antisymmetric);

/// Leibniz graphs whose expansion can contain t: one per wedge b with an edge to
/// another wedge a (a not pointing back at b), with a and b fused into the
/// Jacobiator with legs (a.left, a.right, other target of b). Normalized, nonzero.
std::vector<LeibnizGraph> leibniz_candidates(const KontsevichGraph& t);

struct LeibnizGeneration {
  std::vector<LeibnizGraph> graphs;          // sorted, normalized, sign +1
  std::vector<std::size_t> found_per_round;  // new Leibniz graphs per round
  std::size_t trivector_graphs_seen = 0;
};

struct GenerationOptions {
  int workers = 1;
  bool progress = false;  // per-round counts on std::cerr
};

/// Round 1 emits the candidates of every graph of t; round k+1 expands the
/// graphs found in round k and emits the candidates of every tri-vector graph
/// not seen before. Precondition: rounds >= 1.
LeibnizGeneration generate_leibniz(const KontsevichSum& t, int rounds,
                                   const GenerationOptions& options = {});

// Own line format: `m k  <wedge targets pairwise> ; J: t1 t2 t3  coeff`.
std::string format_leibniz(const LeibnizGraph& g, const Rational& c);
std::pair<LeibnizGraph, Rational> parse_leibniz(const std::string& line, int line_number = 0);
std::vector<std::pair<LeibnizGraph, Rational>> read_leibniz_list(std::istream& in);
void write_leibniz_list(std::ostream& out,
                        const std::vector<std::pair<LeibnizGraph, Rational>>& list);

/// Tolerant reader for externally produced Leibniz lists. Accepts the own
/// format above with any of `;`, `:`, `,`, `J`, `J:` used as separators, or
/// `m k  <2k wedge targets>  t1 t2 t3  coeff` without separators. Lines that
/// cannot be read are returned verbatim in `rejected` instead of throwing.
struct ImportResult {
  std::vector<std::pair<LeibnizGraph, Rational>> graphs;
  std::vector<std::string> rejected;
};
ImportResult import_leibniz_list(std::istream& in);

}  // namespace gck
