#pragma once

// Oriented Kontsevich graphs on m ordered sinks built from n wedges, their
// target-list encoding and normal form.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gck/detail/oriented_canon.hpp"
#include "gck/rational.hpp"

namespace gck {

/// Ordered (Left, Right) pair of edge targets issued from one wedge top.
struct Wedge {
  std::uint8_t left = 0;
  std::uint8_t right = 0;
  auto operator<=>(const Wedge&) const = default;
};

/// Sinks are 0..m-1, internal vertex m+i emits wedges()[i].
///
/// Ordering and equality look at (sinks, wedges) only; the sign is carried
/// alongside so that normalize() can report the parity it accumulated.
class KontsevichGraph {
 public:
  KontsevichGraph() = default;
  /// Throws InvalidGraph on an out-of-range target or an edge to itself.
  KontsevichGraph(int sinks, std::vector<Wedge> wedges, int sign = 1);

  int sinks() const { return sinks_; }
  int internal_count() const { return static_cast<int>(wedges_.size()); }
  int vertex_count() const { return sinks_ + internal_count(); }
  const std::vector<Wedge>& wedges() const { return wedges_; }
  int sign() const { return sign_; }

  KontsevichGraph with_sign(int sign) const;
  /// in-degree of every vertex, sinks first.
  std::vector<int> in_degrees() const;

  friend bool operator==(const KontsevichGraph& a, const KontsevichGraph& b) {
    return a.sinks_ == b.sinks_ && a.wedges_ == b.wedges_;
  }
  friend std::strong_ordering operator<=>(const KontsevichGraph& a, const KontsevichGraph& b) {
    if (auto c = a.sinks_ <=> b.sinks_; c != 0) return c;
    return a.wedges_ <=> b.wedges_;
  }

 private:
  int sinks_ = 0;
  std::vector<Wedge> wedges_;
  int sign_ = 1;
};

struct NormalForm {
  KontsevichGraph graph;  // carries the accumulated sign
  bool zero = false;      // graph equals minus itself
};

/// Minimal representative under internal relabeling and Left/Right swaps
/// (each swap flips the sign); with Antisymmetric also under sink permutations.
NormalForm normal_form(const KontsevichGraph& g, SinkSymmetry symmetry = SinkSymmetry::Fixed);
KontsevichGraph normalize(const KontsevichGraph& g);

/// Exchanges sink labels by `perm` (sink s becomes perm[s]); sign unchanged.
KontsevichGraph permute_sinks(const KontsevichGraph& g, const std::vector<int>& perm);

/// Rational combination of normalized Kontsevich graphs sharing one sink count.
class KontsevichSum {
 public:
  using Terms = std::map<KontsevichGraph, Rational>;

  explicit KontsevichSum(int sinks = 2, SinkSymmetry symmetry = SinkSymmetry::Fixed)
      : sinks_(sinks), symmetry_(symmetry) {}

  int sinks() const { return sinks_; }
  SinkSymmetry symmetry() const { return symmetry_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c·g (g's sign included) after normalization; zero graphs vanish.
  void add(const KontsevichGraph& g, const Rational& c);
  /// Adds c·g for g already normalized under this sum's symmetry, sign +1.
  void add_normalized(const KontsevichGraph& g, const Rational& c);
  Rational coefficient(const KontsevichGraph& g) const;

  KontsevichSum& operator+=(const KontsevichSum& other);
  KontsevichSum& operator-=(const KontsevichSum& other);
  KontsevichSum operator*(const Rational& c) const;
  bool operator==(const KontsevichSum& other) const {
    return sinks_ == other.sinks_ && terms_ == other.terms_;
  }

 private:
  int sinks_;
  SinkSymmetry symmetry_;
  Terms terms_;
};

/// s minus s with sinks 0 and 1 exchanged, normalized; no 1/2 factor.
KontsevichSum skew_symmetrize(const KontsevichSum& s);

/// One row of a graph table: a raw, unnormalized graph and its coefficient.
struct EncodedTerm {
  KontsevichGraph graph;
  Rational coefficient;
};

/// `t t t ... t   c`: 2n targets read pairwise, then the coefficient.
EncodedTerm parse_encoding(const std::string& line, int sinks = 2, int line_number = 0);
/// Targets joined by single spaces, three spaces, coefficient.
std::string format_encoding(const KontsevichGraph& g, const Rational& c);
/// Targets only, single-space separated.
std::string format_targets(const KontsevichGraph& g);

/// Reads a table; `#` lines are comments except `# m=<sinks> n=<internal>` headers,
/// which set the sink count for the following rows and check their size.
std::vector<EncodedTerm> read_table(std::istream& in);
std::vector<EncodedTerm> parse_table(const std::string& text);
void write_table(std::ostream& out, const std::vector<EncodedTerm>& rows);

KontsevichSum sum_of(const std::vector<EncodedTerm>& rows,
                     SinkSymmetry symmetry = SinkSymmetry::Fixed);
/// Normalized terms as table rows, in key order.
std::vector<EncodedTerm> rows_of(const KontsevichSum& s);

struct KontsevichGraphHash {
  std::size_t operator()(const KontsevichGraph& g) const noexcept;
};

}  // namespace gck
