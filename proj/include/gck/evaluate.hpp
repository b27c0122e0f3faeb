#pragma once

// Graph sums as polydifferential operators: exact evaluation on polynomial
// Poisson structures and differential-polynomial formulas.

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "gck/kontsevich.hpp"
#include "gck/polynomial.hpp"

namespace gck {

/// Bi-vector P^{ij} on R^r with polynomial components.
class PoissonStructure {
 public:
  /// components[i * r + j]; throws std::invalid_argument unless P^{ij} = -P^{ji}.
  PoissonStructure(int dimension, std::vector<Polynomial> components);

  int dimension() const { return r_; }
  const Polynomial& at(int i, int j) const { return components_[i * r_ + j]; }
  bool jacobi_verified() const { return jacobi_verified_; }
  /// Symbolic check of Σ_cyclic P^{il} ∂_l P^{jk} = 0; sets the flag.
  bool verify_jacobi();

 private:
  int r_;
  std::vector<Polynomial> components_;
  bool jacobi_verified_ = false;
};

namespace poisson {
/// ϱ ∂_x ∧ ∂_y.
PoissonStructure two_dim(const Polynomial& rho);
/// P^{ij} = ε^{ijk} ϱ ∂_k a.
PoissonStructure nambu3(const Polynomial& rho, const Polynomial& a);
/// Block-diagonal sum on R^{r1 + r2}.
PoissonStructure direct_sum(const PoissonStructure& a, const PoissonStructure& b);
/// Seeded families with random rational cubic coefficients:
/// "two_dim", "nambu3", "sum4" (two_dim ⊕ two_dim).
PoissonStructure random(const std::string& family, std::mt19937_64& rng);
}  // namespace poisson

/// Value at `point` of the operator of g applied to functions[0..m-1].
Rational eval_numeric(const KontsevichGraph& g, const PoissonStructure& P,
                      const std::vector<Rational>& point, const std::vector<Polynomial>& functions);
/// Sum of the graph values. For an Antisymmetric sum every graph stands for its
/// signed sum over sink permutations, which is what gets evaluated.
Rational eval_numeric(const KontsevichSum& s, const PoissonStructure& P,
                      const std::vector<Rational>& point, const std::vector<Polynomial>& functions);

/// ∂_{lower} P^{upper} or, for a sink, ∂_{lower} of function `function`.
struct FormulaFactor {
  int function = -1;  // -1 for a copy of P
  std::vector<std::string> upper;
  std::vector<std::string> lower;
  bool operator==(const FormulaFactor&) const = default;
};

struct FormulaTerm {
  Rational coefficient;
  std::vector<FormulaFactor> factors;  // P factors first, then sinks in order
};

struct DifferentialPolynomial {
  int sinks = 2;
  std::vector<FormulaTerm> terms;
};

/// One term per graph, in key order. The internal vertices in label order
/// get the index pairs (i,j), (k,l), (m,n), (p,q), (r,s), (t,v) and then
/// (a7,b7), (a8,b8), ...; an index sits upper on its edge's source and lower
/// on its target; lower indices are listed in source-vertex order.
DifferentialPolynomial to_formula(const KontsevichSum& s);

/// `10 \partial_{t} \partial_{k} \mathcal{P}^{ij} ... \partial_{i} f \partial_{j} g`,
/// with l printed as \ell.
std::string format_latex(const FormulaTerm& t);
/// `coeff ; dP[i,j|k,m] ; ... ; df[i] ; dg[j]`.
std::string format_machine(const FormulaTerm& t);
void write_formula(std::ostream& out, const DifferentialPolynomial& f, bool machine);

/// Reads one term per non-empty line in the LaTeX style above; also accepts
/// grouped derivatives (\partial_{kmp}), unbraced single indices and \cdot.
DifferentialPolynomial parse_latex_formula(std::istream& in, int sinks = 2);
DifferentialPolynomial parse_machine_formula(std::istream& in, int sinks = 2);

/// Inverse of to_formula: each P factor becomes an internal vertex, in order.
/// Throws ParseError unless every index occurs once upper and once lower.
KontsevichSum graphs_of(const DifferentialPolynomial& f);

/// Exact value by summing over all index assignments (slow; a cross-check).
Rational eval_formula(const DifferentialPolynomial& f, const PoissonStructure& P,
                      const std::vector<Rational>& point, const std::vector<Polynomial>& functions);

struct AppendixDiff {
  std::vector<EncodedTerm> only_ours;       // our coefficient where the two differ
  std::vector<EncodedTerm> only_reference;  // the reference coefficient there
  bool empty() const { return only_ours.empty() && only_reference.empty(); }
};

/// Compares the normalized graph sums behind both sides, which is matching
/// modulo renaming of bound indices and reordering of commuting factors.
AppendixDiff check_against_appendix(const KontsevichSum& s, const DifferentialPolynomial& reference);

}  // namespace gck
