#pragma once

// The factorization problem [[P, Q(P)]] = ◊(P, [[P, P]]) as an exact sparse
// linear system in the flow parameters λ and Leibniz coefficients μ.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gck/leibniz.hpp"
#include "gck/orientation.hpp"
#include "gck/sparse_system.hpp"

namespace gck {

using LeibnizCombination = std::vector<std::pair<LeibnizGraph, Rational>>;

/// Columns: flow parameters first, Leibniz graphs after. Rows: one equation
/// per tri-vector class (sorted by key), pin rows appended at the end.
/// Row r < equations.size() reads Σ λ_i [[P, param_i]]_r − Σ μ_j L_j,r = rhs_r.
struct FactorizationSystem {
  SparseRationalSystem system;
  std::vector<KontsevichSum> flow;
  std::vector<LeibnizGraph> leibniz;
  std::vector<KontsevichGraph> equations;
  /// Set when the flow is fixed: the right-hand side is [[P, q]].
  std::optional<KontsevichSum> fixed_flow;

  std::size_t flow_columns() const { return flow.size(); }
  std::size_t pin_rows() const { return system.rows() - equations.size(); }
};

struct AssemblyOptions {
  int workers = 1;
  bool progress = false;  // counts on std::cerr
};

/// Throws GradingError if the parameters are not bi-vector sums.
FactorizationSystem assemble(const OrientationAnsatz& ansatz,
                             const std::vector<LeibnizGraph>& leibniz,
                             const AssemblyOptions& options = {});
/// Only Leibniz unknowns; the flow q is given.
FactorizationSystem assemble_fixed_flow(const KontsevichSum& q,
                                        const std::vector<LeibnizGraph>& leibniz,
                                        const AssemblyOptions& options = {});

/// Adds the row "coefficient of g in the flow = value". Throws
/// std::invalid_argument if g is a zero graph or in no parameter.
void pin(FactorizationSystem& sys, const KontsevichGraph& g, const Rational& value);
/// Adds the row λ_index = value. Throws std::out_of_range.
void pin_parameter(FactorizationSystem& sys, std::size_t index, const Rational& value);

struct FactorizationSolution {
  std::vector<Rational> lambda;
  KontsevichSum flow{2};
  LeibnizCombination leibniz;  // nonzero coefficients only, in column order
};

struct SolveReport {
  bool consistent = false;
  FactorizationSolution solution;
  std::size_t rank = 0;
  /// Dimension of the flow solutions of the homogeneous (unpinned) system.
  std::size_t flow_nullity = 0;
  std::size_t free_leibniz = 0;
  /// For an inconsistent system: the offending row and, if it is an
  /// equation row, its tri-vector graph.
  std::optional<std::size_t> certificate_row;
  std::optional<KontsevichGraph> certificate_graph;
};

struct SolveOptions {
  bool progress = false;
};

/// Exact elimination: Leibniz columns first, then the flow columns on the
/// homogeneous rows, then the pins. Free unknowns are set to zero.
SolveReport solve(const FactorizationSystem& sys, const SolveOptions& options = {});

/// [[P, q]] − Σ c_j expand(L_j), as a normalized tri-vector sum.
KontsevichSum factorization_residual(const KontsevichSum& q, const LeibnizCombination& d,
                                     int workers = 1);
/// True iff the residual is exactly empty.
bool verify_factorization(const KontsevichSum& q, const LeibnizCombination& d, int workers = 1);

// Solution dump: `param <first graph of the parameter> <λ>` per parameter,
// then `leibniz <leibniz line>` per nonzero Leibniz coefficient.
void write_solution(std::ostream& out, const FactorizationSystem& sys,
                    const FactorizationSolution& solution);
/// Reads the Leibniz part of a solution dump (and own-format Leibniz lines).
LeibnizCombination read_solution_leibniz(std::istream& in);

}  // namespace gck
