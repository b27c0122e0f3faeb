#pragma once

// Sparse linear systems over Q and their exact elimination with Markowitz
// pivoting.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "gck/rational.hpp"

namespace gck {

/// Rows of (column, value) pairs plus a right-hand side. Stored entries are
/// never zero; columns inside a row are sorted.
class SparseRationalSystem {
 public:
  using Row = std::vector<std::pair<std::size_t, Rational>>;

  explicit SparseRationalSystem(std::size_t columns = 0) : columns_(columns) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t columns() const { return columns_; }
  std::size_t nonzeros() const;

  /// Duplicate columns are summed, zeros dropped. Returns the row index.
  std::size_t add_row(Row entries, Rational rhs = 0);
  const Row& row(std::size_t i) const { return rows_[i]; }
  const Rational& rhs(std::size_t i) const { return rhs_[i]; }
  void set_rhs(std::size_t i, Rational value) { rhs_[i] = std::move(value); }
  bool homogeneous() const;

  /// Residual of x in row i.
  Rational residual(std::size_t i, const std::vector<Rational>& x) const;

  /// `rows cols nnz`, then `i j p/q` per entry (0-based), then `rhs i p/q`
  /// for every nonzero right-hand side.
  void write(std::ostream& out) const;
  static SparseRationalSystem read(std::istream& in);

  bool operator==(const SparseRationalSystem&) const = default;

 private:
  std::size_t columns_;
  std::vector<Row> rows_;
  std::vector<Rational> rhs_;
};

/// Elimination runs in stages; a stage may pivot only on its columns and rows
/// (given as group ids). Whatever no stage allows is handled by a final stage
/// over everything.
struct EliminationStage {
  std::vector<int> column_groups;
  std::vector<int> row_groups;
};

struct EliminationOptions {
  std::vector<int> column_group;  // per column, empty = all group 0
  std::vector<int> row_group;     // per row, empty = all group 0
  std::vector<EliminationStage> stages;
  std::function<void(std::size_t pivots, std::size_t active_rows, std::size_t nnz)> progress;
  std::size_t progress_every = 5000;
};

struct EliminationResult {
  bool consistent = true;
  /// Original index of a row that reduced to 0 = nonzero.
  std::optional<std::size_t> certificate_row;
  std::vector<Rational> solution;  // free columns are 0
  std::size_t rank = 0;
  std::vector<std::size_t> pivots_per_stage;
  std::vector<std::size_t> free_columns;
};

/// Fraction-free Gaussian elimination. Each pivot minimizes the Markowitz count
/// (r-1)(c-1) over the stage's active block, ties broken by smallest row, then
/// smallest column.
EliminationResult eliminate(const SparseRationalSystem& system,
                            const EliminationOptions& options = {});

}  // namespace gck
