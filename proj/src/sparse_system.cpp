#include "gck/sparse_system.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "gck/error.hpp"

namespace gck {

std::size_t SparseRationalSystem::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

std::size_t SparseRationalSystem::add_row(Row entries, Rational rhs) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Row merged;
  merged.reserve(entries.size());
  for (auto& [c, v] : entries) {
    if (c >= columns_) throw std::out_of_range("column index out of range");
    if (!merged.empty() && merged.back().first == c)
      merged.back().second += v;
    else
      merged.emplace_back(c, std::move(v));
    if (merged.back().second == 0) merged.pop_back();
  }
  rows_.push_back(std::move(merged));
  rhs_.push_back(std::move(rhs));
  return rows_.size() - 1;
}

bool SparseRationalSystem::homogeneous() const {
  return std::all_of(rhs_.begin(), rhs_.end(), [](const Rational& q) { return q == 0; });
}

Rational SparseRationalSystem::residual(std::size_t i, const std::vector<Rational>& x) const {
  Rational s = -rhs_[i];
  for (const auto& [c, v] : rows_[i]) s += v * x[c];
  return s;
}

void SparseRationalSystem::write(std::ostream& out) const {
  out << rows_.size() << ' ' << columns_ << ' ' << nonzeros() << '\n';
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [c, v] : rows_[i]) out << i << ' ' << c << ' ' << to_string(v) << '\n';
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (rhs_[i] != 0) out << "rhs " << i << ' ' << to_string(rhs_[i]) << '\n';
}

SparseRationalSystem SparseRationalSystem::read(std::istream& in) {
  std::string line;
  int line_number = 0;
  std::size_t rows = 0, cols = 0, nnz = 0;
  bool header = false;
  std::vector<Row> entries;
  std::vector<Rational> rhs;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream s(line);
    if (!header) {
      if (!(s >> rows >> cols >> nnz)) throw ParseError("expected `rows cols nnz`", line_number, 1);
      header = true;
      entries.assign(rows, {});
      rhs.assign(rows, 0);
      continue;
    }
    std::string first, second, third, extra;
    if (!(s >> first >> second >> third) || (s >> extra))
      throw ParseError("expected three fields", line_number, 1);
    try {
      if (first == "rhs") {
        auto i = std::stoull(second);
        if (i >= rows) throw ParseError("row index out of range", line_number, 1);
        rhs[i] = parse_rational(third);
      } else {
        auto i = std::stoull(first), j = std::stoull(second);
        if (i >= rows || j >= cols) throw ParseError("index out of range", line_number, 1);
        entries[i].emplace_back(j, parse_rational(third));
        ++seen;
      }
    } catch (const std::logic_error&) {
      throw ParseError("malformed index", line_number, 1);
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_number, 1);
    }
  }
  if (!header) throw ParseError("missing header", line_number + 1, 1);
  if (seen != nnz) throw ParseError("entry count does not match header", line_number, 1);
  SparseRationalSystem sys(cols);
  for (std::size_t i = 0; i < rows; ++i) sys.add_row(std::move(entries[i]), std::move(rhs[i]));
  return sys;
}

namespace {

using Index = std::uint32_t;
using IRow = std::vector<std::pair<Index, Integer>>;

struct Candidate {
  std::size_t cost = std::numeric_limits<std::size_t>::max();
  Index row = 0, col = 0;
  bool found = false;
  void offer(std::size_t c, Index r, Index j) {
    if (!found || c < cost || (c == cost && (r < row || (r == row && j < col)))) {
      cost = c;
      row = r;
      col = j;
      found = true;
    }
  }
};

// Bucketed sets keyed by a count; count 0 is never stored.
class Buckets {
 public:
  void reset(std::size_t n) {
    key_.assign(n, 0);
    sets_.clear();
  }
  void set(Index i, std::size_t count) {
    if (key_[i] == count) return;
    if (key_[i] != 0) sets_[key_[i]].erase(i);
    key_[i] = count;
    if (count == 0) return;
    if (sets_.size() <= count) sets_.resize(count + 1);
    sets_[count].insert(i);
  }
  std::size_t key(Index i) const { return key_[i]; }
  std::size_t max_key() const { return sets_.empty() ? 0 : sets_.size() - 1; }
  const std::set<Index>& at(std::size_t k) const {
    static const std::set<Index> empty;
    return k < sets_.size() ? sets_[k] : empty;
  }

 private:
  std::vector<std::size_t> key_;
  std::vector<std::set<Index>> sets_;
};

class Eliminator {
 public:
  Eliminator(const SparseRationalSystem& sys, const EliminationOptions& options)
      : options_(options), n_cols_(sys.columns()) {
    const std::size_t n = sys.rows();
    rows_.resize(n);
    rhs_.resize(n);
    active_.assign(n, true);
    col_rows_.resize(n_cols_);
    col_done_.assign(n_cols_, false);
    for (std::size_t i = 0; i < n; ++i) {
      Integer den = sys.rhs(i).get_den();
      for (const auto& [c, v] : sys.row(i)) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
      IRow r;
      r.reserve(sys.row(i).size());
      for (const auto& [c, v] : sys.row(i)) {
        r.emplace_back(static_cast<Index>(c), Integer(v.get_num() * (den / v.get_den())));
        col_rows_[c].push_back(static_cast<Index>(i));
      }
      rows_[i] = std::move(r);
      rhs_[i] = sys.rhs(i).get_num() * (den / sys.rhs(i).get_den());
      make_primitive(static_cast<Index>(i));
      nnz_ += rows_[i].size();
      if (rows_[i].empty()) retire_empty(static_cast<Index>(i));
    }
    stamp_.assign(n, 0);
    single_row_.assign(n_cols_, 0);
  }

  EliminationResult run() {
    std::vector<EliminationStage> stages = options_.stages;
    stages.push_back({});  // final stage: everything
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const bool all = s + 1 == stages.size();
      begin_stage(stages[s], all);
      std::size_t count = 0;
      Candidate p;
      while ((p = find_pivot()).found) {
        pivot(p.row, p.col);
        ++count;
      }
      result_.pivots_per_stage.push_back(count);
    }
    result_.pivots_per_stage.pop_back();  // the catch-all stage is not reported
    if (!options_.stages.empty()) {
      // remaining pivots of the final stage are added to the last listed stage
      std::size_t listed = 0;
      for (auto k : result_.pivots_per_stage) listed += k;
      result_.pivots_per_stage.back() += pivots_.size() - listed;
    }
    back_substitute();
    return std::move(result_);
  }

 private:
  void make_primitive(Index r) {
    Integer g = abs(rhs_[r]);
    for (const auto& [c, v] : rows_[r]) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) return;
    }
    if (g <= 1) return;
    for (auto& [c, v] : rows_[r]) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(rhs_[r].get_mpz_t(), rhs_[r].get_mpz_t(), g.get_mpz_t());
  }

  void retire_empty(Index r) {
    active_[r] = false;
    if (rhs_[r] != 0 && result_.consistent) {
      result_.consistent = false;
      result_.certificate_row = r;
    }
  }

  bool contains(Index r, Index c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, Index x) { return e.first < x; });
    return it != row.end() && it->first == c;
  }

  // Active rows containing c; compacts the lazy column list as a side effect.
  const std::vector<Index>& column_rows(Index c) {
    auto& list = col_rows_[c];
    ++generation_;
    std::size_t w = 0;
    for (Index r : list) {
      if (!active_[r] || stamp_[r] == generation_ || !contains(r, c)) continue;
      stamp_[r] = generation_;
      list[w++] = r;
    }
    list.resize(w);
    return list;
  }

  void begin_stage(const EliminationStage& stage, bool all) {
    auto in = [](const std::vector<int>& groups, int g) {
      return std::find(groups.begin(), groups.end(), g) != groups.end();
    };
    col_ok_.assign(n_cols_, false);
    for (std::size_t c = 0; c < n_cols_; ++c) {
      int g = options_.column_group.empty() ? 0 : options_.column_group[c];
      col_ok_[c] = !col_done_[c] && (all || in(stage.column_groups, g));
    }
    row_ok_.assign(rows_.size(), false);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int g = options_.row_group.empty() ? 0 : options_.row_group[r];
      row_ok_[r] = active_[r] && (all || in(stage.row_groups, g));
    }
    row_count_.assign(rows_.size(), 0);
    col_count_.assign(n_cols_, 0);
    row_buckets_.reset(rows_.size());
    col_buckets_.reset(n_cols_);
    col_single_.clear();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!row_ok_[r]) continue;
      for (const auto& [c, v] : rows_[r])
        if (col_ok_[c]) {
          ++row_count_[r];
          ++col_count_[c];
        }
      row_buckets_.set(static_cast<Index>(r), row_count_[r]);
    }
    for (std::size_t c = 0; c < n_cols_; ++c) refresh_column(static_cast<Index>(c));
  }

  void refresh_column(Index c) {
    const std::size_t old = col_buckets_.key(c);
    const std::size_t now = col_ok_[c] ? col_count_[c] : 0;
    if (old == 1) col_single_.erase({single_row_[c], c});
    col_buckets_.set(c, now);
    if (now == 1) {
      for (Index r : column_rows(c))
        if (row_ok_[r]) {
          single_row_[c] = r;
          break;
        }
      col_single_.insert({single_row_[c], c});
    }
  }

  Candidate find_pivot() {
    Candidate best;
    // cost 0: a row or a column with a single eligible entry
    for (Index r : row_buckets_.at(1)) {
      for (const auto& e : rows_[r])
        if (col_ok_[e.first]) {
          best.offer(0, r, e.first);
          break;
        }
      break;
    }
    if (!col_single_.empty()) {
      auto [r, c] = *col_single_.begin();
      best.offer(0, r, c);
    }
    if (best.found) return best;
    const std::size_t kmax = std::max(row_buckets_.max_key(), col_buckets_.max_key());
    for (std::size_t k = 2; k <= kmax; ++k) {
      for (Index r : row_buckets_.at(k))
        for (const auto& e : rows_[r])
          if (col_ok_[e.first]) best.offer((k - 1) * (col_count_[e.first] - 1), r, e.first);
      for (Index c : col_buckets_.at(k))
        for (Index r : column_rows(c))
          if (row_ok_[r]) best.offer((row_count_[r] - 1) * (k - 1), r, c);
      if (best.found && best.cost < k * k) break;
    }
    return best;
  }

  void uncount(Index r) {
    if (!row_ok_[r]) return;
    for (const auto& e : rows_[r])
      if (col_ok_[e.first]) {
        --col_count_[e.first];
        touched_.push_back(e.first);
      }
    row_count_[r] = 0;
    row_buckets_.set(r, 0);
  }

  void recount(Index r) {
    if (!row_ok_[r]) return;
    std::size_t k = 0;
    for (const auto& e : rows_[r])
      if (col_ok_[e.first]) {
        ++col_count_[e.first];
        touched_.push_back(e.first);
        ++k;
      }
    row_count_[r] = k;
    row_buckets_.set(r, k);
  }

  void pivot(Index p, Index c) {
    const std::vector<Index> targets = [&] {
      std::vector<Index> t;
      for (Index r : column_rows(c))
        if (r != p) t.push_back(r);
      return t;
    }();
    uncount(p);
    active_[p] = false;
    row_ok_[p] = false;
    const IRow& prow = rows_[p];
    const Integer a = std::find_if(prow.begin(), prow.end(),
                                   [c](const auto& e) { return e.first == c; })
                          ->second;
    Integer g, fa, fb;
    IRow merged;
    for (Index r : targets) {
      uncount(r);
      auto& row = rows_[r];
      const Integer& b = std::find_if(row.begin(), row.end(),
                                      [c](const auto& e) { return e.first == c; })
                             ->second;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      fa = a / g;
      fb = b / g;
      // row <- fa*row - fb*prow
      merged.clear();
      merged.reserve(row.size() + prow.size());
      std::size_t i = 0, j = 0;
      nnz_ -= row.size();
      while (i < row.size() || j < prow.size()) {
        if (j == prow.size() || (i < row.size() && row[i].first < prow[j].first)) {
          merged.emplace_back(row[i].first, fa * row[i].second);
          ++i;
        } else if (i == row.size() || prow[j].first < row[i].first) {
          merged.emplace_back(prow[j].first, -fb * prow[j].second);
          col_rows_[prow[j].first].push_back(r);
          ++j;
        } else {
          Integer v = fa * row[i].second - fb * prow[j].second;
          if (v != 0) merged.emplace_back(row[i].first, std::move(v));
          ++i;
          ++j;
        }
      }
      rhs_[r] = fa * rhs_[r] - fb * rhs_[p];
      row.swap(merged);
      make_primitive(r);
      nnz_ += row.size();
      if (row.empty()) {
        row_ok_[r] = false;
        retire_empty(r);
      } else {
        recount(r);
      }
    }
    nnz_ -= prow.size();
    col_done_[c] = true;
    col_ok_[c] = false;
    col_rows_[c].clear();
    col_rows_[c].shrink_to_fit();
    touched_.push_back(c);
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
    for (Index t : touched_) refresh_column(t);
    touched_.clear();
    pivots_.emplace_back(p, c);
    if (options_.progress && pivots_.size() % options_.progress_every == 0)
      options_.progress(pivots_.size(), active_rows(), nnz_);
  }

  std::size_t active_rows() const {
    return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
  }

  void back_substitute() {
    result_.rank = pivots_.size();
    result_.solution.assign(n_cols_, 0);
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      auto [p, c] = *it;
      Rational s(rhs_[p]);
      Integer a;
      for (const auto& [j, v] : rows_[p]) {
        if (j == c)
          a = v;
        else if (result_.solution[j] != 0)
          s -= Rational(v) * result_.solution[j];
      }
      result_.solution[c] = s / Rational(a);
    }
    for (std::size_t c = 0; c < n_cols_; ++c)
      if (!col_done_[c]) result_.free_columns.push_back(c);
    if (options_.progress) options_.progress(pivots_.size(), active_rows(), nnz_);
  }

  const EliminationOptions& options_;
  std::size_t n_cols_;
  std::vector<IRow> rows_;
  std::vector<Integer> rhs_;
  std::vector<bool> active_, col_done_, row_ok_, col_ok_;
  std::vector<std::vector<Index>> col_rows_;
  std::vector<std::size_t> row_count_, col_count_;
  Buckets row_buckets_, col_buckets_;
  std::set<std::pair<Index, Index>> col_single_;
  std::vector<Index> single_row_;
  std::vector<Index> touched_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 0;
  std::vector<std::pair<Index, Index>> pivots_;
  std::size_t nnz_ = 0;
  EliminationResult result_;
};

}  // namespace

EliminationResult eliminate(const SparseRationalSystem& system, const EliminationOptions& options) {
  Eliminator e(system, options);
  return e.run();
}

}  // namespace gck
