#include "gck/factorize.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "gck/detail/parallel.hpp"
#include "gck/error.hpp"
#include "gck/operad.hpp"

namespace gck {

namespace {

using Column = std::vector<std::pair<KontsevichGraph, Rational>>;

Column column_of(const KontsevichSum& s, const Rational& scale) {
  Column c;
  c.reserve(s.size());
  for (const auto& [g, v] : s.terms()) c.emplace_back(g, v * scale);
  return c;
}

// Sorts the distinct row graphs of all columns and fills the system.
void fill(FactorizationSystem& out, const std::vector<Column>& columns,
          const KontsevichSum* rhs, bool progress) {
  std::vector<KontsevichGraph> keys;
  for (const auto& col : columns)
    for (const auto& [g, v] : col) keys.push_back(g);
  if (rhs)
    for (const auto& [g, v] : rhs->terms()) keys.push_back(g);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto index = [&](const KontsevichGraph& g) {
    return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), g) - keys.begin());
  };
  std::vector<SparseRationalSystem::Row> rows(keys.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [g, v] : columns[j]) rows[index(g)].emplace_back(j, v);
  std::vector<Rational> b(keys.size());
  if (rhs)
    for (const auto& [g, v] : rhs->terms()) b[index(g)] = v;
  out.system = SparseRationalSystem(columns.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out.system.add_row(std::move(rows[r]), b[r]);
  out.equations = std::move(keys);
  if (progress)
    std::cerr << "assembled " << out.system.rows() << " equations, " << out.system.columns()
              << " unknowns, " << out.system.nonzeros() << " nonzeros\n";
}

std::vector<Column> leibniz_columns(const std::vector<LeibnizGraph>& leibniz, int workers) {
  return detail::parallel_map(leibniz, workers, [](const LeibnizGraph& l) {
    return column_of(expand_leibniz(l), -1);
  });
}

}  // namespace

FactorizationSystem assemble(const OrientationAnsatz& ansatz,
                             const std::vector<LeibnizGraph>& leibniz,
                             const AssemblyOptions& options) {
  FactorizationSystem out;
  out.flow = ansatz.parameters;
  out.leibniz = leibniz;
  auto columns = detail::parallel_map(ansatz.parameters, options.workers,
                                      [](const KontsevichSum& p) {
                                        return column_of(schouten_P_Q(p), 1);
                                      });
  auto rest = leibniz_columns(leibniz, options.workers);
  columns.insert(columns.end(), std::make_move_iterator(rest.begin()),
                 std::make_move_iterator(rest.end()));
  fill(out, columns, nullptr, options.progress);
  return out;
}

FactorizationSystem assemble_fixed_flow(const KontsevichSum& q,
                                        const std::vector<LeibnizGraph>& leibniz,
                                        const AssemblyOptions& options) {
  FactorizationSystem out;
  out.leibniz = leibniz;
  // Σ μ_j L_j = [[P, q]], written as −Σ μ_j L_j = −[[P, q]].
  out.fixed_flow = q;
  KontsevichSum rhs = schouten_P_Q(q) * Rational(-1);
  fill(out, leibniz_columns(leibniz, options.workers), &rhs, options.progress);
  return out;
}

void pin(FactorizationSystem& sys, const KontsevichGraph& g, const Rational& value) {
  auto nf = normal_form(g);
  if (nf.zero) throw std::invalid_argument("pinned graph is a zero graph");
  const auto key = nf.graph.with_sign(1);
  for (std::size_t i = 0; i < sys.flow.size(); ++i) {
    Rational c = sys.flow[i].coefficient(key);
    if (c == 0) continue;
    // coefficient of g itself is sign · coefficient of its normal form
    sys.system.add_row({{i, c * nf.graph.sign()}}, value);
    return;
  }
  throw std::invalid_argument("pinned graph occurs in no parameter");
}

void pin_parameter(FactorizationSystem& sys, std::size_t index, const Rational& value) {
  if (index >= sys.flow.size()) throw std::out_of_range("no such parameter");
  sys.system.add_row({{index, Rational(1)}}, value);
}

SolveReport solve(const FactorizationSystem& sys, const SolveOptions& options) {
  const std::size_t nf = sys.flow.size();
  EliminationOptions e;
  e.column_group.assign(sys.system.columns(), 0);
  for (std::size_t i = 0; i < nf; ++i) e.column_group[i] = 1;
  e.row_group.assign(sys.system.rows(), 0);
  for (std::size_t r = sys.equations.size(); r < sys.system.rows(); ++r) e.row_group[r] = 1;
  e.stages = {{{0}, {0}}, {{1}, {0}}, {{0, 1}, {0, 1}}};
  if (options.progress)
    e.progress = [](std::size_t pivots, std::size_t active, std::size_t nnz) {
      std::cerr << "elimination: " << pivots << " pivots, " << active << " active rows, " << nnz
                << " nonzeros\n";
    };
  auto result = eliminate(sys.system, e);

  SolveReport report;
  report.consistent = result.consistent;
  report.rank = result.rank;
  report.flow_nullity = nf - result.pivots_per_stage[1];
  for (auto c : result.free_columns)
    if (c >= nf) ++report.free_leibniz;
  if (!result.consistent) {
    report.certificate_row = result.certificate_row;
    if (*result.certificate_row < sys.equations.size())
      report.certificate_graph = sys.equations[*result.certificate_row];
    return report;
  }
  auto& sol = report.solution;
  sol.lambda.assign(result.solution.begin(), result.solution.begin() + nf);
  sol.flow = sys.fixed_flow ? *sys.fixed_flow : combine({sys.flow}, sol.lambda);
  for (std::size_t j = 0; j < sys.leibniz.size(); ++j)
    if (const auto& v = result.solution[nf + j]; v != 0) sol.leibniz.emplace_back(sys.leibniz[j], v);
  return report;
}

KontsevichSum factorization_residual(const KontsevichSum& q, const LeibnizCombination& d,
                                     int workers) {
  KontsevichSum r = schouten_P_Q(q);
  auto parts = detail::parallel_map(d, workers, [](const std::pair<LeibnizGraph, Rational>& t) {
    return expand_leibniz(t.first) * t.second;
  });
  for (const auto& p : parts) r -= p;
  return r;
}

bool verify_factorization(const KontsevichSum& q, const LeibnizCombination& d, int workers) {
  return factorization_residual(q, d, workers).empty();
}

void write_solution(std::ostream& out, const FactorizationSystem& sys,
                    const FactorizationSolution& solution) {
  for (std::size_t i = 0; i < sys.flow.size(); ++i)
    out << "param " << format_targets(sys.flow[i].terms().begin()->first) << "   "
        << to_string(solution.lambda[i]) << '\n';
  for (const auto& [l, c] : solution.leibniz) out << "leibniz " << format_leibniz(l, c) << '\n';
}

LeibnizCombination read_solution_leibniz(std::istream& in) {
  LeibnizCombination out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 6, "param ") == 0) continue;
    if (line.compare(first, 8, "leibniz ") == 0) line = line.substr(first + 8);
    out.push_back(parse_leibniz(line, number));
  }
  return out;
}

}  // namespace gck
