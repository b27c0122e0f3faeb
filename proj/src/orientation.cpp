#include "gck/orientation.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "gck/error.hpp"

namespace gck {

std::vector<KontsevichGraph> admissible_orientations(const NonOrientedGraph& g) {
  const int n = g.vertex_count();
  const int edges = g.edge_count();
  if (edges > 30) throw GradingError("too many edges to enumerate orientations");
  std::vector<KontsevichGraph> out;
  std::vector<std::vector<std::uint8_t>> outs(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges); ++mask) {
    for (auto& o : outs) o.clear();
    bool ok = true;
    for (int i = 0; i < edges && ok; ++i) {
      auto [a, b] = g.edges()[i];
      int from = (mask >> i) & 1 ? b : a;
      int to = (mask >> i) & 1 ? a : b;
      outs[from].push_back(static_cast<std::uint8_t>(to + 2));
      ok = outs[from].size() <= 2;
    }
    if (!ok) continue;
    std::vector<int> deficient;
    for (int v = 0; v < n; ++v)
      for (std::size_t k = outs[v].size(); k < 2; ++k) deficient.push_back(v);
    if (deficient.size() != 2) continue;
    auto build = [&](int first_sink_vertex, int second_sink_vertex) {
      auto copy = outs;
      copy[first_sink_vertex].push_back(0);
      copy[second_sink_vertex].push_back(1);
      std::vector<Wedge> wedges(n);
      for (int v = 0; v < n; ++v) wedges[v] = {copy[v][0], copy[v][1]};
      out.emplace_back(2, std::move(wedges));
    };
    build(deficient[0], deficient[1]);
    if (deficient[0] != deficient[1]) build(deficient[1], deficient[0]);
  }
  return out;
}

KontsevichSum primitive(const KontsevichSum& s) {
  if (s.empty()) return s;
  Integer num = 0, den = 1;
  for (const auto& [g, c] : s.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(den, num);
  if (s.terms().begin()->second < 0) scale = -scale;
  return s * scale;
}

OrientationAnsatz orient(const GraphSum& gamma) {
  std::set<KontsevichSum::Terms> seen;
  std::vector<KontsevichSum> params;
  for (const auto& [graph, coefficient] : gamma.terms()) {
    const int n = graph.vertex_count();
    if (graph.edge_count() != 2 * n - 2 || !graph.is_admissible())
      throw GradingError("orient expects graphs on n vertices and 2n-2 edges, valencies >= 3");
    for (const auto& oriented : admissible_orientations(graph)) {
      KontsevichSum single(2);
      single.add(oriented, 1);
      auto skew = skew_symmetrize(single);
      if (skew.empty()) continue;
      auto p = primitive(skew);
      if (seen.insert(p.terms()).second) params.push_back(std::move(p));
    }
  }
  std::sort(params.begin(), params.end(),
            [](const KontsevichSum& a, const KontsevichSum& b) { return a.terms() < b.terms(); });
  return {std::move(params)};
}

int parameter_containing(const OrientationAnsatz& ansatz, const KontsevichGraph& g) {
  auto nf = normal_form(g);
  if (nf.zero) return -1;
  auto key = nf.graph.with_sign(1);
  for (std::size_t i = 0; i < ansatz.parameters.size(); ++i)
    if (ansatz.parameters[i].terms().count(key)) return static_cast<int>(i);
  return -1;
}

KontsevichSum combine(const OrientationAnsatz& ansatz, const std::vector<Rational>& lambda) {
  KontsevichSum out(2);
  for (std::size_t i = 0; i < ansatz.parameters.size() && i < lambda.size(); ++i)
    out += ansatz.parameters[i] * lambda[i];
  return out;
}

void write_ansatz(std::ostream& out, const OrientationAnsatz& ansatz) {
  for (std::size_t i = 0; i < ansatz.parameters.size(); ++i) {
    out << "parameter " << i + 1 << '\n';
    write_table(out, rows_of(ansatz.parameters[i]));
  }
}

OrientationAnsatz read_ansatz(std::istream& in) {
  OrientationAnsatz ansatz;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 9, "parameter") == 0) {
      ansatz.parameters.emplace_back(2);
      continue;
    }
    if (ansatz.parameters.empty()) throw ParseError("graph row outside a parameter block", number, 1);
    auto row = parse_encoding(line, 2, number);
    ansatz.parameters.back().add(row.graph, row.coefficient);
  }
  return ansatz;
}

}  // namespace gck
