#include "gck/graph_complex.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gck/error.hpp"

namespace gck {

namespace {

// Parity of a permutation given as an index array, +1 or -1.
int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  }
  return sign;
}

Edge ordered(Edge e) { return e.a < e.b ? e : Edge{e.b, e.a}; }

// Relabeled, sorted edge list and the sign of the sorting permutation.
std::pair<std::vector<Edge>, int> sorted_relabeled(const std::vector<Edge>& edges,
                                                   std::span<const int> perm) {
  std::vector<Edge> mapped(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    mapped[i] = ordered({perm[edges[i].a], perm[edges[i].b]});
  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return mapped[x] < mapped[y]; });
  std::vector<Edge> sorted(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = mapped[order[i]];
  return {std::move(sorted), permutation_sign(order)};
}

// Colour refinement on the multigraph; returns an isomorphism-invariant rank per vertex.
std::vector<int> refine_colors(int n, const std::vector<int>& mult) {
  std::vector<int> color(n, 0);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) color[v] += mult[v * n + u];
  int classes = 0;
  while (true) {
    std::vector<std::vector<int>> sig(n);
    for (int v = 0; v < n; ++v) {
      sig[v].push_back(color[v]);
      std::vector<int> around;
      for (int u = 0; u < n; ++u)
        for (int k = 0; k < mult[v * n + u]; ++k) around.push_back(color[u]);
      std::sort(around.begin(), around.end());
      sig[v].insert(sig[v].end(), around.begin(), around.end());
    }
    auto distinct = sig;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int v = 0; v < n; ++v)
      color[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[v]) -
                                  distinct.begin());
    int now = static_cast<int>(distinct.size());
    if (now == classes) break;
    classes = now;
  }
  return color;
}

struct CanonicalSearch {
  int n;
  const std::vector<Edge>& edges;
  std::vector<int> mult;
  std::vector<int> cell_of_position;  // colour required at each new label
  std::vector<int> color;

  std::vector<int> order;  // order[p] = original vertex at new label p
  std::vector<char> used;

  bool have_best = false;
  std::vector<int> best_string;
  std::vector<int> best_order;
  int best_sign = 1;
  bool zero = false;

  std::vector<int> current_string;

  void run() {
    order.assign(n, -1);
    used.assign(n, 0);
    current_string.clear();
    descend(0);
  }

  // Sign of current prefix minus best prefix of the same length (lexicographic).
  int compare_prefix() const {
    for (std::size_t i = 0; i < current_string.size(); ++i) {
      if (current_string[i] != best_string[i]) return current_string[i] > best_string[i] ? 1 : -1;
    }
    return 0;
  }

  // Maximizes the column-major upper-triangle multiplicity string.
  void descend(int p) {
    if (p == n) {
      leaf();
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v] || color[v] != cell_of_position[p]) continue;
      std::size_t start = current_string.size();
      for (int q = 0; q < p; ++q) current_string.push_back(mult[order[q] * n + v]);
      if (!have_best || compare_prefix() >= 0) {
        used[v] = 1;
        order[p] = v;
        descend(p + 1);
        used[v] = 0;
        order[p] = -1;
      }
      current_string.resize(start);
    }
  }

  void leaf() {
    std::vector<int> perm(n);
    for (int p = 0; p < n; ++p) perm[order[p]] = p;
    int sign = sorted_relabeled(edges, perm).second;
    if (have_best && compare_prefix() == 0) {
      if (sign != best_sign) zero = true;
      return;
    }
    have_best = true;
    best_string = current_string;
    best_order = order;
    best_sign = sign;
    zero = false;
  }
};

}  // namespace

NonOrientedGraph::NonOrientedGraph(int vertices, std::vector<Edge> edges)
    : n_(vertices), edges_(std::move(edges)) {
  if (n_ < 0) throw InvalidGraph("negative vertex count");
  for (const auto& e : edges_) {
    if (e.a < 0 || e.b < 0 || e.a >= n_ || e.b >= n_)
      throw InvalidGraph("edge endpoint out of range");
    if (e.a == e.b) throw InvalidGraph("loop edge at vertex " + std::to_string(e.a + 1));
  }
}

std::vector<int> NonOrientedGraph::valencies() const {
  std::vector<int> val(n_, 0);
  for (const auto& e : edges_) {
    ++val[e.a];
    ++val[e.b];
  }
  return val;
}

bool NonOrientedGraph::is_admissible() const {
  auto val = valencies();
  return std::all_of(val.begin(), val.end(), [](int v) { return v >= 3; });
}

bool NonOrientedGraph::has_multi_edges() const {
  std::vector<Edge> sorted;
  sorted.reserve(edges_.size());
  for (const auto& e : edges_) sorted.push_back(ordered(e));
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

CanonicalGraph canonicalize(const NonOrientedGraph& g) {
  const int n = g.vertex_count();
  CanonicalSearch search{n, g.edges(), std::vector<int>(n * n, 0), {}, {}, {}, {}, false, {}, {}, 1,
                         false, {}};
  for (const auto& e : g.edges()) {
    ++search.mult[e.a * n + e.b];
    ++search.mult[e.b * n + e.a];
  }
  search.color = refine_colors(n, search.mult);
  auto sorted_colors = search.color;
  std::sort(sorted_colors.begin(), sorted_colors.end());
  search.cell_of_position = sorted_colors;
  search.run();

  std::vector<int> perm(n);
  for (int p = 0; p < n; ++p) perm[search.best_order[p]] = p;
  auto [edges, sign] = sorted_relabeled(g.edges(), perm);
  CanonicalGraph result;
  result.graph = NonOrientedGraph(n, std::move(edges));
  result.sign = sign;
  result.zero = search.zero || g.has_multi_edges();
  return result;
}

SignedGraph canonical_form(const NonOrientedGraph& g) {
  auto c = canonicalize(g);
  return {std::move(c.graph), c.sign};
}

bool is_zero_graph(const NonOrientedGraph& g) { return canonicalize(g).zero; }

NonOrientedGraph relabel(const NonOrientedGraph& g, std::span<const int> perm) {
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const auto& e : g.edges()) edges.push_back({perm[e.a], perm[e.b]});
  return NonOrientedGraph(g.vertex_count(), std::move(edges));
}

int induced_edge_sign(const NonOrientedGraph& g, std::span<const int> perm) {
  std::vector<int> identity(perm.size());
  std::iota(identity.begin(), identity.end(), 0);
  auto [mapped, mapped_sign] = sorted_relabeled(g.edges(), perm);
  auto [original, original_sign] = sorted_relabeled(g.edges(), identity);
  if (mapped != original) return 0;
  return mapped_sign * original_sign;
}

void GraphSum::add(const NonOrientedGraph& g, const Rational& c) {
  if (c == 0) return;
  auto canon = canonicalize(g);
  if (canon.zero) return;
  add_canonical(canon.graph, canon.sign > 0 ? c : Rational(-c));
}

void GraphSum::add_canonical(const NonOrientedGraph& g, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GraphSum& GraphSum::operator+=(const GraphSum& other) {
  for (const auto& [g, c] : other.terms_) add_canonical(g, c);
  return *this;
}

GraphSum GraphSum::operator*(const Rational& c) const {
  GraphSum out;
  if (c == 0) return out;
  for (const auto& [g, coeff] : terms_) out.terms_.emplace(g, coeff * c);
  return out;
}

GraphSum reduce(std::span<const RawTerm> terms) {
  GraphSum out;
  for (const auto& t : terms)
    out.add(t.graph.graph, t.graph.sign > 0 ? t.coefficient : Rational(-t.coefficient));
  return out;
}

namespace {

// Blow-ups of every vertex of g, coefficient c; `all_masks` keeps uni-valent ends.
void blow_up(const NonOrientedGraph& g, const Rational& c, bool all_masks,
             std::vector<RawTerm>& out) {
  const int n = g.vertex_count();
  const auto& edges = g.edges();
  for (int v = 0; v < n; ++v) {
    std::vector<int> incident;
    for (int i = 0; i < g.edge_count(); ++i)
      if (edges[i].a == v || edges[i].b == v) incident.push_back(i);
    const int d = static_cast<int>(incident.size());
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      int moved = std::popcount(mask);
      if (!all_masks && (moved < 1 || moved > d - 1)) continue;
      std::vector<Edge> next;
      next.reserve(edges.size() + 1);
      next.push_back({v, n});
      next.insert(next.end(), edges.begin(), edges.end());
      for (int j = 0; j < d; ++j) {
        if (!(mask & (1u << j))) continue;
        Edge& e = next[incident[j] + 1];
        if (e.a == v) e.a = n; else e.b = n;
      }
      out.push_back({{NonOrientedGraph(n + 1, std::move(next)), 1}, c});
    }
  }
}

// Graph g with a uni-valent antenna attached at every vertex, new edge first.
void antennas(const NonOrientedGraph& g, const Rational& c, std::vector<RawTerm>& out) {
  const int n = g.vertex_count();
  for (int v = 0; v < n; ++v) {
    std::vector<Edge> next;
    next.push_back({v, n});
    next.insert(next.end(), g.edges().begin(), g.edges().end());
    out.push_back({{NonOrientedGraph(n + 1, std::move(next)), 1}, c});
  }
}

}  // namespace

GraphSum differential(std::span<const RawTerm> terms, const DifferentialOptions& options) {
  std::vector<RawTerm> raw;
  for (const auto& t : terms) {
    Rational c = t.graph.sign > 0 ? t.coefficient : Rational(-t.coefficient);
    if (c != 0) blow_up(t.graph.graph, c, false, raw);
  }
  GraphSum filtered = reduce(raw);
  if (options.debug_univalent) {
    std::vector<RawTerm> full;
    for (const auto& t : terms) {
      Rational c = t.graph.sign > 0 ? t.coefficient : Rational(-t.coefficient);
      if (c == 0) continue;
      blow_up(t.graph.graph, c, true, full);
      antennas(t.graph.graph, Rational(-2 * c), full);
    }
    if (!(reduce(full) == filtered))
      throw std::logic_error("uni-valent blow-up terms failed to cancel");
  }
  return filtered;
}

GraphSum differential(const GraphSum& s, const DifferentialOptions& options) {
  std::vector<RawTerm> raw;
  raw.reserve(s.size());
  for (const auto& [g, c] : s.terms()) raw.push_back({{g, 1}, c});
  return differential(raw, options);
}

bool is_cocycle(const GraphSum& s) { return differential(s).empty(); }

RawTerm parse_graph_line(const std::string& line, int line_number) {
  std::vector<std::pair<std::string, int>> tokens;
  {
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos == line.size()) break;
      std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      tokens.emplace_back(line.substr(start, pos - start), static_cast<int>(start) + 1);
    }
  }
  auto integer = [&](std::size_t i) {
    const auto& [text, col] = tokens[i];
    try {
      std::size_t used = 0;
      int v = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + text + "'", line_number, col);
    }
  };
  if (tokens.size() < 3) throw ParseError("expected `n m  edges  coefficient`", line_number, 1);
  int n = integer(0);
  int m = integer(1);
  if (n < 0 || m < 0) throw ParseError("negative count", line_number, tokens[0].second);
  if (tokens.size() != static_cast<std::size_t>(2 * m + 3))
    throw ParseError("expected " + std::to_string(2 * m + 3) + " tokens, found " +
                         std::to_string(tokens.size()),
                     line_number, tokens.back().second);
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    int a = integer(2 + 2 * i);
    int b = integer(3 + 2 * i);
    if (a < 1 || a > n || b < 1 || b > n)
      throw ParseError("vertex label out of range 1.." + std::to_string(n), line_number,
                       tokens[2 + 2 * i].second);
    if (a == b) throw ParseError("loop edge", line_number, tokens[2 + 2 * i].second);
    edges.push_back({a - 1, b - 1});
  }
  Rational c;
  try {
    c = parse_rational(tokens.back().first);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_number, tokens.back().second);
  }
  return {{NonOrientedGraph(n, std::move(edges)), 1}, c};
}

std::vector<RawTerm> read_graph_terms(std::istream& in) {
  std::vector<RawTerm> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_graph_line(line, number));
  }
  return out;
}

std::vector<RawTerm> parse_graph_terms(const std::string& text) {
  std::istringstream in(text);
  return read_graph_terms(in);
}

std::string format_graph_line(const NonOrientedGraph& g, const Rational& c) {
  std::string s = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "  ";
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    if (i) s += ' ';
    s += std::to_string(e.a + 1) + " " + std::to_string(e.b + 1);
  }
  if (!g.edges().empty()) s += "  ";
  s += to_string(c);
  return s;
}

void write_graph_sum(std::ostream& out, const GraphSum& s) {
  for (const auto& [g, c] : s.terms()) out << format_graph_line(g, c) << '\n';
}

namespace graphs {

NonOrientedGraph tetrahedron() {
  return NonOrientedGraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

NonOrientedGraph wheel(int spokes) {
  std::vector<Edge> edges;
  for (int i = 1; i <= spokes; ++i) edges.push_back({0, i});
  for (int i = 1; i <= spokes; ++i) {
    int j = i == spokes ? 1 : i + 1;
    edges.push_back(ordered({i, j}));
  }
  std::sort(edges.begin(), edges.end());
  return NonOrientedGraph(spokes + 1, std::move(edges));
}

NonOrientedGraph pentagon_companion() {
  return NonOrientedGraph(
      6, {{0, 1}, {0, 2}, {0, 5}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
}

GraphSum pentagon_wheel_cocycle() {
  GraphSum s;
  s.add(wheel(5), 1);
  s.add(pentagon_companion(), Rational(5, 2));
  return s;
}

}  // namespace graphs

}  // namespace gck
