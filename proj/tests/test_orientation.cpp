#include <set>
#include <sstream>

#include "doctest.h"
#include "gck/error.hpp"
#include "gck/orientation.hpp"

using namespace gck;

namespace {

GraphSum single(const NonOrientedGraph& g) {
  GraphSum s;
  s.add(g, 1);
  return s;
}

// Every way to direct the edges of g and send two extra edges into the sinks
// so that each vertex issues exactly two edges.
std::set<KontsevichGraph> brute_orientations(const NonOrientedGraph& g) {
  const int n = g.vertex_count(), m = g.edge_count();
  std::set<KontsevichGraph> out;
  for (int s0 = 0; s0 < n; ++s0)
    for (int s1 = 0; s1 < n; ++s1)
      for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<std::vector<int>> targets(n);
        targets[s0].push_back(0);
        targets[s1].push_back(1);
        for (int e = 0; e < m; ++e) {
          auto [a, b] = g.edges()[e];
          if ((mask >> e) & 1) std::swap(a, b);
          targets[a].push_back(b + 2);
        }
        bool ok = true;
        for (const auto& t : targets) ok = ok && t.size() == 2;
        if (!ok) continue;
        std::vector<Wedge> w;
        for (const auto& t : targets)
          w.push_back({static_cast<std::uint8_t>(t[0]), static_cast<std::uint8_t>(t[1])});
        auto nf = normal_form(KontsevichGraph(2, w));
        if (!nf.zero) out.insert(nf.graph.with_sign(1));
      }
  return out;
}

std::set<KontsevichGraph> support(const OrientationAnsatz& a) {
  std::set<KontsevichGraph> s;
  for (const auto& p : a.parameters)
    for (const auto& [g, c] : p.terms()) s.insert(g);
  return s;
}

}  // namespace

TEST_CASE("tetrahedron: two parameters") {
  auto a = orient(single(graphs::tetrahedron()));
  REQUIRE(a.parameters.size() == 2);
  CHECK(a.parameters[0] == sum_of(parse_table("0 1 2 4 2 5 2 3   1\n")));
  CHECK(a.parameters[1] == sum_of(parse_table("0 3 1 5 2 3 2 4   1\n0 5 1 2 2 3 3 4   1\n")));
}

TEST_CASE("admissible orientations agree with brute force") {
  for (const auto& g : {graphs::tetrahedron(), graphs::wheel(5), graphs::pentagon_companion()}) {
    std::set<KontsevichGraph> ours;
    for (const auto& k : admissible_orientations(g)) {
      auto nf = normal_form(k);
      if (!nf.zero) ours.insert(nf.graph.with_sign(1));
    }
    CHECK(ours == brute_orientations(g));
  }
}

TEST_CASE("parameters are skew, primitive and have disjoint supports inside the orientations") {
  auto gamma = graphs::pentagon_wheel_cocycle();
  auto a = orient(gamma);
  CHECK(a.parameters.size() == 91);
  std::set<KontsevichGraph> all = brute_orientations(graphs::wheel(5));
  auto companion = brute_orientations(graphs::pentagon_companion());
  all.insert(companion.begin(), companion.end());
  std::size_t total = 0;
  for (const auto& p : a.parameters) {
    CHECK_FALSE(p.empty());
    CHECK(skew_symmetrize(p) == p * Rational(2));
    CHECK(primitive(p) == p);
    Integer content = 0;
    for (const auto& [g, c] : p.terms()) {
      CHECK(c.get_den() == 1);
      content = gcd(content, Integer(c.get_num()));
      CHECK(all.count(g) == 1);
    }
    CHECK(content == 1);
    CHECK(p.terms().begin()->second > 0);
    total += p.size();
  }
  CHECK(support(a).size() == total);
  for (const auto& p : a.parameters) {
    const auto& g = p.terms().begin()->first;
    CHECK(&a.parameters[parameter_containing(a, g)] == &p);
  }
}

TEST_CASE("empty input and grading errors") {
  CHECK(orient(GraphSum{}).parameters.empty());
  CHECK(orient(single(graphs::wheel(4))).parameters.empty());
  // the pentagon wheel alone has the right grading
  CHECK_NOTHROW(orient(single(graphs::wheel(5))));
  // the pentagon wheel with one rim chord: eleven edges on six vertices
  NonOrientedGraph chord(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 5}, {2, 3}, {3, 4}, {4, 5}, {1, 3}});
  GraphSum s;
  s.add(chord, 1);
  REQUIRE_FALSE(s.empty());
  CHECK_THROWS_AS(orient(s), GradingError);
}

TEST_CASE("combine and ansatz file round trip") {
  auto a = orient(single(graphs::tetrahedron()));
  auto q = combine(a, {1, -3});
  CHECK(q == sum_of(parse_table("0 1 2 4 2 5 2 3   1\n0 3 1 5 2 3 2 4   -3\n0 5 1 2 2 3 3 4   -3\n")));
  auto b = orient(graphs::pentagon_wheel_cocycle());
  std::stringstream io;
  write_ansatz(io, b);
  auto back = read_ansatz(io);
  REQUIRE(back.parameters.size() == b.parameters.size());
  for (std::size_t i = 0; i < b.parameters.size(); ++i) CHECK(back.parameters[i] == b.parameters[i]);
  std::istringstream bad("0 1 2 4 2 5 2 3   1\n");
  CHECK_THROWS_AS(read_ansatz(bad), ParseError);
}
