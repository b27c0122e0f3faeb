#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gck/error.hpp"
#include "gck/evaluate.hpp"
#include "gck/operad.hpp"

using namespace gck;

namespace {

const char* const q3_rows = "0 1 2 4 2 5 2 3   1\n0 3 1 4 2 5 2 3   -3\n0 3 4 5 1 2 2 4   -3\n";

std::vector<EncodedTerm> read_data_table(const std::string& name) {
  std::ifstream in(std::string(GCK_DATA_DIR) + "/" + name);
  REQUIRE(in);
  return read_table(in);
}

DifferentialPolynomial read_data_formula(const std::string& name) {
  std::ifstream in(std::string(GCK_DATA_DIR) + "/" + name);
  REQUIRE(in);
  return parse_latex_formula(in);
}

KontsevichSum random_sum(std::mt19937_64& rng, int terms, int k) {
  KontsevichSum s;
  std::uniform_int_distribution<int> t(0, 1 + k);
  for (int n = 0; n < terms; ++n) {
    std::vector<Wedge> w;
    for (int i = 0; i < k; ++i) {
      int a, b;
      do a = t(rng);
      while (a == 2 + i);
      do b = t(rng);
      while (b == 2 + i || b == a);
      w.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
    }
    s.add(KontsevichGraph(2, w), random_rational(rng));
  }
  return s;
}

std::vector<Polynomial> xy() { return {Polynomial::variable(2, 0), Polynomial::variable(2, 1)}; }

Polynomial monomial(int a, int b) {
  Polynomial p(2);
  p.add_term({a, b}, 1);
  return p;
}

}  // namespace

TEST_CASE("Poisson structures") {
  auto x = Polynomial::variable(3, 0);
  auto P = poisson::nambu3(Polynomial::constant(3, 1), x * x);
  CHECK(P.verify_jacobi());
  CHECK(P.at(1, 2) == x * Rational(2));
  CHECK(P.at(2, 1) == -(x * Rational(2)));
  std::vector<Polynomial> bad(4, Polynomial(2));
  bad[1] = Polynomial::constant(2, 1);
  CHECK_THROWS_AS(PoissonStructure(2, bad), std::invalid_argument);
  std::mt19937_64 rng(1);
  for (const std::string f : {"two_dim", "nambu3", "sum4"}) {
    auto R = poisson::random(f, rng);
    CHECK(R.verify_jacobi());
    CHECK(R.jacobi_verified());
  }
  CHECK(poisson::random("sum4", rng).dimension() == 4);
}

TEST_CASE("the wedge is the Poisson bracket") {
  auto rho = Polynomial::constant(2, 1) + monomial(2, 0);
  auto P = poisson::two_dim(rho);
  KontsevichSum w;
  w.add(wedge_graph(), 1);
  // {x, y} = ϱ
  CHECK(eval_numeric(w, P, {3, 5}, xy()) == 10);
  CHECK(eval_numeric(w, P, {3, 5}, {xy()[1], xy()[0]}) == -10);
}

TEST_CASE("formula of the wedge, of the first tetrahedral graph and of the wheel") {
  KontsevichSum w;
  w.add(wedge_graph(), 1);
  auto f = to_formula(w);
  REQUIRE(f.terms.size() == 1);
  CHECK(format_latex(f.terms[0]) == "1 \\mathcal{P}^{ij} \\partial_{i} f \\partial_{j} g");
  CHECK(format_machine(f.terms[0]) == "1 ; dP[i,j|] ; df[i] ; dg[j]");

  KontsevichSum t;
  t.add(parse_encoding("0 1 2 4 2 5 2 3   1").graph, 1);
  auto ft = to_formula(t);
  REQUIRE(ft.terms.size() == 1);
  CHECK(format_latex(ft.terms[0]) ==
        "1 \\partial_{k} \\partial_{m} \\partial_{p} \\mathcal{P}^{ij} \\partial_{q} \\mathcal{P}^{k\\ell} "
        "\\partial_{\\ell} \\mathcal{P}^{mn} \\partial_{n} \\mathcal{P}^{pq} \\partial_{i} f \\partial_{j} g");
  CHECK(format_machine(ft.terms[0]) == "1 ; dP[i,j|k,m,p] ; dP[k,l|q] ; dP[m,n|l] ; dP[p,q|n] ; df[i] ; dg[j]");

  KontsevichSum wheel;
  wheel.add(parse_encoding("0 1 2 4 2 5 2 6 2 7 2 3   2").graph, 2);
  auto fw = to_formula(wheel);
  REQUIRE(fw.terms.size() == 1);
  CHECK(format_latex(fw.terms[0]) ==
        "2 \\partial_{k} \\partial_{m} \\partial_{p} \\partial_{r} \\partial_{t} \\mathcal{P}^{ij} "
        "\\partial_{v} \\mathcal{P}^{k\\ell} \\partial_{\\ell} \\mathcal{P}^{mn} \\partial_{n} \\mathcal{P}^{pq} "
        "\\partial_{q} \\mathcal{P}^{rs} \\partial_{s} \\mathcal{P}^{tv} \\partial_{i} f \\partial_{j} g");
}

TEST_CASE("formula and numeric evaluation agree") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 25; ++trial) {
    auto s = random_sum(rng, 3, 2 + trial % 2);
    auto P = poisson::random("two_dim", rng);
    std::vector<Rational> pt{random_rational(rng), random_rational(rng)};
    std::vector<Polynomial> fg{random_polynomial(rng, 2, 3), random_polynomial(rng, 2, 3)};
    auto formula = to_formula(s);
    CHECK(eval_formula(formula, P, pt, fg) == eval_numeric(s, P, pt, fg));
    CHECK(graphs_of(formula) == s);
    // both text forms read back to the same graphs
    std::stringstream latex, machine;
    write_formula(latex, formula, false);
    write_formula(machine, formula, true);
    CHECK(graphs_of(parse_latex_formula(latex)) == s);
    CHECK(graphs_of(parse_machine_formula(machine)) == s);
  }
}

TEST_CASE("skew flows change sign under f <-> g") {
  std::mt19937_64 rng(2);
  auto q3 = sum_of(parse_table(q3_rows));
  for (int trial = 0; trial < 5; ++trial) {
    auto s = skew_symmetrize(random_sum(rng, 2, 3));
    for (const auto* q : {&s, &q3}) {
      auto P = poisson::random("two_dim", rng);
      std::vector<Rational> pt{random_rational(rng), random_rational(rng)};
      auto f = random_polynomial(rng, 2, 3), g = random_polynomial(rng, 2, 3);
      CHECK(eval_numeric(*q, P, pt, {f, g}) == -eval_numeric(*q, P, pt, {g, f}));
    }
  }
}

TEST_CASE("frozen values of the pentagon-wheel flow") {
  auto q5 = sum_of(read_data_table("q5_table.txt"));
  auto rho = Polynomial::constant(2, 1) + monomial(2, 0);
  auto P = poisson::two_dim(rho);
  CHECK(eval_numeric(q5, P, {0, 0}, xy()) == 0);
  CHECK(eval_formula(to_formula(q5), P, {0, 0}, xy()) == 0);
  auto P2 = poisson::two_dim(monomial(2, 3) + monomial(4, 2));
  CHECK(eval_numeric(q5, P2, {Rational(1, 2), Rational(1, 3)}, xy()) == Rational(2905, 2834352));
}

TEST_CASE("index hygiene and parse errors") {
  std::istringstream twice("1 \\mathcal{P}^{ij} \\partial_{i} f \\partial_{i} g\n");
  CHECK_THROWS_AS(graphs_of(parse_latex_formula(twice)), ParseError);
  std::istringstream dangling("1 \\mathcal{P}^{ij} \\partial_{i} f \\partial_{k} g\n");
  CHECK_THROWS_AS(graphs_of(parse_latex_formula(dangling)), ParseError);
  std::istringstream garbage("1 \\mathcal{Q}^{ij} f g\n");
  CHECK_THROWS_AS(parse_latex_formula(garbage), ParseError);
  std::istringstream machine("1 ; dP[i,j|] ; df[i\n");
  CHECK_THROWS_AS(parse_machine_formula(machine), ParseError);
  // the grouped-derivative style is accepted
  std::istringstream grouped("\\partial_{k}\\mathcal{P}^{ij} \\partial_{i}\\mathcal{P}^{k\\ell}\\cdot \\partial_j f \\partial_\\ell g\n");
  auto f = parse_latex_formula(grouped);
  REQUIRE(f.terms.size() == 1);
  CHECK(graphs_of(f).size() == 1);
}

TEST_CASE("comparison with reference formulas") {
  auto q5 = sum_of(read_data_table("q5_table.txt"));
  auto reference = read_data_formula("q5_appendix.txt");
  CHECK(reference.terms.size() == 167);
  CHECK(check_against_appendix(q5, reference).empty());
  CHECK(check_against_appendix(sum_of(parse_table(q3_rows)), read_data_formula("q3_formula.txt")).empty());

  // one flipped sign shows up on both sides
  auto flipped = reference;
  flipped.terms[40].coefficient = -flipped.terms[40].coefficient;
  auto diff = check_against_appendix(q5, flipped);
  CHECK(diff.only_ours.size() + diff.only_reference.size() == 2);
  CHECK(diff.only_ours.size() == 1);
  // a missing term shows up once
  auto missing = reference;
  missing.terms.pop_back();
  auto d2 = check_against_appendix(q5, missing);
  CHECK(d2.only_ours.size() == 1);
}

TEST_CASE("tri-vector evaluation of the bracket on Poisson structures") {
  std::mt19937_64 rng(8);
  auto bracket = schouten_P_Q(sum_of(parse_table(q3_rows)));
  for (const std::string family : {"two_dim", "nambu3"}) {
    auto P = poisson::random(family, rng);
    std::vector<Rational> pt;
    for (int i = 0; i < P.dimension(); ++i) pt.push_back(random_rational(rng));
    std::vector<Polynomial> f;
    for (int i = 0; i < 3; ++i) f.push_back(random_polynomial(rng, P.dimension(), 2));
    CHECK(eval_numeric(bracket, P, pt, f) == 0);
  }
}
