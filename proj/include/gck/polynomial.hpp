#pragma once

// Sparse multivariate polynomials with rational coefficients.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "gck/rational.hpp"

namespace gck {

class Polynomial {
 public:
  using Monomial = std::vector<int>;  // exponent per variable

  explicit Polynomial(int variables = 0) : vars_(variables) {}
  static Polynomial constant(int variables, const Rational& c);
  /// The coordinate function x_i (0-based).
  static Polynomial variable(int variables, int i);

  int variables() const { return vars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(Monomial m, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator+(const Polynomial& o) const { return Polynomial(*this) += o; }
  Polynomial operator-(const Polynomial& o) const { return Polynomial(*this) -= o; }
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const = default;

  Polynomial derivative(int i) const;
  Rational evaluate(const std::vector<Rational>& point) const;
  /// The same polynomial in more variables, x_i becoming x_{i + shift}.
  Polynomial embed(int variables, int shift) const;

  /// e.g. `3/2*x1^2*x3 - x2 + 1`, variables numbered from 1.
  std::string to_string() const;

 private:
  int vars_;
  std::map<Monomial, Rational> terms_;
};

/// Small random rationals: numerator in [-max_num, max_num], denominator in [1, max_den].
Rational random_rational(std::mt19937_64& rng, int max_num = 9, int max_den = 5);
/// All monomials of degree <= degree with independent random coefficients.
Polynomial random_polynomial(std::mt19937_64& rng, int variables, int degree);

}  // namespace gck
