#include "gck/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gck {

Polynomial Polynomial::constant(int variables, const Rational& c) {
  Polynomial p(variables);
  p.add_term(Monomial(variables, 0), c);
  return p;
}

Polynomial Polynomial::variable(int variables, int i) {
  Polynomial p(variables);
  Monomial m(variables, 0);
  m.at(i) = 1;
  p.add_term(std::move(m), 1);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
  return d;
}

void Polynomial::add_term(Monomial m, const Rational& c) {
  if (static_cast<int>(m.size()) != vars_) throw std::invalid_argument("monomial size mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.vars_ != vars_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.vars_ != vars_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator-() const { return *this * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.vars_ != vars_) throw std::invalid_argument("variable count mismatch");
  Polynomial p(vars_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      Monomial m(vars_);
      for (int i = 0; i < vars_; ++i) m[i] = a[i] + b[i];
      p.add_term(std::move(m), ca * cb);
    }
  return p;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial p(vars_);
  if (c == 0) return p;
  p.terms_ = terms_;
  for (auto& [m, v] : p.terms_) v *= c;
  return p;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial p(vars_);
  for (const auto& [m, c] : terms_) {
    if (m.at(i) == 0) continue;
    Monomial d = m;
    --d[i];
    p.add_term(std::move(d), c * m[i]);
  }
  return p;
}

Rational Polynomial::evaluate(const std::vector<Rational>& point) const {
  if (static_cast<int>(point.size()) != vars_) throw std::invalid_argument("point dimension mismatch");
  Rational s = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < vars_; ++i)
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    s += t;
  }
  return s;
}

Polynomial Polynomial::embed(int variables, int shift) const {
  if (shift < 0 || shift + vars_ > variables) throw std::invalid_argument("bad embedding");
  Polynomial p(variables);
  for (const auto& [m, c] : terms_) {
    Monomial e(variables, 0);
    std::copy(m.begin(), m.end(), e.begin() + shift);
    p.add_term(std::move(e), c);
  }
  return p;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    for (int i = 0; i < vars_; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += "x" + std::to_string(i + 1);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    Rational a = abs(c);
    std::string coeff = gck::to_string(a);
    std::string piece = mono.empty() ? coeff : (a == 1 ? mono : coeff + "*" + mono);
    if (s.empty())
      s = (c < 0 ? "-" : "") + piece;
    else
      s += (c < 0 ? " - " : " + ") + piece;
  }
  return s;
}

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

Polynomial random_polynomial(std::mt19937_64& rng, int variables, int degree) {
  Polynomial p(variables);
  Polynomial::Monomial m(variables, 0);
  // odometer over exponent vectors with total degree <= degree
  while (true) {
    p.add_term(m, random_rational(rng));
    int i = 0;
    for (; i < variables; ++i) {
      ++m[i];
      if (std::accumulate(m.begin(), m.end(), 0) <= degree) break;
      m[i] = 0;
    }
    if (i == variables) break;
  }
  return p;
}

}  // namespace gck
