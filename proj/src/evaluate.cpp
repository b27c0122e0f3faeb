#include "gck/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gck/error.hpp"

namespace gck {

PoissonStructure::PoissonStructure(int dimension, std::vector<Polynomial> components)
    : r_(dimension), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != r_ * r_)
    throw std::invalid_argument("expected r*r components");
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) {
      if (at(i, j).variables() != r_) throw std::invalid_argument("component in wrong variables");
      if (at(i, j) != -at(j, i)) throw std::invalid_argument("bi-vector is not skew-symmetric");
    }
}

bool PoissonStructure::verify_jacobi() {
  for (int i = 0; i < r_; ++i)
    for (int j = i + 1; j < r_; ++j)
      for (int k = j + 1; k < r_; ++k) {
        Polynomial s(r_);
        for (int l = 0; l < r_; ++l) {
          s += at(i, l) * at(j, k).derivative(l);
          s += at(j, l) * at(k, i).derivative(l);
          s += at(k, l) * at(i, j).derivative(l);
        }
        if (!s.is_zero()) return jacobi_verified_ = false;
      }
  return jacobi_verified_ = true;
}

namespace poisson {

PoissonStructure two_dim(const Polynomial& rho) {
  std::vector<Polynomial> c(4, Polynomial(2));
  c[1] = rho;
  c[2] = -rho;
  return PoissonStructure(2, std::move(c));
}

PoissonStructure nambu3(const Polynomial& rho, const Polynomial& a) {
  std::vector<Polynomial> c(9, Polynomial(3));
  for (int k = 0; k < 3; ++k) {
    int i = (k + 1) % 3, j = (k + 2) % 3;  // ε^{ijk} = +1
    Polynomial v = rho * a.derivative(k);
    c[i * 3 + j] = v;
    c[j * 3 + i] = -v;
  }
  return PoissonStructure(3, std::move(c));
}

PoissonStructure direct_sum(const PoissonStructure& a, const PoissonStructure& b) {
  const int r = a.dimension() + b.dimension();
  std::vector<Polynomial> c(r * r, Polynomial(r));
  for (int i = 0; i < a.dimension(); ++i)
    for (int j = 0; j < a.dimension(); ++j) c[i * r + j] = a.at(i, j).embed(r, 0);
  const int s = a.dimension();
  for (int i = 0; i < b.dimension(); ++i)
    for (int j = 0; j < b.dimension(); ++j) c[(s + i) * r + s + j] = b.at(i, j).embed(r, s);
  return PoissonStructure(r, std::move(c));
}

PoissonStructure random(const std::string& family, std::mt19937_64& rng) {
  if (family == "two_dim") return two_dim(random_polynomial(rng, 2, 3));
  if (family == "nambu3") {
    auto rho = random_polynomial(rng, 3, 3);
    auto a = random_polynomial(rng, 3, 3);
    return nambu3(rho, a);
  }
  if (family == "sum4") {
    auto a = two_dim(random_polynomial(rng, 2, 3));
    auto b = two_dim(random_polynomial(rng, 2, 3));
    return direct_sum(a, b);
  }
  throw std::invalid_argument("unknown Poisson family '" + family + "'");
}

}  // namespace poisson

namespace {

// Derivatives of the components of P and of the test functions at one point.
// Source ids: r*i + j for P^{ij}, r*r + f for function f.
class Jet {
 public:
  Jet(const PoissonStructure& P, const std::vector<Rational>& point,
      const std::vector<Polynomial>& functions)
      : P_(P), point_(point), functions_(functions), r_(P.dimension()) {
    if (static_cast<int>(point.size()) != r_) throw std::invalid_argument("point dimension mismatch");
    for (const auto& f : functions)
      if (f.variables() != r_) throw std::invalid_argument("function dimension mismatch");
  }

  int dimension() const { return r_; }

  /// lower must be sorted.
  const Rational& value(int source, const std::vector<int>& lower) {
    auto key = std::make_pair(source, lower);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    return values_.emplace(std::move(key), poly(source, lower).evaluate(point_)).first->second;
  }

  /// Dense ∂_{e1..ed} P^{ab} over (a, b, e1, ..., ed), row-major.
  const std::vector<Rational>& p_tensor(int d) {
    if (auto it = p_dense_.find(d); it != p_dense_.end()) return it->second;
    return p_dense_.emplace(d, dense(d + 2, [&](const std::vector<int>& idx) {
             std::vector<int> lower(idx.begin() + 2, idx.end());
             std::sort(lower.begin(), lower.end());
             return value(idx[0] * r_ + idx[1], lower);
           })).first->second;
  }

  /// Dense ∂_{e1..ed} functions[f].
  const std::vector<Rational>& f_tensor(int f, int d) {
    auto key = std::make_pair(f, d);
    if (auto it = f_dense_.find(key); it != f_dense_.end()) return it->second;
    if (f >= static_cast<int>(functions_.size())) throw std::invalid_argument("too few functions");
    return f_dense_.emplace(key, dense(d, [&](const std::vector<int>& idx) {
             std::vector<int> lower = idx;
             std::sort(lower.begin(), lower.end());
             return value(r_ * r_ + f, lower);
           })).first->second;
  }

 private:
  template <typename Fn>
  std::vector<Rational> dense(int rank, Fn fn) {
    std::size_t size = 1;
    for (int i = 0; i < rank; ++i) size *= r_;
    std::vector<Rational> out(size);
    std::vector<int> idx(rank, 0);
    for (std::size_t o = 0; o < size; ++o) {
      out[o] = fn(idx);
      for (int i = rank - 1; i >= 0; --i) {
        if (++idx[i] < r_) break;
        idx[i] = 0;
      }
    }
    return out;
  }

  const Polynomial& poly(int source, const std::vector<int>& lower) {
    auto key = std::make_pair(source, lower);
    auto it = polys_.find(key);
    if (it != polys_.end()) return it->second;
    Polynomial p;
    if (lower.empty()) {
      p = source < r_ * r_ ? P_.at(source / r_, source % r_) : functions_.at(source - r_ * r_);
    } else {
      std::vector<int> parent(lower.begin(), lower.end() - 1);
      p = poly(source, parent).derivative(lower.back());
    }
    return polys_.emplace(std::move(key), std::move(p)).first->second;
  }

  const PoissonStructure& P_;
  const std::vector<Rational>& point_;
  const std::vector<Polynomial>& functions_;
  int r_;
  std::map<std::pair<int, std::vector<int>>, Polynomial> polys_;
  std::map<std::pair<int, std::vector<int>>, Rational> values_;
  std::map<int, std::vector<Rational>> p_dense_;
  std::map<std::pair<int, int>, std::vector<Rational>> f_dense_;
};

struct Tensor {
  std::vector<int> idx;  // edge ids, row-major with idx[0] slowest
  std::vector<Rational> data;
};

bool all_zero(const Tensor& t) {
  return std::all_of(t.data.begin(), t.data.end(), [](const Rational& q) { return q == 0; });
}

Tensor contract(const Tensor& a, const Tensor& b, int r) {
  std::vector<int> out_idx, shared;
  for (int e : a.idx)
    (std::find(b.idx.begin(), b.idx.end(), e) == b.idx.end() ? out_idx : shared).push_back(e);
  for (int e : b.idx)
    if (std::find(a.idx.begin(), a.idx.end(), e) == a.idx.end()) out_idx.push_back(e);
  std::vector<int> all = out_idx;
  all.insert(all.end(), shared.begin(), shared.end());
  auto strides = [&](const std::vector<int>& of) {
    std::vector<std::size_t> s(all.size(), 0);
    std::size_t stride = 1;
    for (int k = static_cast<int>(of.size()) - 1; k >= 0; --k) {
      auto pos = std::find(all.begin(), all.end(), of[k]) - all.begin();
      s[pos] = stride;
      stride *= r;
    }
    return s;
  };
  const auto sa = strides(a.idx), sb = strides(b.idx), so = strides(out_idx);
  std::size_t out_size = 1;
  for (std::size_t k = 0; k < out_idx.size(); ++k) out_size *= r;
  Tensor out{out_idx, std::vector<Rational>(out_size)};
  std::vector<int> digit(all.size(), 0);
  std::size_t oa = 0, ob = 0, oo = 0;
  mpq_class t;
  while (true) {
    const auto& x = a.data[oa];
    const auto& y = b.data[ob];
    if (x != 0 && y != 0) {
      mpq_mul(t.get_mpq_t(), x.get_mpq_t(), y.get_mpq_t());
      mpq_add(out.data[oo].get_mpq_t(), out.data[oo].get_mpq_t(), t.get_mpq_t());
    }
    int k = static_cast<int>(all.size()) - 1;
    for (; k >= 0; --k) {
      oa += sa[k];
      ob += sb[k];
      oo += so[k];
      if (++digit[k] < r) break;
      oa -= sa[k] * r;
      ob -= sb[k] * r;
      oo -= so[k] * r;
      digit[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

std::size_t power(int r, std::size_t k) {
  std::size_t p = 1;
  while (k--) p *= r;
  return p;
}

// Greedy pairwise contraction: each step merges the two factors whose result is
// smallest (then whose loop is shortest).
Rational contract_all(std::vector<Tensor> factors, int r) {
  for (const auto& f : factors)
    if (all_zero(f)) return 0;
  while (true) {
    std::size_t best_i = 0, best_j = 0, best_out = 0, best_all = 0;
    bool found = false;
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (std::size_t j = i + 1; j < factors.size(); ++j) {
        std::size_t n_shared = 0;
        for (int e : factors[i].idx)
          n_shared += std::count(factors[j].idx.begin(), factors[j].idx.end(), e);
        if (n_shared == 0) continue;
        std::size_t n_all = factors[i].idx.size() + factors[j].idx.size() - n_shared;
        std::size_t n_out = n_all - n_shared;
        if (!found || n_out < best_out || (n_out == best_out && n_all < best_all)) {
          found = true;
          best_i = i;
          best_j = j;
          best_out = n_out;
          best_all = n_all;
        }
      }
    if (!found) break;
    Tensor merged = contract(factors[best_i], factors[best_j], r);
    if (all_zero(merged)) return 0;
    factors.erase(factors.begin() + best_j);
    factors[best_i] = std::move(merged);
  }
  Rational v = 1;
  for (const auto& f : factors) v *= f.data.at(0);
  return v;
}

// Edge id of slot s (0 = Left) of internal vertex i.
int edge_id(int i, int s) { return 2 * i + s; }

// Incoming edge ids per vertex, in source-vertex order, Left before Right.
std::vector<std::vector<int>> incoming(const KontsevichGraph& g) {
  std::vector<std::vector<int>> in(g.vertex_count());
  for (int i = 0; i < g.internal_count(); ++i) {
    in[g.wedges()[i].left].push_back(edge_id(i, 0));
    in[g.wedges()[i].right].push_back(edge_id(i, 1));
  }
  return in;
}

std::vector<Tensor> vertex_factors(const KontsevichGraph& g, Jet& jet,
                                   const std::vector<std::vector<int>>& in) {
  std::vector<Tensor> factors;
  const int m = g.sinks();
  for (int i = 0; i < g.internal_count(); ++i) {
    Tensor t;
    t.idx = {edge_id(i, 0), edge_id(i, 1)};
    t.idx.insert(t.idx.end(), in[m + i].begin(), in[m + i].end());
    t.data = jet.p_tensor(static_cast<int>(in[m + i].size()));
    factors.push_back(std::move(t));
  }
  return factors;
}

Rational eval_graph(const KontsevichGraph& g, Jet& jet, bool alternate) {
  const int m = g.sinks();
  const int r = jet.dimension();
  auto in = incoming(g);
  auto factors = vertex_factors(g, jet, in);
  if (!alternate) {
    for (int s = 0; s < m; ++s)
      factors.push_back({in[s], jet.f_tensor(s, static_cast<int>(in[s].size()))});
    return contract_all(std::move(factors), r);
  }
  // One joint sink factor: Σ_σ sign(σ) Π_s ∂_{in(s)} f_{σ(s)}.
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Tensor joint;
  for (int s = 0; s < m; ++s) joint.idx.insert(joint.idx.end(), in[s].begin(), in[s].end());
  joint.data.assign(power(r, joint.idx.size()), 0);
  do {
    int inversions = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) inversions += perm[a] > perm[b];
    Tensor term{{}, {Rational(inversions % 2 ? -1 : 1)}};
    for (int s = 0; s < m; ++s) {
      Tensor f{in[s], jet.f_tensor(perm[s], static_cast<int>(in[s].size()))};
      // outer product: no shared indices
      Tensor prod{term.idx, {}};
      prod.idx.insert(prod.idx.end(), f.idx.begin(), f.idx.end());
      prod.data.reserve(term.data.size() * f.data.size());
      for (const auto& x : term.data)
        for (const auto& y : f.data) prod.data.push_back(x * y);
      term = std::move(prod);
    }
    for (std::size_t k = 0; k < joint.data.size(); ++k) joint.data[k] += term.data[k];
  } while (std::next_permutation(perm.begin(), perm.end()));
  factors.push_back(std::move(joint));
  return contract_all(std::move(factors), r);
}

}  // namespace

Rational eval_numeric(const KontsevichGraph& g, const PoissonStructure& P,
                      const std::vector<Rational>& point, const std::vector<Polynomial>& functions) {
  Jet jet(P, point, functions);
  return eval_graph(g, jet, false) * g.sign();
}

Rational eval_numeric(const KontsevichSum& s, const PoissonStructure& P,
                      const std::vector<Rational>& point, const std::vector<Polynomial>& functions) {
  Jet jet(P, point, functions);
  const bool alternate = s.symmetry() == SinkSymmetry::Antisymmetric;
  Rational v = 0;
  for (const auto& [g, c] : s.terms()) v += c * eval_graph(g, jet, alternate);
  return v;
}

// ---------------------------------------------------------------------------
// Formulas

namespace {

std::pair<std::string, std::string> index_pair(int i) {
  static const char* names[][2] = {{"i", "j"}, {"k", "l"}, {"m", "n"},
                                   {"p", "q"}, {"r", "s"}, {"t", "v"}};
  if (i < 6) return {names[i][0], names[i][1]};
  return {"a" + std::to_string(i + 1), "b" + std::to_string(i + 1)};
}

const char* function_letters = "fgh";

std::string latex_index(const std::string& name) { return name == "l" ? "\\ell" : name; }

}  // namespace

DifferentialPolynomial to_formula(const KontsevichSum& s) {
  DifferentialPolynomial out;
  out.sinks = s.sinks();
  for (const auto& [g, c] : s.terms()) {
    const int m = g.sinks();
    std::vector<FormulaFactor> by_vertex(g.vertex_count());
    for (int v = 0; v < m; ++v) by_vertex[v].function = v;
    for (int i = 0; i < g.internal_count(); ++i) {
      auto [a, b] = index_pair(i);
      by_vertex[m + i].upper = {a, b};
      by_vertex[g.wedges()[i].left].lower.push_back(a);
      by_vertex[g.wedges()[i].right].lower.push_back(b);
    }
    FormulaTerm t{c, {}};
    for (int v = m; v < g.vertex_count(); ++v) t.factors.push_back(by_vertex[v]);
    for (int v = 0; v < m; ++v) t.factors.push_back(by_vertex[v]);
    out.terms.push_back(std::move(t));
  }
  return out;
}

std::string format_latex(const FormulaTerm& t) {
  std::string s = to_string(t.coefficient);
  for (const auto& f : t.factors) {
    for (const auto& l : f.lower) s += " \\partial_{" + latex_index(l) + "}";
    if (f.function < 0) {
      s += " \\mathcal{P}^{";
      for (const auto& u : f.upper) s += latex_index(u);
      s += "}";
    } else {
      s += ' ';
      s += function_letters[f.function];
    }
  }
  return s;
}

std::string format_machine(const FormulaTerm& t) {
  std::string s = to_string(t.coefficient);
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
  };
  for (const auto& f : t.factors) {
    s += " ; ";
    if (f.function < 0)
      s += "dP[" + join(f.upper) + "|" + join(f.lower) + "]";
    else
      s += std::string("d") + function_letters[f.function] + "[" + join(f.lower) + "]";
  }
  return s;
}

void write_formula(std::ostream& out, const DifferentialPolynomial& f, bool machine) {
  for (const auto& t : f.terms) out << (machine ? format_machine(t) : format_latex(t)) << '\n';
}

namespace {

int function_index(char c) {
  const char* p = std::strchr(function_letters, c);
  return p && c ? static_cast<int>(p - function_letters) : -1;
}

class LatexLine {
 public:
  LatexLine(const std::string& s, int line) : s_(s), line_(line) {}

  FormulaTerm parse() {
    FormulaTerm t{1, {}};
    skip();
    parse_coefficient(t.coefficient);
    std::vector<std::string> pending;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      if (eat("\\partial_")) {
        if (eat("{")) {
          while (!eat("}")) {
            if (pos_ >= s_.size()) fail("unterminated index group");
            pending.push_back(index());
          }
        } else {
          pending.push_back(index());
        }
      } else if (eat("\\mathcal{P}^{")) {
        FormulaFactor f;
        while (!eat("}")) {
          if (pos_ >= s_.size()) fail("unterminated upper indices");
          f.upper.push_back(index());
        }
        if (f.upper.size() != 2) fail("P needs two upper indices");
        f.lower = std::move(pending);
        pending.clear();
        t.factors.push_back(std::move(f));
      } else if (function_index(s_[pos_]) >= 0) {
        FormulaFactor f;
        f.function = function_index(s_[pos_++]);
        f.lower = std::move(pending);
        pending.clear();
        t.factors.push_back(std::move(f));
      } else {
        fail("unexpected input");
      }
    }
    if (!pending.empty()) fail("derivative without an operand");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '&' || s_[pos_] == '.') {
        ++pos_;
      } else if (eat("\\cdot") || eat("\\\\")) {
      } else {
        break;
      }
    }
  }

  bool eat(const char* token) {
    std::size_t n = std::strlen(token);
    if (s_.compare(pos_, n, token) != 0) return false;
    pos_ += n;
    return true;
  }

  std::string index() {
    skip_spaces();
    if (eat("\\ell")) return "l";
    if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_]))) fail("expected an index");
    std::string name(1, s_[pos_++]);
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) name += s_[pos_++];
    skip_spaces();
    return name;
  }

  void skip_spaces() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  void parse_coefficient(Rational& c) {
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
    skip_spaces();
    std::string digits;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
      digits += s_[pos_++];
    bool negative = s_[start] == '-';
    if (digits.empty()) {
      c = negative ? -1 : 1;
      return;
    }
    try {
      c = parse_rational(digits);
    } catch (const ParseError& e) {
      pos_ = start;
      fail(e.what());
    }
    if (negative) c = -c;
  }

  const std::string& s_;
  int line_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

int infer_sinks(const DifferentialPolynomial& f, int sinks) {
  int m = sinks;
  for (const auto& t : f.terms)
    for (const auto& x : t.factors) m = std::max(m, x.function + 1);
  return m;
}

}  // namespace

DifferentialPolynomial parse_latex_formula(std::istream& in, int sinks) {
  DifferentialPolynomial out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
      continue;
    out.terms.push_back(LatexLine(line, number).parse());
  }
  out.sinks = infer_sinks(out, sinks);
  return out;
}

DifferentialPolynomial parse_machine_formula(std::istream& in, int sinks) {
  DifferentialPolynomial out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ';')) fields.push_back(field);
    FormulaTerm t;
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    try {
      t.coefficient = parse_rational(trim(fields.at(0)));
    } catch (const std::exception&) {
      throw ParseError("bad coefficient", number, 1);
    }
    for (std::size_t k = 1; k < fields.size(); ++k) {
      std::string f = trim(fields[k]);
      if (f.size() < 4 || f[0] != 'd' || f[2] != '[' || f.back() != ']')
        throw ParseError("bad factor '" + f + "'", number, 1);
      std::string body = f.substr(3, f.size() - 4);
      FormulaFactor x;
      if (f[1] == 'P') {
        auto bar = body.find('|');
        if (bar == std::string::npos) throw ParseError("P factor needs `|`", number, 1);
        x.upper = split_list(body.substr(0, bar));
        x.lower = split_list(body.substr(bar + 1));
        if (x.upper.size() != 2) throw ParseError("P needs two upper indices", number, 1);
      } else if (function_index(f[1]) >= 0) {
        x.function = function_index(f[1]);
        x.lower = split_list(body);
      } else {
        throw ParseError("unknown factor '" + f + "'", number, 1);
      }
      t.factors.push_back(std::move(x));
    }
    out.terms.push_back(std::move(t));
  }
  out.sinks = infer_sinks(out, sinks);
  return out;
}

KontsevichSum graphs_of(const DifferentialPolynomial& f) {
  KontsevichSum out(f.sinks, SinkSymmetry::Fixed);
  int number = 0;
  for (const auto& t : f.terms) {
    ++number;
    const int m = f.sinks;
    int internal = 0;
    for (const auto& x : t.factors) internal += x.function < 0;
    // index -> (source vertex, slot) and target vertex
    std::map<std::string, std::pair<int, int>> source;
    std::map<std::string, int> target;
    int next_internal = m;
    for (const auto& x : t.factors) {
      const int v = x.function < 0 ? next_internal++ : x.function;
      for (std::size_t s = 0; s < x.upper.size(); ++s)
        if (!source.emplace(x.upper[s], std::make_pair(v, static_cast<int>(s))).second)
          throw ParseError("index " + x.upper[s] + " is upper twice", number, 1);
      for (const auto& l : x.lower)
        if (!target.emplace(l, v).second) throw ParseError("index " + l + " is lower twice", number, 1);
    }
    std::vector<Wedge> wedges(internal);
    for (const auto& [name, sv] : source) {
      auto it = target.find(name);
      if (it == target.end()) throw ParseError("index " + name + " is never lower", number, 1);
      auto& w = wedges[sv.first - m];
      (sv.second == 0 ? w.left : w.right) = static_cast<std::uint8_t>(it->second);
    }
    for (const auto& [name, v] : target)
      if (!source.count(name)) throw ParseError("index " + name + " is never upper", number, 1);
    try {
      out.add(KontsevichGraph(m, std::move(wedges)), t.coefficient);
    } catch (const InvalidGraph& e) {
      throw ParseError(e.what(), number, 1);
    }
  }
  return out;
}

Rational eval_formula(const DifferentialPolynomial& f, const PoissonStructure& P,
                      const std::vector<Rational>& point, const std::vector<Polynomial>& functions) {
  Jet jet(P, point, functions);
  const int r = P.dimension();
  Rational total = 0;
  for (const auto& t : f.terms) {
    std::vector<std::string> names;
    for (const auto& x : t.factors) {
      names.insert(names.end(), x.upper.begin(), x.upper.end());
      names.insert(names.end(), x.lower.begin(), x.lower.end());
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    auto slot = [&](const std::string& n) {
      return static_cast<int>(std::lower_bound(names.begin(), names.end(), n) - names.begin());
    };
    struct Ref {
      int function;
      std::vector<int> upper, lower;
    };
    std::vector<Ref> refs;
    for (const auto& x : t.factors) {
      Ref ref{x.function, {}, {}};
      for (const auto& u : x.upper) ref.upper.push_back(slot(u));
      for (const auto& l : x.lower) ref.lower.push_back(slot(l));
      refs.push_back(std::move(ref));
    }
    std::vector<int> value(names.size(), 0);
    Rational sum = 0;
    while (true) {
      Rational prod = t.coefficient;
      for (const auto& ref : refs) {
        std::vector<int> lower;
        for (int k : ref.lower) lower.push_back(value[k]);
        std::sort(lower.begin(), lower.end());
        int src = ref.function < 0 ? value[ref.upper[0]] * r + value[ref.upper[1]] : r * r + ref.function;
        prod *= jet.value(src, lower);
        if (prod == 0) break;
      }
      sum += prod;
      int k = static_cast<int>(value.size()) - 1;
      for (; k >= 0; --k) {
        if (++value[k] < r) break;
        value[k] = 0;
      }
      if (k < 0) break;
    }
    total += sum;
  }
  return total;
}

AppendixDiff check_against_appendix(const KontsevichSum& s, const DifferentialPolynomial& reference) {
  const KontsevichSum parsed = graphs_of(reference);
  KontsevichSum ref(s.sinks(), s.symmetry());
  for (const auto& [g, c] : parsed.terms()) ref.add(g, c);
  AppendixDiff diff;
  auto a = s.terms().begin(), b = ref.terms().begin();
  while (a != s.terms().end() || b != ref.terms().end()) {
    if (b == ref.terms().end() || (a != s.terms().end() && a->first < b->first)) {
      diff.only_ours.push_back({a->first, a->second});
      ++a;
    } else if (a == s.terms().end() || b->first < a->first) {
      diff.only_reference.push_back({b->first, b->second});
      ++b;
    } else {
      if (a->second != b->second) {
        diff.only_ours.push_back({a->first, a->second});
        diff.only_reference.push_back({b->first, b->second});
      }
      ++a;
      ++b;
    }
  }
  return diff;
}

}  // namespace gck
