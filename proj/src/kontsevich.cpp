#include "gck/kontsevich.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gck/error.hpp"

namespace gck {

namespace detail {

namespace {

// Sorts a small tuple in place and returns the sign of the sorting permutation.
int sort_tuple(std::uint8_t* t, int k) {
  int sign = 1;
  for (int i = 1; i < k; ++i)
    for (int j = i; j > 0 && t[j - 1] > t[j]; --j) {
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  return sign;
}

struct FixedCanon {
  int sinks;
  int count;  // internal vertices
  std::span<const std::uint8_t> arity;
  std::vector<int> offset;
  std::span<const std::uint8_t> targets;

  std::vector<int> color;  // over all vertices
  std::vector<int> cell;   // colour required at each internal position
  std::vector<int> order;  // order[p] = internal vertex index at position p
  std::vector<char> used;
  std::vector<int> new_label;

  bool have_best = false;
  std::vector<std::uint8_t> best;
  std::vector<std::uint8_t> best_arity;
  int best_sign = 1;
  bool zero = false;
  std::vector<std::uint8_t> scratch;

  void refine() {
    const int total = sinks + count;
    color.assign(total, 0);
    for (int s = 0; s < sinks; ++s) color[s] = s;
    for (int v = 0; v < count; ++v) color[sinks + v] = sinks + (arity[v] - 2);
    std::vector<std::vector<int>> in(total);
    for (int v = 0; v < count; ++v)
      for (int k = 0; k < arity[v]; ++k) in[targets[offset[v] + k]].push_back(sinks + v);
    int classes = -1;
    std::vector<std::vector<int>> sig(total);
    while (true) {
      for (int v = 0; v < total; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(color[v]);
        if (v >= sinks) {
          int u = v - sinks;
          std::size_t start = s.size();
          for (int k = 0; k < arity[u]; ++k) s.push_back(color[targets[offset[u] + k]]);
          std::sort(s.begin() + start, s.end());
        }
        s.push_back(-1);
        std::size_t start = s.size();
        for (int w : in[v]) s.push_back(color[w]);
        std::sort(s.begin() + start, s.end());
      }
      auto distinct = sig;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (int v = 0; v < total; ++v)
        color[v] = static_cast<int>(
            std::lower_bound(distinct.begin(), distinct.end(), sig[v]) - distinct.begin());
      int now = static_cast<int>(distinct.size());
      if (now == classes) break;
      classes = now;
    }
  }

  void run() {
    refine();
    cell.clear();
    for (int v = 0; v < count; ++v) cell.push_back(color[sinks + v]);
    std::sort(cell.begin(), cell.end());
    order.assign(count, -1);
    used.assign(count, 0);
    new_label.assign(sinks + count, 0);
    for (int s = 0; s < sinks; ++s) new_label[s] = s;
    descend(0);
  }

  void descend(int p) {
    if (p == count) {
      leaf();
      return;
    }
    for (int v = 0; v < count; ++v) {
      if (used[v] || color[sinks + v] != cell[p]) continue;
      used[v] = 1;
      order[p] = v;
      descend(p + 1);
      used[v] = 0;
    }
  }

  void leaf() {
    for (int p = 0; p < count; ++p) new_label[sinks + order[p]] = sinks + p;
    scratch.clear();
    int sign = 1;
    for (int p = 0; p < count; ++p) {
      int v = order[p];
      std::size_t start = scratch.size();
      for (int k = 0; k < arity[v]; ++k)
        scratch.push_back(static_cast<std::uint8_t>(new_label[targets[offset[v] + k]]));
      sign *= sort_tuple(scratch.data() + start, arity[v]);
    }
    if (have_best) {
      if (best < scratch) return;
      if (scratch == best) {
        if (sign != best_sign) zero = true;
        return;
      }
    }
    have_best = true;
    best = scratch;
    best_sign = sign;
    zero = false;
    best_arity.resize(count);
    for (int p = 0; p < count; ++p) best_arity[p] = arity[order[p]];
  }
};

OrientedForm canonical_fixed(int sinks, std::span<const std::uint8_t> arity,
                             std::span<const std::uint8_t> targets) {
  FixedCanon canon{sinks, static_cast<int>(arity.size()), arity, {}, targets, {}, {}, {}, {}, {},
                   false, {}, {}, 1, false, {}};
  canon.offset.resize(arity.size() + 1, 0);
  for (std::size_t v = 0; v < arity.size(); ++v) canon.offset[v + 1] = canon.offset[v] + arity[v];
  OrientedForm out;
  // Repeated targets inside one tuple: antisymmetry forces the graph to vanish.
  for (std::size_t v = 0; v < arity.size(); ++v) {
    for (int a = 0; a < arity[v]; ++a)
      for (int b = a + 1; b < arity[v]; ++b)
        if (targets[canon.offset[v] + a] == targets[canon.offset[v] + b]) out.zero = true;
  }
  canon.run();
  out.arity = std::move(canon.best_arity);
  out.targets = std::move(canon.best);
  out.sign = canon.best_sign;
  out.zero = out.zero || canon.zero;
  return out;
}

}  // namespace

OrientedForm canonical_oriented(int sinks, std::span<const std::uint8_t> arity,
                                std::span<const std::uint8_t> targets, SinkSymmetry symmetry) {
  if (symmetry == SinkSymmetry::Fixed || sinks < 2) return canonical_fixed(sinks, arity, targets);
  std::vector<int> perm(sinks);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint8_t> permuted(targets.begin(), targets.end());
  OrientedForm best;
  bool have = false;
  do {
    int parity = 1;
    for (int i = 0; i < sinks; ++i)
      for (int j = i + 1; j < sinks; ++j)
        if (perm[i] > perm[j]) parity = -parity;
    for (std::size_t i = 0; i < targets.size(); ++i)
      permuted[i] = targets[i] < sinks ? static_cast<std::uint8_t>(perm[targets[i]]) : targets[i];
    auto form = canonical_fixed(sinks, arity, permuted);
    form.sign *= parity;
    if (!have) {
      best = std::move(form);
      have = true;
      continue;
    }
    if (form.targets == best.targets && form.arity == best.arity) {
      if (form.sign != best.sign || form.zero) best.zero = true;
    } else if (std::tie(form.arity, form.targets) < std::tie(best.arity, best.targets)) {
      bool was_zero = best.zero;
      best = std::move(form);
      best.zero = best.zero || was_zero;
    } else if (form.zero) {
      best.zero = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

KontsevichGraph::KontsevichGraph(int sinks, std::vector<Wedge> wedges, int sign)
    : sinks_(sinks), wedges_(std::move(wedges)), sign_(sign) {
  if (sinks_ < 0) throw InvalidGraph("negative sink count");
  const int total = vertex_count();
  if (total > 250) throw InvalidGraph("graph too large");
  for (int i = 0; i < internal_count(); ++i) {
    int self = sinks_ + i;
    for (int t : {wedges_[i].left, wedges_[i].right}) {
      if (t >= total) throw InvalidGraph("target " + std::to_string(t) + " out of range");
      if (t == self) throw InvalidGraph("edge from vertex " + std::to_string(self) + " to itself");
    }
  }
  if (sign_ != 1 && sign_ != -1) throw InvalidGraph("sign must be +1 or -1");
}

KontsevichGraph KontsevichGraph::with_sign(int sign) const {
  KontsevichGraph g = *this;
  g.sign_ = sign;
  return g;
}

std::vector<int> KontsevichGraph::in_degrees() const {
  std::vector<int> deg(vertex_count(), 0);
  for (const auto& w : wedges_) {
    ++deg[w.left];
    ++deg[w.right];
  }
  return deg;
}

NormalForm normal_form(const KontsevichGraph& g, SinkSymmetry symmetry) {
  const int n = g.internal_count();
  std::vector<std::uint8_t> arity(n, 2);
  std::vector<std::uint8_t> flat;
  flat.reserve(2 * n);
  for (const auto& w : g.wedges()) {
    flat.push_back(w.left);
    flat.push_back(w.right);
  }
  auto form = detail::canonical_oriented(g.sinks(), arity, flat, symmetry);
  std::vector<Wedge> wedges(n);
  for (int i = 0; i < n; ++i) wedges[i] = {form.targets[2 * i], form.targets[2 * i + 1]};
  return {KontsevichGraph(g.sinks(), std::move(wedges), form.sign * g.sign()), form.zero};
}

KontsevichGraph normalize(const KontsevichGraph& g) { return normal_form(g).graph; }

KontsevichGraph permute_sinks(const KontsevichGraph& g, const std::vector<int>& perm) {
  std::vector<Wedge> wedges = g.wedges();
  auto map = [&](std::uint8_t t) {
    return t < g.sinks() ? static_cast<std::uint8_t>(perm[t]) : t;
  };
  for (auto& w : wedges) w = {map(w.left), map(w.right)};
  return KontsevichGraph(g.sinks(), std::move(wedges), g.sign());
}

void KontsevichSum::add(const KontsevichGraph& g, const Rational& c) {
  if (c == 0) return;
  if (g.sinks() != sinks_) throw GradingError("sink count mismatch in KontsevichSum::add");
  auto nf = normal_form(g, symmetry_);
  if (nf.zero) return;
  int sign = nf.graph.sign();
  add_normalized(nf.graph.with_sign(1), sign > 0 ? c : Rational(-c));
}

void KontsevichSum::add_normalized(const KontsevichGraph& g, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational KontsevichSum::coefficient(const KontsevichGraph& g) const {
  auto nf = normal_form(g, symmetry_);
  if (nf.zero) return 0;
  auto it = terms_.find(nf.graph);
  if (it == terms_.end()) return 0;
  return nf.graph.sign() > 0 ? it->second : Rational(-it->second);
}

KontsevichSum& KontsevichSum::operator+=(const KontsevichSum& other) {
  for (const auto& [g, c] : other.terms_) add_normalized(g, c);
  return *this;
}

KontsevichSum& KontsevichSum::operator-=(const KontsevichSum& other) {
  for (const auto& [g, c] : other.terms_) add_normalized(g, -c);
  return *this;
}

KontsevichSum KontsevichSum::operator*(const Rational& c) const {
  KontsevichSum out(sinks_, symmetry_);
  if (c == 0) return out;
  for (const auto& [g, coeff] : terms_) out.terms_.emplace(g, coeff * c);
  return out;
}

KontsevichSum skew_symmetrize(const KontsevichSum& s) {
  if (s.sinks() != 2) throw GradingError("skew_symmetrize expects a bi-vector sum");
  KontsevichSum out(2, s.symmetry());
  for (const auto& [g, c] : s.terms()) {
    out.add(g, c);
    out.add(permute_sinks(g, {1, 0}), -c);
  }
  return out;
}

namespace {

std::vector<std::pair<std::string, int>> tokenize(const std::string& line) {
  std::vector<std::pair<std::string, int>> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == line.size()) break;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    tokens.emplace_back(line.substr(start, pos - start), static_cast<int>(start) + 1);
  }
  return tokens;
}

int parse_label(const std::string& text, int line_number, int column) {
  if (text.empty() || text.size() > 3 ||
      !std::all_of(text.begin(), text.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    throw ParseError("expected a vertex label, got '" + text + "'", line_number, column);
  return std::stoi(text);
}

}  // namespace

EncodedTerm parse_encoding(const std::string& line, int sinks, int line_number) {
  auto tokens = tokenize(line);
  if (tokens.size() < 3 || tokens.size() % 2 == 0)
    throw ParseError("expected 2n targets followed by a coefficient, found " +
                         std::to_string(tokens.size()) + " tokens",
                     line_number, tokens.empty() ? 1 : tokens.back().second);
  const int n = static_cast<int>(tokens.size() - 1) / 2;
  const int total = sinks + n;
  std::vector<Wedge> wedges(n);
  for (int i = 0; i < n; ++i) {
    int t[2];
    for (int k = 0; k < 2; ++k) {
      const auto& [text, column] = tokens[2 * i + k];
      t[k] = parse_label(text, line_number, column);
      if (t[k] >= total)
        throw ParseError("target " + text + " out of range 0.." + std::to_string(total - 1),
                         line_number, column);
      if (t[k] == sinks + i)
        throw ParseError("vertex " + std::to_string(sinks + i) + " targets itself", line_number,
                         column);
    }
    wedges[i] = {static_cast<std::uint8_t>(t[0]), static_cast<std::uint8_t>(t[1])};
  }
  Rational c;
  try {
    c = parse_rational(tokens.back().first);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_number, tokens.back().second);
  }
  return {KontsevichGraph(sinks, std::move(wedges)), c};
}

std::string format_targets(const KontsevichGraph& g) {
  std::string s;
  for (const auto& w : g.wedges()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(w.left) + " " + std::to_string(w.right);
  }
  return s;
}

std::string format_encoding(const KontsevichGraph& g, const Rational& c) {
  Rational signed_c = g.sign() > 0 ? c : Rational(-c);
  return format_targets(g) + "   " + to_string(signed_c);
}

std::vector<EncodedTerm> read_table(std::istream& in) {
  std::vector<EncodedTerm> rows;
  std::string line;
  int number = 0;
  int sinks = 2;
  int expected_internal = -1;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      auto m_pos = line.find("m=");
      if (m_pos != std::string::npos) {
        sinks = std::stoi(line.substr(m_pos + 2));
        auto n_pos = line.find("n=");
        expected_internal = n_pos == std::string::npos ? -1 : std::stoi(line.substr(n_pos + 2));
      }
      continue;
    }
    auto row = parse_encoding(line, sinks, number);
    if (expected_internal >= 0 && row.graph.internal_count() != expected_internal)
      throw ParseError("expected " + std::to_string(expected_internal) + " internal vertices",
                       number, 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EncodedTerm> parse_table(const std::string& text) {
  std::istringstream in(text);
  return read_table(in);
}

void write_table(std::ostream& out, const std::vector<EncodedTerm>& rows) {
  for (const auto& r : rows) out << format_encoding(r.graph, r.coefficient) << '\n';
}

KontsevichSum sum_of(const std::vector<EncodedTerm>& rows, SinkSymmetry symmetry) {
  KontsevichSum s(rows.empty() ? 2 : rows.front().graph.sinks(), symmetry);
  for (const auto& r : rows) s.add(r.graph, r.coefficient);
  return s;
}

std::vector<EncodedTerm> rows_of(const KontsevichSum& s) {
  std::vector<EncodedTerm> rows;
  rows.reserve(s.size());
  for (const auto& [g, c] : s.terms()) rows.push_back({g, c});
  return rows;
}

std::size_t KontsevichGraphHash::operator()(const KontsevichGraph& g) const noexcept {
  std::size_t h = static_cast<std::size_t>(g.sinks()) * 0x9e3779b97f4a7c15ULL;
  for (const auto& w : g.wedges()) {
    h ^= (static_cast<std::size_t>(w.left) << 8 | w.right) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return h;
}

}  // namespace gck
