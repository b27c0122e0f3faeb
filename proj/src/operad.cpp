#include "gck/operad.hpp"

#include <stdexcept>

#include "gck/error.hpp"

namespace gck {

KontsevichGraph wedge_graph() { return KontsevichGraph(2, {{0, 1}}); }

KontsevichGraph sink_graph() { return KontsevichGraph(1, {}); }

std::vector<KontsevichGraph> insert_terms(const KontsevichGraph& a, int k,
                                          const KontsevichGraph& b) {
  if (k < 0 || k >= a.sinks()) throw std::out_of_range("insert: sink index out of range");
  const int sinks = a.sinks() - 1 + b.sinks();
  const int a_base = sinks;
  const int b_base = sinks + a.internal_count();
  auto map_a = [&](int t) -> int {
    if (t < k) return t;
    if (t == k) return -1;
    if (t < a.sinks()) return t - 1 + b.sinks();
    return a_base + (t - a.sinks());
  };
  auto map_b = [&](int t) -> int {
    if (t < b.sinks()) return k + t;
    return b_base + (t - b.sinks());
  };

  std::vector<Wedge> base;
  std::vector<std::pair<int, int>> redirected;  // (wedge index, slot)
  for (int i = 0; i < a.internal_count(); ++i) {
    const auto& w = a.wedges()[i];
    int l = map_a(w.left), r = map_a(w.right);
    if (l < 0) redirected.emplace_back(i, 0);
    if (r < 0) redirected.emplace_back(i, 1);
    base.push_back({static_cast<std::uint8_t>(l < 0 ? 0 : l), static_cast<std::uint8_t>(r < 0 ? 0 : r)});
  }
  for (const auto& w : b.wedges())
    base.push_back({static_cast<std::uint8_t>(map_b(w.left)), static_cast<std::uint8_t>(map_b(w.right))});

  const int choices = b.vertex_count();
  std::vector<int> pick(redirected.size(), 0);
  std::vector<KontsevichGraph> out;
  const int sign = a.sign() * b.sign();
  while (true) {
    auto wedges = base;
    for (std::size_t e = 0; e < redirected.size(); ++e) {
      auto target = static_cast<std::uint8_t>(map_b(pick[e]));
      auto& w = wedges[redirected[e].first];
      (redirected[e].second == 0 ? w.left : w.right) = target;
    }
    out.emplace_back(sinks, std::move(wedges), sign);
    std::size_t e = 0;
    while (e < pick.size() && ++pick[e] == choices) pick[e++] = 0;
    if (e == pick.size()) break;
  }
  return out;
}

KontsevichSum insert(const KontsevichGraph& a, int k, const KontsevichGraph& b) {
  auto terms = insert_terms(a, k, b);
  KontsevichSum out(a.sinks() - 1 + b.sinks());
  for (const auto& g : terms) out.add(g, 1);
  return out;
}

KontsevichSum insert(const KontsevichSum& a, int k, const KontsevichSum& b) {
  KontsevichSum out(a.sinks() - 1 + b.sinks());
  for (const auto& [ga, ca] : a.terms())
    for (const auto& [gb, cb] : b.terms())
      for (const auto& g : insert_terms(ga, k, gb)) out.add(g, ca * cb);
  return out;
}

namespace {

KontsevichSum bracket(const KontsevichSum& q, SinkSymmetry symmetry) {
  if (q.sinks() != 2) throw GradingError("schouten_P_Q expects a bi-vector sum");
  const auto p = wedge_graph();
  static const std::vector<std::vector<int>> cyclic = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  KontsevichSum out(3, symmetry);
  for (const auto& [g, c] : q.terms()) {
    auto terms = insert_terms(p, 0, g);
    auto more = insert_terms(g, 0, p);
    terms.insert(terms.end(), more.begin(), more.end());
    for (const auto& t : terms)
      for (const auto& perm : cyclic) out.add(permute_sinks(t, perm), c);
  }
  return out;
}

}  // namespace

KontsevichSum schouten_P_Q(const KontsevichSum& q) {
  return bracket(q, SinkSymmetry::Antisymmetric);
}

KontsevichSum schouten_P_Q_fixed(const KontsevichSum& q) { return bracket(q, SinkSymmetry::Fixed); }

KontsevichSum jacobiator(SinkSymmetry symmetry) {
  static const std::uint8_t cyclic[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  KontsevichSum out(3, symmetry);
  for (const auto& c : cyclic) out.add(KontsevichGraph(3, {{c[0], c[1]}, {3, c[2]}}), 1);
  return out;
}

}  // namespace gck
