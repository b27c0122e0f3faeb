#include "gck/leibniz.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "gck/detail/parallel.hpp"
#include "gck/error.hpp"

namespace gck {

LeibnizGraph::LeibnizGraph(int sinks, std::vector<Wedge> wedges,
                           std::array<std::uint8_t, 3> jacobiator, int sign)
    : sinks_(sinks), wedges_(std::move(wedges)), legs_(jacobiator), sign_(sign) {
  const int total = vertex_count();
  if (total > 250) throw InvalidGraph("graph too large");
  for (int i = 0; i < wedge_count(); ++i)
    for (int t : {wedges_[i].left, wedges_[i].right}) {
      if (t >= total) throw InvalidGraph("target out of range");
      if (t == sinks_ + i) throw InvalidGraph("wedge targets itself");
    }
  for (int t : legs_) {
    if (t >= total) throw InvalidGraph("Jacobiator leg out of range");
    if (t == jacobiator_label()) throw InvalidGraph("Jacobiator leg targets itself");
  }
  if (sign_ != 1 && sign_ != -1) throw InvalidGraph("sign must be +1 or -1");
}

LeibnizGraph LeibnizGraph::with_sign(int sign) const {
  LeibnizGraph g = *this;
  g.sign_ = sign;
  return g;
}

LeibnizNormalForm normal_form(const LeibnizGraph& g, SinkSymmetry symmetry) {
  const int k = g.wedge_count();
  std::vector<std::uint8_t> arity(k, 2);
  arity.push_back(3);
  std::vector<std::uint8_t> flat;
  flat.reserve(2 * k + 3);
  for (const auto& w : g.wedges()) {
    flat.push_back(w.left);
    flat.push_back(w.right);
  }
  flat.insert(flat.end(), g.legs().begin(), g.legs().end());
  auto form = detail::canonical_oriented(g.sinks(), arity, flat, symmetry);
  std::vector<Wedge> wedges(k);
  for (int i = 0; i < k; ++i) wedges[i] = {form.targets[2 * i], form.targets[2 * i + 1]};
  std::array<std::uint8_t, 3> legs = {form.targets[2 * k], form.targets[2 * k + 1],
                                      form.targets[2 * k + 2]};
  return {LeibnizGraph(g.sinks(), std::move(wedges), legs, form.sign * g.sign()), form.zero};
}

std::vector<KontsevichGraph> expansion_terms(const LeibnizGraph& g) {
  const auto j = static_cast<std::uint8_t>(g.jacobiator_label());
  const auto a = j;
  const auto b = static_cast<std::uint8_t>(j + 1);
  std::vector<std::pair<int, int>> incoming;
  for (int i = 0; i < g.wedge_count(); ++i) {
    if (g.wedges()[i].left == j) incoming.emplace_back(i, 0);
    if (g.wedges()[i].right == j) incoming.emplace_back(i, 1);
  }
  const auto& legs = g.legs();
  std::vector<KontsevichGraph> out;
  out.reserve(3u << incoming.size());
  for (int rot = 0; rot < 3; ++rot) {
    auto x = legs[rot], y = legs[(rot + 1) % 3], z = legs[(rot + 2) % 3];
    for (std::uint32_t mask = 0; mask < (1u << incoming.size()); ++mask) {
      std::vector<Wedge> wedges = g.wedges();
      for (std::size_t e = 0; e < incoming.size(); ++e) {
        auto& w = wedges[incoming[e].first];
        (incoming[e].second == 0 ? w.left : w.right) = (mask >> e) & 1 ? b : a;
      }
      wedges.push_back({x, y});
      wedges.push_back({a, z});
      out.emplace_back(g.sinks(), std::move(wedges), g.sign());
    }
  }
  return out;
}

KontsevichSum expand_leibniz(const LeibnizGraph& g, SinkSymmetry symmetry) {
  KontsevichSum out(g.sinks(), symmetry);
  for (const auto& t : expansion_terms(g)) out.add(t, 1);
  return out;
}

std::vector<LeibnizGraph> leibniz_candidates(const KontsevichGraph& t) {
  const int m = t.sinks();
  const int n = t.internal_count();
  std::vector<LeibnizGraph> out;
  for (int bi = 0; bi < n; ++bi) {
    const auto& bw = t.wedges()[bi];
    for (int slot = 0; slot < 2; ++slot) {
      int a_label = slot == 0 ? bw.left : bw.right;
      int other = slot == 0 ? bw.right : bw.left;
      if (a_label < m || other == a_label) continue;
      int ai = a_label - m;
      const auto& aw = t.wedges()[ai];
      const int b_label = m + bi;
      if (aw.left == b_label || aw.right == b_label) continue;
      // Remaining wedges keep their order; a and b fuse into the Jacobiator.
      std::vector<int> label(m + n, -1);
      for (int s = 0; s < m; ++s) label[s] = s;
      int next = m;
      for (int i = 0; i < n; ++i)
        if (i != ai && i != bi) label[m + i] = next++;
      const int j = next;
      label[m + ai] = j;
      label[m + bi] = j;
      std::vector<Wedge> wedges;
      for (int i = 0; i < n; ++i) {
        if (i == ai || i == bi) continue;
        const auto& w = t.wedges()[i];
        wedges.push_back({static_cast<std::uint8_t>(label[w.left]),
                          static_cast<std::uint8_t>(label[w.right])});
      }
      std::array<std::uint8_t, 3> legs = {static_cast<std::uint8_t>(label[aw.left]),
                                          static_cast<std::uint8_t>(label[aw.right]),
                                          static_cast<std::uint8_t>(label[other])};
      auto nf = normal_form(LeibnizGraph(m, std::move(wedges), legs));
      if (!nf.zero) out.push_back(nf.graph.with_sign(1));
    }
  }
  return out;
}

namespace {

struct LeibnizHash {
  std::size_t operator()(const LeibnizGraph& g) const noexcept {
    std::size_t h = KontsevichGraphHash{}(KontsevichGraph(g.sinks(), {}));
    for (const auto& w : g.wedges()) h = h * 1000003u ^ (static_cast<std::size_t>(w.left) << 8 | w.right);
    for (auto t : g.legs()) h = h * 1000003u ^ t;
    return h;
  }
};

}  // namespace

LeibnizGeneration generate_leibniz(const KontsevichSum& t, int rounds,
                                   const GenerationOptions& options) {
  if (rounds < 1) throw std::invalid_argument("generate_leibniz: rounds must be >= 1");
  LeibnizGeneration result;
  std::unordered_set<KontsevichGraph, KontsevichGraphHash> seen;
  std::unordered_set<LeibnizGraph, LeibnizHash> found;
  std::vector<KontsevichGraph> frontier;
  for (const auto& [g, c] : t.terms()) {
    if (seen.insert(g).second) frontier.push_back(g);
  }
  for (int round = 1; round <= rounds; ++round) {
    auto candidates = detail::parallel_map(frontier, options.workers, leibniz_candidates);
    std::vector<LeibnizGraph> fresh;
    for (const auto& list : candidates)
      for (const auto& l : list)
        if (found.insert(l).second) fresh.push_back(l);
    result.found_per_round.push_back(fresh.size());
    if (options.progress)
      std::cerr << "leibniz round " << round << ": " << frontier.size() << " seeds, "
                << fresh.size() << " new, " << found.size() << " total\n";
    if (round == rounds) break;
    auto expansions = detail::parallel_map(fresh, options.workers, [](const LeibnizGraph& l) {
      auto s = expand_leibniz(l);
      std::vector<KontsevichGraph> keys;
      keys.reserve(s.size());
      for (const auto& [g, c] : s.terms()) keys.push_back(g);
      return keys;
    });
    frontier.clear();
    for (const auto& keys : expansions)
      for (const auto& g : keys)
        if (seen.insert(g).second) frontier.push_back(g);
    if (frontier.empty()) {
      for (int r = round + 1; r <= rounds; ++r) result.found_per_round.push_back(0);
      break;
    }
  }
  result.trivector_graphs_seen = seen.size();
  result.graphs.assign(found.begin(), found.end());
  std::sort(result.graphs.begin(), result.graphs.end());
  return result;
}

std::string format_leibniz(const LeibnizGraph& g, const Rational& c) {
  std::string s = std::to_string(g.sinks()) + " " + std::to_string(g.wedge_count()) + "  ";
  for (std::size_t i = 0; i < g.wedges().size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(g.wedges()[i].left) + " " + std::to_string(g.wedges()[i].right);
  }
  s += " ; J: ";
  for (int k = 0; k < 3; ++k) s += (k ? " " : "") + std::to_string(g.legs()[k]);
  Rational signed_c = g.sign() > 0 ? c : Rational(-c);
  return s + "  " + to_string(signed_c);
}

namespace {

std::vector<std::pair<std::string, int>> split_tokens(const std::string& line) {
  std::vector<std::pair<std::string, int>> tokens;
  std::size_t pos = 0;
  auto separator = [](char ch) {
    return std::isspace(static_cast<unsigned char>(ch)) || ch == ';' || ch == ',';
  };
  while (pos < line.size()) {
    while (pos < line.size() && separator(line[pos])) ++pos;
    if (pos == line.size()) break;
    std::size_t start = pos;
    while (pos < line.size() && !separator(line[pos])) ++pos;
    std::string tok = line.substr(start, pos - start);
    if (tok == "J:" || tok == "J" || tok == ":") continue;
    if (tok.rfind("J:", 0) == 0) tok = tok.substr(2), start += 2;
    tokens.emplace_back(tok, static_cast<int>(start) + 1);
  }
  return tokens;
}

std::pair<LeibnizGraph, Rational> leibniz_from_tokens(
    const std::vector<std::pair<std::string, int>>& tokens, int line_number) {
  auto number = [&](std::size_t i) {
    const auto& [text, col] = tokens[i];
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char ch) {
          return std::isdigit(static_cast<unsigned char>(ch));
        }))
      throw ParseError("expected a label, got '" + text + "'", line_number, col);
    return std::stoi(text);
  };
  if (tokens.size() < 6) throw ParseError("too few tokens for a Leibniz graph", line_number, 1);
  int m = number(0), k = number(1);
  if (tokens.size() != static_cast<std::size_t>(2 + 2 * k + 3 + 1))
    throw ParseError("expected " + std::to_string(2 * k + 6) + " tokens", line_number,
                     tokens.back().second);
  const int total = m + k + 1;
  std::vector<Wedge> wedges(k);
  for (int i = 0; i < k; ++i) {
    int l = number(2 + 2 * i), r = number(3 + 2 * i);
    if (l >= total || r >= total)
      throw ParseError("target out of range", line_number, tokens[2 + 2 * i].second);
    if (l == m + i || r == m + i)
      throw ParseError("wedge targets itself", line_number, tokens[2 + 2 * i].second);
    wedges[i] = {static_cast<std::uint8_t>(l), static_cast<std::uint8_t>(r)};
  }
  std::array<std::uint8_t, 3> legs{};
  for (int q = 0; q < 3; ++q) {
    int t = number(2 + 2 * k + q);
    if (t >= total || t == m + k)
      throw ParseError("bad Jacobiator leg", line_number, tokens[2 + 2 * k + q].second);
    legs[q] = static_cast<std::uint8_t>(t);
  }
  Rational c;
  try {
    c = parse_rational(tokens.back().first);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_number, tokens.back().second);
  }
  return {LeibnizGraph(m, std::move(wedges), legs), c};
}

}  // namespace

std::pair<LeibnizGraph, Rational> parse_leibniz(const std::string& line, int line_number) {
  if (line.find("; J:") == std::string::npos)
    throw ParseError("missing `; J:` separator", line_number, 1);
  return leibniz_from_tokens(split_tokens(line), line_number);
}

std::vector<std::pair<LeibnizGraph, Rational>> read_leibniz_list(std::istream& in) {
  std::vector<std::pair<LeibnizGraph, Rational>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_leibniz(line, number));
  }
  return out;
}

void write_leibniz_list(std::ostream& out,
                        const std::vector<std::pair<LeibnizGraph, Rational>>& list) {
  for (const auto& [g, c] : list) out << format_leibniz(g, c) << '\n';
}

ImportResult import_leibniz_list(std::istream& in) {
  ImportResult result;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      result.graphs.push_back(leibniz_from_tokens(split_tokens(line), number));
    } catch (const std::exception&) {
      result.rejected.push_back(line);
    }
  }
  return result;
}

}  // namespace gck
