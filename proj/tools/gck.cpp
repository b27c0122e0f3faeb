// gck: command-line front end for the graph complex / Kontsevich flow pipeline.
//
// Exit codes: 0 success, 2 input error, 3 mathematical inconsistency.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gck/error.hpp"
#include "gck/evaluate.hpp"
#include "gck/factorize.hpp"
#include "gck/graph_complex.hpp"
#include "gck/leibniz.hpp"
#include "gck/operad.hpp"
#include "gck/orientation.hpp"

namespace {

using namespace gck;

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kInconsistent = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

// Writes to stdout for "" or "-", otherwise to a temporary file renamed into place.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InputError("cannot write " + path);
    body(out);
    out.flush();
    if (!out) throw InputError("write failed for " + path);
  }
  std::filesystem::rename(tmp, path);
}

int worker_count(int flag) {
  if (const char* env = std::getenv("GCK_WORKERS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw InputError("GCK_WORKERS must be a positive integer");
  }
  return std::max(1, flag);
}

GraphSum read_graph_sum(const std::string& path) {
  auto in = open_input(path);
  return reduce(read_graph_terms(in));
}

KontsevichSum read_bivector_table(const std::string& path, bool skew) {
  auto in = open_input(path);
  auto rows = read_table(in);
  KontsevichSum s = sum_of(rows);
  if (skew) s = skew_symmetrize(s);
  return s;
}

OrientationAnsatz read_parameters(const std::string& path) {
  auto in = open_input(path);
  return read_ansatz(in);
}

KontsevichSum bracket_of_ansatz(const OrientationAnsatz& a) {
  KontsevichSum t(3, SinkSymmetry::Antisymmetric);
  for (const auto& p : a.parameters) t += schouten_P_Q(p);
  return t;
}

std::vector<LeibnizGraph> read_leibniz_graphs(const std::string& path, bool tolerant) {
  auto in = open_input(path);
  std::vector<LeibnizGraph> out;
  if (tolerant) {
    auto r = import_leibniz_list(in);
    for (const auto& line : r.rejected) std::cerr << "skipped: " << line << '\n';
    for (auto& [g, c] : r.graphs) out.push_back(g);
  } else {
    for (auto& [g, c] : read_solution_leibniz(in)) out.push_back(g);
  }
  return out;
}

LeibnizCombination read_combination(const std::string& path, bool tolerant) {
  auto in = open_input(path);
  if (!tolerant) return read_solution_leibniz(in);
  auto r = import_leibniz_list(in);
  for (const auto& line : r.rejected) std::cerr << "skipped: " << line << '\n';
  return r.graphs;
}

std::pair<KontsevichGraph, Rational> parse_pin(const std::string& text) {
  auto eq = text.rfind('=');
  if (eq == std::string::npos) throw InputError("--pin expects <encoding>=<rational>");
  auto row = parse_encoding(text.substr(0, eq) + "   0");
  return {row.graph, parse_rational(text.substr(eq + 1))};
}

// ---------------------------------------------------------------------------

struct Common {
  int workers = 1;
  bool skew = false;
  std::string output;
};

int cmd_d(const std::string& input, bool debug, const Common& c) {
  auto in = open_input(input);
  auto terms = read_graph_terms(in);
  auto d = differential(terms, {debug});
  std::cerr << "differential: " << d.size() << " terms\n";
  write_output(c.output, [&](std::ostream& out) { write_graph_sum(out, d); });
  return kOk;
}

int cmd_cocycle(const std::string& input) {
  auto s = read_graph_sum(input);
  if (s.empty()) {
    std::cout << "zero graph: sum is empty\n";
    return kOk;
  }
  auto d = differential(s);
  std::cout << "differential terms: " << d.size() << '\n';
  std::cout << "cocycle: " << (d.empty() ? "yes" : "no") << '\n';
  return d.empty() ? kOk : kInconsistent;
}

int cmd_orient(const std::string& input, const Common& c) {
  auto s = read_graph_sum(input);
  auto a = orient(s);
  std::cerr << "orientation: " << a.parameters.size() << " parameters\n";
  write_output(c.output, [&](std::ostream& out) { write_ansatz(out, a); });
  return kOk;
}

int cmd_leibniz(const std::string& params, const std::string& table, int nu, const Common& c) {
  KontsevichSum t(3, SinkSymmetry::Antisymmetric);
  if (!table.empty())
    t = schouten_P_Q(read_bivector_table(table, c.skew));
  else
    t = bracket_of_ansatz(read_parameters(params));
  auto gen = generate_leibniz(t, nu, {c.workers, true});
  std::cerr << "leibniz graphs: " << gen.graphs.size() << ", tri-vector graphs seen: "
            << gen.trivector_graphs_seen << '\n';
  write_output(c.output, [&](std::ostream& out) {
    for (const auto& g : gen.graphs) out << format_leibniz(g, 1) << '\n';
  });
  return kOk;
}

void write_rows(const std::string& path, const FactorizationSystem& sys) {
  write_output(path, [&](std::ostream& out) {
    for (const auto& g : sys.equations) out << format_targets(g) << '\n';
  });
}

std::vector<KontsevichGraph> read_rows(const std::string& path) {
  auto in = open_input(path);
  std::vector<KontsevichGraph> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_encoding(line + "   1", 3, number).graph);
  }
  return rows;
}

struct SolveArgs {
  std::string params;
  int nu = 3;
  std::string pin;
  std::string leibniz;
  bool import = false;
  std::string diamond;
  std::string dump;
  std::string resume;
};

int cmd_solve(const SolveArgs& a, const Common& c) {
  auto ansatz = read_parameters(a.params);
  FactorizationSystem sys;
  if (!a.resume.empty()) {
    auto in = open_input(a.resume);
    sys.system = SparseRationalSystem::read(in);
    sys.flow = ansatz.parameters;
    sys.leibniz = read_leibniz_graphs(a.resume + ".leibniz", false);
    sys.equations = read_rows(a.resume + ".rows");
    if (sys.system.columns() != sys.flow.size() + sys.leibniz.size())
      throw InputError("system dump does not match the parameters and Leibniz list");
    std::cerr << "resumed " << sys.system.rows() << " equations, " << sys.system.columns()
              << " unknowns\n";
  } else {
    if (a.pin.empty()) throw InputError("solve needs --pin <encoding>=<rational>");
    auto [graph, value] = parse_pin(a.pin);
    if (value == 0) throw InputError("the pinned value must be nonzero");
    std::vector<LeibnizGraph> leibniz;
    if (!a.leibniz.empty()) {
      leibniz = read_leibniz_graphs(a.leibniz, a.import);
    } else {
      auto gen = generate_leibniz(bracket_of_ansatz(ansatz), a.nu, {c.workers, true});
      leibniz = std::move(gen.graphs);
    }
    sys = assemble(ansatz, leibniz, {c.workers, true});
    try {
      pin(sys, graph, value);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    if (!a.dump.empty()) {
      write_output(a.dump, [&](std::ostream& out) { sys.system.write(out); });
      write_output(a.dump + ".leibniz", [&](std::ostream& out) {
        for (const auto& g : sys.leibniz) out << format_leibniz(g, 1) << '\n';
      });
      write_rows(a.dump + ".rows", sys);
    }
  }
  auto report = solve(sys, {true});
  if (!report.consistent) {
    std::cerr << "inconsistent system: row " << *report.certificate_row;
    if (report.certificate_graph) std::cerr << " (tri-vector " << format_targets(*report.certificate_graph) << ")";
    std::cerr << " reduces to 0 = nonzero\n";
    return kInconsistent;
  }
  std::cerr << "rank " << report.rank << ", flow nullity " << report.flow_nullity << ", free Leibniz "
            << report.free_leibniz << ", diamond support " << report.solution.leibniz.size() << '\n';
  const auto& sol = report.solution;
  if (!verify_factorization(sol.flow, sol.leibniz, c.workers)) {
    std::cerr << "verification failed\n";
    return kInconsistent;
  }
  std::cerr << "verification: exact\n";
  write_output(c.output, [&](std::ostream& out) { write_table(out, rows_of(sol.flow)); });
  if (!a.diamond.empty())
    write_output(a.diamond, [&](std::ostream& out) { write_solution(out, sys, sol); });
  return kOk;
}

struct NumericArgs {
  std::string structure = "nambu3";
  int points = 20;
  std::uint64_t seed = 1;
};

int run_numeric(const KontsevichSum& q, const NumericArgs& n) {
  std::mt19937_64 rng(n.seed);
  auto bracket = schouten_P_Q(q);
  auto P = poisson::random(n.structure, rng);
  if (!P.verify_jacobi()) throw std::logic_error("sampled structure is not Poisson");
  int nonzero = 0;
  for (int k = 0; k < n.points; ++k) {
    std::vector<Rational> point(P.dimension());
    for (auto& x : point) x = random_rational(rng);
    std::vector<Polynomial> f;
    for (int s = 0; s < 3; ++s) f.push_back(random_polynomial(rng, P.dimension(), 3));
    auto v = eval_numeric(bracket, P, point, f);
    if (v != 0) {
      ++nonzero;
      std::cerr << "point " << k << ": " << to_string(v) << '\n';
    }
  }
  std::cout << "structure " << n.structure << ", points " << n.points << ", nonzero " << nonzero
            << '\n';
  return nonzero == 0 ? kOk : kInconsistent;
}

int cmd_verify(const std::string& table, const std::string& leibniz, bool import,
               const std::optional<NumericArgs>& numeric, const Common& c) {
  auto q = read_bivector_table(table, c.skew);
  if (numeric) return run_numeric(q, *numeric);
  if (leibniz.empty()) throw InputError("verify needs a Leibniz list or --structure");
  auto d = read_combination(leibniz, import);
  auto r = factorization_residual(q, d, c.workers);
  std::cout << "residual terms: " << r.size() << '\n';
  std::cout << "factorization: " << (r.empty() ? "exact" : "fails") << '\n';
  return r.empty() ? kOk : kInconsistent;
}

int cmd_formula(const std::string& table, bool machine, const std::string& check, const Common& c) {
  auto q = read_bivector_table(table, c.skew);
  if (!check.empty()) {
    auto in = open_input(check);
    auto ref = parse_latex_formula(in, q.sinks());
    auto diff = check_against_appendix(q, ref);
    DifferentialPolynomial ours{q.sinks(), {}}, theirs{q.sinks(), {}};
    auto show = [&](const char* side, const std::vector<EncodedTerm>& terms) {
      for (const auto& t : terms) {
        KontsevichSum one(q.sinks());
        one.add_normalized(t.graph, t.coefficient);
        std::cout << side << ' ' << format_latex(to_formula(one).terms.front()) << '\n';
      }
    };
    show("ours:", diff.only_ours);
    show("reference:", diff.only_reference);
    std::cout << "unmatched: " << diff.only_ours.size() + diff.only_reference.size() << '\n';
    return diff.empty() ? kOk : kInconsistent;
  }
  write_output(c.output, [&](std::ostream& out) { write_formula(out, to_formula(q), machine); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kontsevich graph complex, orientation and flow factorization"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--workers", common.workers, "worker threads (GCK_WORKERS overrides)");

  std::string input;
  bool debug = false;
  auto* d = app.add_subcommand("d", "differential of a graph sum");
  d->add_option("graphs", input)->required();
  d->add_flag("--debug", debug, "also check the cancellation of uni-valent blow-ups");
  d->add_option("-o,--output", common.output);

  auto* cocycle = app.add_subcommand("cocycle", "check d(sum) = 0");
  cocycle->add_option("graphs", input)->required();

  auto* orient_cmd = app.add_subcommand("orient", "orient a cocycle into bi-vector parameters");
  orient_cmd->add_option("graphs", input)->required();
  orient_cmd->add_option("-o,--output", common.output);

  std::string table;
  int nu = 3;
  auto* leibniz = app.add_subcommand("leibniz", "generate Leibniz graphs");
  leibniz->add_option("params", input, "parameter file");
  leibniz->add_option("--table", table, "start from [[P, Q]] of a bi-vector table instead");
  leibniz->add_option("--nu", nu, "iterations")->check(CLI::PositiveNumber);
  leibniz->add_option("-o,--output", common.output);
  leibniz->add_flag("--skew", common.skew);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve the factorization problem");
  solve_cmd->add_option("params", solve_args.params, "parameter file")->required();
  solve_cmd->add_option("--nu", solve_args.nu, "Leibniz iterations")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--pin", solve_args.pin, "<encoding>=<rational>");
  solve_cmd->add_option("--leibniz", solve_args.leibniz, "use this Leibniz list");
  solve_cmd->add_flag("--import", solve_args.import, "read --leibniz with the tolerant importer");
  solve_cmd->add_option("--diamond", solve_args.diamond, "write the solution dump here");
  solve_cmd->add_option("--dump", solve_args.dump, "write the pinned system here");
  solve_cmd->add_option("--resume", solve_args.resume, "solve a system written by --dump");
  solve_cmd->add_option("-o,--output", common.output);

  std::string leibniz_list;
  bool import = false;
  NumericArgs numeric;
  auto* verify = app.add_subcommand("verify", "verify a factorization");
  verify->add_option("table", input)->required();
  verify->add_option("leibniz", leibniz_list);
  verify->add_flag("--import", import, "read the list with the tolerant importer");
  auto* structure_opt = verify->add_option("--structure", numeric.structure, "numeric mode family");
  verify->add_option("--points", numeric.points)->check(CLI::PositiveNumber);
  verify->add_option("--seed", numeric.seed);
  verify->add_flag("--skew", common.skew);

  bool machine = false;
  std::string check;
  auto* formula = app.add_subcommand("formula", "differential-polynomial formula of a table");
  formula->add_option("table", input)->required();
  formula->add_flag("--machine", machine, "`coeff ; dP[...] ; ...` term list");
  formula->add_option("--check", check, "compare with a LaTeX term list");
  formula->add_option("-o,--output", common.output);
  formula->add_flag("--skew", common.skew);

  NumericArgs vn;
  auto* verify_numeric = app.add_subcommand("verify-numeric", "check [[P, Q(P)]] = 0 at random points");
  verify_numeric->add_option("table", input)->required();
  verify_numeric->add_option("--structure", vn.structure, "two_dim, nambu3 or sum4");
  verify_numeric->add_option("--points", vn.points)->check(CLI::PositiveNumber);
  verify_numeric->add_option("--seed", vn.seed);
  verify_numeric->add_flag("--skew", common.skew);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    common.workers = worker_count(common.workers);
    if (*d) return cmd_d(input, debug, common);
    if (*cocycle) return cmd_cocycle(input);
    if (*orient_cmd) return cmd_orient(input, common);
    if (*leibniz) {
      if (input.empty() == table.empty()) throw InputError("give either a parameter file or --table");
      return cmd_leibniz(input, table, nu, common);
    }
    if (*solve_cmd) return cmd_solve(solve_args, common);
    if (*verify) {
      std::optional<NumericArgs> n;
      if (*structure_opt) n = numeric;
      return cmd_verify(input, leibniz_list, import, n, common);
    }
    if (*formula) return cmd_formula(input, machine, check, common);
    if (*verify_numeric) return run_numeric(read_bivector_table(input, common.skew), vn);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const GradingError& e) {
    std::cerr << "grading error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidGraph& e) {
    std::cerr << "invalid graph: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
