#ifndef TGE_CLI_HPP
#define TGE_CLI_HPP

// Command-line driver. `run` takes the argument list without the program
// name, writes payloads to `out` (or --out) and diagnostics to `err`, and
// returns the process exit code.

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tge/bimodule.hpp"
#include "tge/entropy.hpp"
#include "tge/errors.hpp"
#include "tge/expression.hpp"
#include "tge/graph.hpp"
#include "tge/graph_io.hpp"
#include "tge/paths.hpp"
#include "tge/report.hpp"
#include "tge/rewriter.hpp"

namespace tge::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kParse = 3,
  kValidation = 4,
  kDegenerate = 5,
  kBasisFailure = 6,
  kComputation = 7,
};

struct RunConfig {
  std::string command;
  std::string graph_path;
  unsigned k_max = 14;
  double tol = 1e-12;
  std::size_t cap = kDefaultWordCap;
  std::string out_path;
  std::string format;  // empty: per-command default
  std::string expression;
  bool verbose = false;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"analyze",  "loops",   "verify-basis",
                                              "conjecture", "rewrite", "spectra"};
  return names;
}

namespace detail {

struct Payload {
  std::string text;
  int code = kOk;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline LoopOptions loop_options(const RunConfig& c) {
  LoopOptions opt;
  opt.word_cap = c.cap;
  return opt;
}

inline Json config_json(const RunConfig& c) {
  Json j;
  j["k_max"] = c.k_max;
  j["tol"] = real(c.tol);
  j["cap"] = c.cap;
  return j;
}

inline Payload analyze(const RunConfig& c, const CircleGraph& g) {
  ReportOptions opt;
  opt.k_max = c.k_max;
  opt.spectral.tol = c.tol;
  opt.loops = loop_options(c);
  const EntropyReport r = entropy_report(g, opt);
  if (c.format == "csv") return {entropy_csv(r)};
  if (c.format == "text") return {entropy_text(r)};
  Json j = envelope("analyze", g);
  j["config"] = config_json(c);
  j["report"] = entropy_report_json(r);
  return {dump(j)};
}

inline Payload loops(const RunConfig& c, const CircleGraph& g) {
  const LoopCountTable t = loop_table(g, c.k_max, loop_options(c));
  require_nondegenerate(t);
  if (c.format == "csv") return {loop_table_csv(t)};
  if (c.format == "text") return {loop_table_text(t)};
  Json j = envelope("loops", g);
  j["config"] = config_json(c);
  j["loops"] = loop_table_json(t);
  return {dump(j)};
}

inline Payload verify(const RunConfig& c, const CircleGraph& g) {
  const BasisReport b = verify_basis(g);
  const int code = b.pass ? kOk : kBasisFailure;
  if (c.format == "text" || c.format == "csv") {
    std::string s = b.pass ? "pass (" + std::to_string(b.checks) + " checks)\n"
                           : "fail: " + b.failed_identity + "\n  lhs: " + b.lhs + "\n  rhs: " + b.rhs + "\n";
    return {s, code};
  }
  Json j = envelope("verify-basis", g);
  j["result"] = basis_report_json(b);
  const SymbolGraph sg(g);
  auto basis = Json::array();
  for (const auto& s : sg.symbols()) basis.push_back(symbol_label(g, s));
  j["basis"] = std::move(basis);
  Json actions;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    actions[g.vertex_name(v)] = laurent_matrix_json(g, left_action_matrix(g, v));
  j["left_action"] = std::move(actions);
  return {dump(j), code};
}

inline Payload conjecture(const RunConfig& c, const CircleGraph& g) {
  SpectralOptions sopt;
  sopt.tol = c.tol;
  const ConjectureResult r = conjecture_check(g, c.k_max, sopt, loop_options(c));
  if (c.format == "text" || c.format == "csv") {
    return {std::string(to_string(r.verdict)) + " (estimate " + real_text(r.estimate) +
            ", target " + real_text(r.target) + "): " + r.reason + "\n"};
  }
  Json j = envelope("conjecture", g);
  j["config"] = config_json(c);
  j["conjecture_verdict"] = conjecture_json(r);
  if (r.signed_q) j["signed_Q"] = matrix_json(mat_Q(g));
  return {dump(j)};
}

inline Payload rewrite(const RunConfig& c, const CircleGraph& g) {
  const Algebra alg(g);
  const MonomialSum x = evaluate(c.expression, alg);
  const std::string nf = alg.render(x);
  if (c.format.empty() || c.format == "text" || c.format == "csv") return {nf + "\n"};
  Json j = envelope("rewrite", g);
  j["expression"] = c.expression;
  j["normal_form"] = nf;
  j["terms"] = x.size();
  return {dump(j)};
}

inline Payload spectra(const RunConfig& c, const CircleGraph& g) {
  SpectralOptions opt;
  opt.tol = c.tol;
  const ExactMatrix p = mat_P(g), q = mat_Q(g), qa = mat_Q_abs(g), lam = mat_Lambda(g);
  const SpectralResult rp = spectral_radius(p, opt), rq = spectral_radius(qa, opt),
                       rl = spectral_radius(lam, opt);
  if (c.format == "text" || c.format == "csv") {
    return {"rho_P = " + real_text(rp.radius) + "\nrho_Q_abs = " + real_text(rq.radius) +
            "\nrho_Lambda = " + real_text(rl.radius) + "\n"};
  }
  Json j = envelope("spectra", g);
  j["config"] = config_json(c);
  j["P"] = matrix_json(p);
  j["Q"] = matrix_json(q);
  j["Q_abs"] = matrix_json(qa);
  j["Lambda"] = matrix_json(lam);
  j["rho_P"] = spectral_json(rp);
  j["rho_Q_abs"] = spectral_json(rq);
  j["rho_Lambda"] = spectral_json(rl);
  Json comps;
  comps["P"] = component_json(component_spectra(p, opt), p.labels());
  comps["Q_abs"] = component_json(component_spectra(qa, opt), qa.labels());
  j["components"] = std::move(comps);
  return {dump(j)};
}

inline void print_violations(std::ostream& err, const std::vector<Violation>& vs) {
  err << "tge: invalid graph\n";
  for (const auto& v : vs) err << "  " << (v.subject.empty() ? "(graph)" : v.subject) << ": " << v.message << "\n";
}

}  // namespace detail

inline int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "rewrite" && c.expression.empty()) {
    err << "tge: rewrite needs an expression (-e EXPR)\n";
    return kUsage;
  }
  try {
    const CircleGraph g = load_graph(c.graph_path);
    if (c.verbose)
      err << "tge: " << c.graph_path << ": " << g.vertex_count() << " vertices, "
          << g.edge_count() << " edges, hash " << graph_hash(g) << "\n";
    detail::Payload p;
    if (c.command == "analyze") p = detail::analyze(c, g);
    else if (c.command == "loops") p = detail::loops(c, g);
    else if (c.command == "verify-basis") p = detail::verify(c, g);
    else if (c.command == "conjecture") p = detail::conjecture(c, g);
    else if (c.command == "rewrite") p = detail::rewrite(c, g);
    else if (c.command == "spectra") p = detail::spectra(c, g);
    else {
      err << "tge: unknown command '" << c.command << "'\n";
      return kUsage;
    }
    if (c.out_path.empty()) {
      out << p.text;
    } else {
      std::ofstream f(c.out_path, std::ios::binary);
      if (!f) throw IoError("cannot write '" + c.out_path + "'");
      f << p.text;
      if (!f) throw IoError("error while writing '" + c.out_path + "'");
    }
    return p.code;
  } catch (const IoError& e) {
    err << "tge: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "tge: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const FormatError& e) {
    err << "tge: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    detail::print_violations(err, e.violations());
    return kValidation;
  } catch (const DegenerateLoopError& e) {
    err << "tge: " << e.what() << "\n";
    return kDegenerate;
  } catch (const Error& e) {
    err << "tge: " << e.what() << "\n";
    return kComputation;
  }
}

/// Parses `args` (program name excluded) and executes the command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Entropy and algebra computations for circle-correspondence graphs", "tge"};
  app.add_option("command", c.command, "analyze | loops | verify-basis | conjecture | rewrite | spectra")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("graph", c.graph_path, "graph specification (JSON)")->required();
  app.add_option("--kmax", c.k_max, "largest path length")->check(CLI::Range(1u, 64u));
  app.add_option("--tol", c.tol, "spectral tolerance")->check(CLI::PositiveNumber);
  app.add_option("--cap", c.cap, "cap on enumerated paths")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out_path, "write the payload to this file");
  app.add_option("--format", c.format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("-e,--expr", c.expression, "expression for rewrite");
  app.add_flag("-v,--verbose", c.verbose, "log progress to stderr");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "tge: " << e.what() << "\n" << "usage: tge <" ;
    for (std::size_t i = 0; i < commands().size(); ++i) err << (i ? "|" : "") << commands()[i];
    err << "> <graph.json> [--kmax N] [--tol X] [--cap N] [--out PATH] [--format json|csv|text] [-e EXPR]\n";
    return kUsage;
  }
  return execute(c, out, err);
}

}  // namespace tge::cli

#endif  // TGE_CLI_HPP
