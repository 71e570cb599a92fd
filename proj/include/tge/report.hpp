#ifndef TGE_REPORT_HPP
#define TGE_REPORT_HPP

// JSON, CSV and text renderings of analysis results. JSON documents use
// insertion-ordered keys, big integers as decimal strings and doubles
// rounded to 12 significant digits, so equal inputs give identical bytes.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tge/bimodule.hpp"
#include "tge/entropy.hpp"
#include "tge/graph.hpp"
#include "tge/graph_io.hpp"
#include "tge/matrix.hpp"
#include "tge/paths.hpp"

namespace tge {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Rounds to 12 significant digits; non-finite values become null.
inline Json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

inline Json real(const std::optional<double>& x) { return x ? real(*x) : Json(nullptr); }

/// Same rounding for text and CSV output.
inline std::string real_text(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

inline std::string real_text(const std::optional<double>& x) { return x ? real_text(*x) : ""; }

inline Json big(const BigInt& x) { return x.str(); }

inline Json envelope(const std::string& command, const CircleGraph& g) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["tool"] = "tge";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["graph_hash"] = graph_hash(g);
  j["graph"] = graph_to_json(g);
  return j;
}

// ---------------------------------------------------------------------------
// Matrices

inline Json matrix_json(const ExactMatrix& m) {
  Json j;
  j["labels"] = m.labels();
  auto rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto row = Json::array();
    for (std::size_t c = 0; c < m.size(); ++c) row.push_back(big(m(i, c)));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

/// Array of arrays of rendered entries, e.g. [["0","u"],["1","0"]].
inline Json laurent_matrix_json(const CircleGraph& g, const LaurentMatrix& m) {
  auto rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto row = Json::array();
    for (std::size_t c = 0; c < m.size(); ++c) row.push_back(render(g, m(i, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json spectral_json(const SpectralResult& r) {
  Json j;
  j["radius"] = real(r.radius);
  j["iterations"] = r.iterations;
  j["residual"] = real(r.residual);
  return j;
}

inline Json component_json(const std::vector<ComponentSpectrum>& comps,
                           const std::vector<std::string>& labels) {
  auto out = Json::array();
  for (const auto& c : comps) {
    Json j;
    auto members = Json::array();
    for (std::size_t i : c.members) members.push_back(labels.at(i));
    j["members"] = std::move(members);
    j["radius"] = real(c.result.radius);
    j["residual"] = real(c.result.residual);
    out.push_back(std::move(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loop tables

inline Json loop_row_json(const LoopRow& r) {
  Json j;
  j["k"] = r.k;
  j["L_k"] = big(r.loops);
  j["L_k_abs_q"] = big(r.abs_q_loops);
  j["sign_discrepancy"] = r.sign_discrepancy();
  j["trace_P"] = big(r.trace_P);
  j["trace_Q_abs"] = big(r.trace_Q_abs);
  j["closed_words"] = big(r.closed_words);
  j["degenerate_word"] = r.degenerate_word ? Json(*r.degenerate_word) : Json(nullptr);
  return j;
}

inline Json loop_table_json(const LoopCountTable& t) {
  auto rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(loop_row_json(r));
  return rows;
}

inline std::string loop_table_csv(const LoopCountTable& t) {
  std::string out = "k,L_k,L_k_abs_q,sign_discrepancy,trace_P,trace_Q_abs,closed_words\n";
  for (const auto& r : t.rows) {
    out += std::to_string(r.k) + "," + r.loops.str() + "," + r.abs_q_loops.str() + "," +
           (r.sign_discrepancy() ? "1" : "0") + "," + r.trace_P.str() + "," +
           r.trace_Q_abs.str() + "," + r.closed_words.str() + "\n";
  }
  return out;
}

inline std::string loop_table_text(const LoopCountTable& t) {
  std::ostringstream out;
  for (const auto& r : t.rows) {
    out << "L_" << r.k << " = " << r.loops;
    if (r.sign_discrepancy()) out << "  (|q| formula: " << r.abs_q_loops << ")";
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Entropy

inline Json sandwich_json(const LoopEntropy& le) {
  auto rows = Json::array();
  for (const auto& s : le.sandwich) {
    Json j;
    j["k"] = s.k;
    j["lower"] = big(s.lower);
    j["L_k"] = big(s.loops);
    j["upper"] = big(s.upper);
    j["holds"] = s.holds();
    rows.push_back(std::move(j));
  }
  Json j;
  j["rows"] = std::move(rows);
  j["holds"] = le.sandwich_holds;
  j["tail_begin"] = le.tail_begin;
  j["tail_lower"] = real(le.sandwich_lower);
  j["tail_upper"] = real(le.sandwich_upper);
  return j;
}

inline Json conjecture_json(const ConjectureResult& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["estimate"] = real(c.estimate);
  j["target"] = real(c.target);
  j["target_signed"] = real(c.target_signed);
  j["difference"] = real(c.difference);
  j["tolerance"] = real(c.tolerance);
  j["sandwich_lower"] = real(c.sandwich_lower);
  j["sandwich_upper"] = real(c.sandwich_upper);
  j["sandwich_width"] = real(c.sandwich_width);
  j["sandwich_holds"] = c.sandwich_holds;
  j["strongly_connected"] = c.strongly_connected;
  j["radii_differ"] = c.radii_differ;
  j["signed_q"] = c.signed_q;
  j["reason"] = c.reason;
  return j;
}

inline Json entropy_report_json(const EntropyReport& r) {
  Json j;
  j["h_b"] = real(r.h_b);
  j["h_b_transpose"] = real(r.h_b_transpose);
  auto seq = Json::array();
  for (const auto& [k, a] : r.h_ell_sequence) seq.push_back(Json::array({k, real(a)}));
  j["h_ell_sequence"] = std::move(seq);
  j["h_ell_estimate"] = real(r.h_ell_estimate);
  j["ht_phi"] = real(r.ht_phi);
  j["ht_psi_lower"] = real(r.ht_psi_lower);
  j["rho_P"] = real(r.rho_P);
  j["rho_Q_abs"] = real(r.rho_Q_abs);
  j["rho_Lambda"] = real(r.rho_Lambda);
  j["conjecture_verdict"] = conjecture_json(r.conjecture);
  auto hb = Json::array();
  for (const auto& [k, a] : r.h_b_sequence) hb.push_back(Json::array({k, real(a)}));
  j["h_b_sequence"] = std::move(hb);
  j["sandwich"] = sandwich_json(r.loop_entropy);
  j["loops"] = loop_table_json(r.loop_table);
  j["spectral_residual"] = real(r.spectral_residual);
  j["ht_phi_simplicity_hypothesis"] = r.simplicity_checked ? "checked" : "unchecked";
  j["ht_psi_lower_is_bound"] = true;
  return j;
}

/// (k, L_k, a_k) rows.
inline std::string entropy_csv(const EntropyReport& r) {
  std::string out = "k,L_k,a_k\n";
  for (std::size_t i = 0; i < r.loop_table.rows.size(); ++i) {
    const auto& row = r.loop_table.rows[i];
    out += std::to_string(row.k) + "," + row.loops.str() + "," +
           real_text(r.h_ell_sequence[i].second) + "\n";
  }
  return out;
}

inline std::string entropy_text(const EntropyReport& r) {
  std::ostringstream out;
  out << "h_b            = " << real_text(r.h_b) << "\n"
      << "h_b_transpose  = " << real_text(r.h_b_transpose) << "\n"
      << "h_ell_estimate = " << real_text(r.h_ell_estimate) << "\n"
      << "ht_phi         = " << real_text(r.ht_phi) << " (simplicity unchecked)\n"
      << "ht_psi_lower   = " << real_text(r.ht_psi_lower) << " (lower bound)\n"
      << "rho_P          = " << real_text(r.rho_P) << "\n"
      << "rho_Q_abs      = " << real_text(r.rho_Q_abs) << "\n"
      << "rho_Lambda     = " << real_text(r.rho_Lambda) << "\n"
      << "conjecture     = " << to_string(r.conjecture.verdict) << " (target "
      << real_text(r.conjecture.target) << ", difference " << real_text(r.conjecture.difference)
      << ")\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Bimodule

inline Json basis_report_json(const BasisReport& b) {
  Json j;
  j["pass"] = b.pass;
  j["checks"] = b.checks;
  j["failed_identity"] = b.pass ? Json(nullptr) : Json(b.failed_identity);
  j["lhs"] = b.pass ? Json(nullptr) : Json(b.lhs);
  j["rhs"] = b.pass ? Json(nullptr) : Json(b.rhs);
  return j;
}

}  // namespace tge

#endif  // TGE_REPORT_HPP
