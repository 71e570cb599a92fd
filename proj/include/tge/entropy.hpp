#ifndef TGE_ENTROPY_HPP
#define TGE_ENTROPY_HPP

// Entropy quantities of a circle graph:
//   h_b      log rho(|Q|)    growth of range-path counts
//   h_b(E^t) log rho(P)      the same on the transposed graph
//   h_l      limsup (1/k) log L_k, estimated from a finite loop table
//   ht(Phi)  log rho(Lambda) evaluated without checking simplicity
//   ht(Psi)  bounded below by the h_l estimate

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tge/errors.hpp"
#include "tge/graph.hpp"
#include "tge/matrix.hpp"
#include "tge/numeric.hpp"
#include "tge/paths.hpp"

namespace tge {

/// log of a Perron root; roots of valid graphs are >= 1, so rounding below 1 is clamped.
inline double log_radius(double rho) { return std::max(0.0, std::log(rho)); }

/// log of a positive big integer, safe beyond the double range.
inline double log_big(const BigInt& x) {
  if (x <= 0) throw PreconditionError("log of a non-positive integer");
  const unsigned bits = static_cast<unsigned>(msb(x));
  if (bits < 1000) return std::log(to_double(x));
  const unsigned shift = bits - 60;
  return std::log(to_double(BigInt(x >> shift))) + shift * std::log(2.0);
}

// ---------------------------------------------------------------------------
// Block entropy

inline double block_entropy(const CircleGraph& g, const SpectralOptions& opt = {}) {
  require_valid(g);
  return log_radius(spectral_radius(mat_Q_abs(g), opt).radius);
}

inline double block_entropy_transpose(const CircleGraph& g, const SpectralOptions& opt = {}) {
  return block_entropy(transpose(g), opt);
}

/// (k, (1/k) log max_v |E^k_r(v)|) for k = 1 .. k_max, for auditing h_b.
inline std::vector<std::pair<unsigned, double>> block_entropy_sequence(const CircleGraph& g,
                                                                        unsigned k_max) {
  require_valid(g);
  const ExactMatrix q = mat_Q_abs(g);
  const std::size_t n = q.size();
  std::vector<std::pair<unsigned, double>> out;
  ExactMatrix power = ExactMatrix::identity(n);
  for (unsigned k = 1; k <= k_max; ++k) {
    power = power * q;
    BigInt best = 0;
    for (std::size_t v = 0; v < n; ++v) {
      BigInt col = 0;
      for (std::size_t u = 0; u < n; ++u) col += power(u, v);
      best = std::max(best, col);
    }
    out.emplace_back(k, best > 0 ? log_big(best) / k : 0.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loop entropy

struct SandwichRow {
  unsigned k = 0;
  BigInt lower;  // |tr P^k - tr |Q|^k|
  BigInt loops;  // L_k
  BigInt upper;  // tr P^k + tr |Q|^k
  bool holds() const { return lower <= loops && loops <= upper; }
};

struct LoopEntropy {
  std::vector<std::pair<unsigned, std::optional<double>>> sequence;  // a_k, empty when L_k = 0
  double estimate = 0.0;
  unsigned tail_begin = 1;  // estimate = max a_k over [tail_begin, k_max]
  std::vector<SandwichRow> sandwich;
  std::optional<double> sandwich_lower;  // tail max of (1/k) log lower; none if all vanish
  double sandwich_upper = 0.0;           // tail max of (1/k) log upper
  bool sandwich_holds = true;

  /// Upper minus lower tail bound; infinite when the lower bound is absent.
  double sandwich_width() const {
    return sandwich_lower ? sandwich_upper - *sandwich_lower
                          : std::numeric_limits<double>::infinity();
  }
};

/// First k of the top third [ceil(2 k_max / 3), k_max].
inline unsigned tail_start(unsigned k_max) { return std::max(1u, (2 * k_max + 2) / 3); }

/// Sequence, tail estimate and sandwich from an already computed loop table.
/// Throws DegenerateLoopError when the table contains a degenerate word.
inline LoopEntropy loop_entropy(const LoopCountTable& table) {
  require_nondegenerate(table);
  if (table.rows.empty()) throw PreconditionError("empty loop table");
  const unsigned k_max = table.rows.back().k;
  LoopEntropy out;
  out.tail_begin = tail_start(k_max);
  for (const auto& row : table.rows) {
    std::optional<double> a;
    if (row.loops > 0) a = log_big(row.loops) / row.k;
    out.sequence.emplace_back(row.k, a);

    SandwichRow s{row.k, abs(BigInt(row.trace_P - row.trace_Q_abs)), row.loops,
                  row.trace_P + row.trace_Q_abs};
    out.sandwich_holds = out.sandwich_holds && s.holds();
    if (row.k >= out.tail_begin) {
      if (a) out.estimate = std::max(out.estimate, *a);
      if (s.lower > 0) {
        const double lo = log_big(s.lower) / row.k;
        out.sandwich_lower = out.sandwich_lower ? std::max(*out.sandwich_lower, lo) : lo;
      }
      if (s.upper > 0) out.sandwich_upper = std::max(out.sandwich_upper, log_big(s.upper) / row.k);
    }
    out.sandwich.push_back(std::move(s));
  }
  return out;
}

inline LoopEntropy loop_entropy_estimate(const CircleGraph& g, unsigned k_max,
                                         const LoopOptions& opt = {}) {
  require_valid(g);
  return loop_entropy(loop_table(g, k_max, opt));
}

// ---------------------------------------------------------------------------
// Non-commutative shifts

inline double ht_phi(const CircleGraph& g, const SpectralOptions& opt = {}) {
  require_valid(g);
  return log_radius(spectral_radius(mat_Lambda(g), opt).radius);
}

/// Lower bound for ht(Psi); equal to the loop entropy estimate, never claimed sharp.
inline double ht_psi_lower(const CircleGraph& g, unsigned k_max, const LoopOptions& opt = {}) {
  return loop_entropy_estimate(g, k_max, opt).estimate;
}

// ---------------------------------------------------------------------------
// Conjecture scan

enum class Verdict { Consistent, Inconsistent, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline constexpr double kConjectureTolerance = 0.05;

struct ConjectureResult {
  Verdict verdict = Verdict::Inconclusive;
  double estimate = 0.0;
  double target = 0.0;                 // log max{rho(P), rho(|Q|)}
  std::optional<double> target_signed; // log max{rho(P), rho(Q)} when Q >= 0 entrywise
  double difference = 0.0;             // estimate - target
  double tolerance = kConjectureTolerance;
  std::optional<double> sandwich_lower;
  double sandwich_upper = 0.0;
  double sandwich_width = 0.0;
  bool sandwich_holds = true;
  bool strongly_connected = false;
  bool radii_differ = false;
  bool signed_q = false;  // some q < 0
  std::string reason;
};

namespace detail {

/// Verdict from the estimate, the target and the tail sandwich [lo, hi].
inline ConjectureResult judge(const LoopEntropy& le, double rho_p, double rho_q_abs,
                              bool strongly_connected, double radius_tol) {
  ConjectureResult r;
  r.estimate = le.estimate;
  r.target = log_radius(std::max(rho_p, rho_q_abs));
  r.difference = r.estimate - r.target;
  r.sandwich_lower = le.sandwich_lower;
  r.sandwich_upper = le.sandwich_upper;
  r.sandwich_width = le.sandwich_width();
  r.sandwich_holds = le.sandwich_holds;
  r.strongly_connected = strongly_connected;
  r.radii_differ = std::abs(rho_p - rho_q_abs) > radius_tol * std::max(rho_p, rho_q_abs);

  if (!le.sandwich_lower) {
    r.verdict = Verdict::Inconclusive;
    r.reason = "tr P^k = tr |Q|^k on the tail, so the lower sandwich bound vanishes";
    return r;
  }
  const double lo = *le.sandwich_lower, hi = le.sandwich_upper;
  if (std::abs(r.difference) <= std::max(r.tolerance, r.sandwich_width)) {
    r.verdict = Verdict::Consistent;
    if (r.radii_differ && strongly_connected)
      r.reason =
          "rho(P) != rho(|Q|) on a strongly connected graph: both sandwich bounds grow like "
          "max{rho(P), rho(|Q|)}^k, which pins h_l to the target";
    else
      r.reason = "estimate within max(tolerance, sandwich width) of the target";
  } else if (r.target < lo || r.target > hi) {
    r.verdict = Verdict::Inconsistent;
    r.reason = "target lies outside the tail sandwich";
  } else {
    r.verdict = Verdict::Inconclusive;
    r.reason = "target inside the sandwich but farther than the tolerance from the estimate";
  }
  return r;
}

inline bool is_strongly_connected(const CircleGraph& g) {
  return strongly_connected_components(mat_adjacency(g)).size() == 1;
}

}  // namespace detail

inline ConjectureResult conjecture_check(const CircleGraph& g, const LoopEntropy& le,
                                         const SpectralOptions& opt = {}) {
  require_valid(g);
  const double rho_p = spectral_radius(mat_P(g), opt).radius;
  const double rho_q = spectral_radius(mat_Q_abs(g), opt).radius;
  ConjectureResult r = detail::judge(le, rho_p, rho_q, detail::is_strongly_connected(g), 1e-9);
  const ExactMatrix q = mat_Q(g);
  r.signed_q = !q.is_nonnegative();
  if (!r.signed_q) r.target_signed = log_radius(std::max(rho_p, spectral_radius(q, opt).radius));
  return r;
}

inline ConjectureResult conjecture_check(const CircleGraph& g, unsigned k_max,
                                         const SpectralOptions& sopt = {},
                                         const LoopOptions& lopt = {}) {
  return conjecture_check(g, loop_entropy_estimate(g, k_max, lopt), sopt);
}

// ---------------------------------------------------------------------------
// Full report

struct ReportOptions {
  unsigned k_max = 14;
  SpectralOptions spectral;
  LoopOptions loops;
};

struct EntropyReport {
  double h_b = 0.0;
  double h_b_transpose = 0.0;
  std::vector<std::pair<unsigned, std::optional<double>>> h_ell_sequence;
  double h_ell_estimate = 0.0;
  double ht_phi = 0.0;
  double ht_psi_lower = 0.0;
  double rho_P = 0.0;
  double rho_Q_abs = 0.0;
  double rho_Lambda = 0.0;
  ConjectureResult conjecture;

  std::vector<std::pair<unsigned, double>> h_b_sequence;
  LoopEntropy loop_entropy;
  LoopCountTable loop_table;
  double spectral_residual = 0.0;  // worst Collatz-Wielandt bracket width
  bool simplicity_checked = false; // ht(Phi) formula evaluated unconditionally
};

inline EntropyReport entropy_report(const CircleGraph& g, const ReportOptions& opt = {}) {
  require_valid(g);
  EntropyReport r;
  const SpectralResult p = spectral_radius(mat_P(g), opt.spectral);
  const SpectralResult q = spectral_radius(mat_Q_abs(g), opt.spectral);
  const SpectralResult lam = spectral_radius(mat_Lambda(g), opt.spectral);
  r.rho_P = p.radius;
  r.rho_Q_abs = q.radius;
  r.rho_Lambda = lam.radius;
  r.spectral_residual = std::max({p.residual, q.residual, lam.residual});
  r.h_b = log_radius(r.rho_Q_abs);
  r.h_b_transpose = log_radius(r.rho_P);  // |Q| of the transpose is P
  r.ht_phi = log_radius(r.rho_Lambda);
  r.h_b_sequence = block_entropy_sequence(g, opt.k_max);

  r.loop_table = loop_table(g, opt.k_max, opt.loops);
  r.loop_entropy = loop_entropy(r.loop_table);
  r.h_ell_sequence = r.loop_entropy.sequence;
  r.h_ell_estimate = r.loop_entropy.estimate;
  r.ht_psi_lower = r.h_ell_estimate;
  r.conjecture = conjecture_check(g, r.loop_entropy, opt.spectral);
  return r;
}

}  // namespace tge

#endif  // TGE_ENTROPY_HPP
