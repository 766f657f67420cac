#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "symmkit/gauge.hpp"
#include "symmkit/kfs.hpp"
#include "symmkit/types.hpp"

namespace symmkit {

// entrywise product (phi acting as a multiplier symbol on x)
CMatrix hadamard(const CMatrix& phi, const CMatrix& x);

struct SchurOpts {
  int restarts = 64;   // total ascent starts (deterministic palette + random fill)
  int iters = 60;      // alternating-ascent sweeps per start
  int n_cap = 6;       // two_sided_check symbol-size cap
  double tol = 1e-9;
  std::uint64_t seed = 0x73636831ull;
  KfsOpts kfs;
  GaugeOpts gauge;
};

// Lower bound on sup ||phi . x||_F-ideal / ||x||_E-ideal by alternating
// ascent: pair the image with a dual-side subgradient, pull it back through
// the symbol, and re-expand in the E ball.  Exact in the closed cases
// (all-ones symbol, rank-one symbol on matching spaces, both spaces lp:2).
double multiplier_norm_lower(const CMatrix& phi, const GaugeSpec& espec,
                             const GaugeSpec& fspec, const SchurOpts& opts = {});

// Shared result for the characterization norms: value of |phi| in the
// decomposition space  inner(l_q rows) + transposed copy, evaluated
// symmetrically in phi and its transpose so transpose duality is exact.
struct CharNormResult {
  double value = 0.0;
  double lower_bound = 0.0;   // Hoelder-certified
  bool certified = true;
  bool exact_spaces = true;   // inner gauge canonicalized to a closed form
  GaugeSpec inner = GaugeSpec::lp(2);  // the gauge actually used on rows
  double q = kInf;            // row exponent of the decomposition space
  CMatrix part_row, part_col;  // recombine to phi entrywise
};

// Norm characterizing multipliers into the Frobenius ideal: rows measured in
// l_inf, outer gauge derived from espec by concavify(2) -> dual -> convexify(2).
// Requires a 2-convexity flag on espec.
CharNormResult to_l2_char_detail(const CMatrix& phi, const GaugeSpec& espec,
                                 const SchurOpts& opts = {});
double to_l2_char_norm(const CMatrix& phi, const GaugeSpec& espec,
                       const SchurOpts& opts = {});

// Norm characterizing multipliers between two ideals: the row gauge is the
// pointwise product of the espec-derived chain and the fspec-dual-derived
// chain.  Requires espec 2-convex-flagged and fspec 2-concave-flagged.
CharNormResult sesf_char_detail(const CMatrix& phi, const GaugeSpec& espec,
                                const GaugeSpec& fspec, const SchurOpts& opts = {});
double sesf_char_norm(const CMatrix& phi, const GaugeSpec& espec,
                      const GaugeSpec& fspec, const SchurOpts& opts = {});

// Target of the p-parameterized characterization: the Schatten class uses
// l_inf rows; the entrywise grid target uses l_q rows with q = 2p/(2-p).
enum class LpCharTarget { schatten, grid };

// Row gauge chain concavify(p) -> dual -> convexify(p) applied to espec
// (plain dual at p = 1).  p must lie in [1, 2]; espec 2-convex-flagged.
CharNormResult to_lp_char_detail(const CMatrix& phi, const GaugeSpec& espec,
                                 double p, LpCharTarget target = LpCharTarget::schatten,
                                 const SchurOpts& opts = {});
double to_lp_char_norm(const CMatrix& phi, const GaugeSpec& espec, double p,
                       LpCharTarget target = LpCharTarget::schatten,
                       const SchurOpts& opts = {});

struct MultiplierReport {
  double lower = 0.0;       // direct ascent lower bound
  double upper_char = 0.0;  // characterization norm
  std::string espec, fspec;
  std::string inner;        // resolved row gauge of the decomposition space
  bool exact_spaces = true;
  bool char_certified = true;
  double char_lower_bound = 0.0;
  CMatrix part_row, part_col;  // optimal decomposition, recombines to phi
  double ratio = 1.0;          // upper/lower, the empirical equivalence constant
  double ratio_bound = 1.0;    // constant under which lower <= bound*upper is recorded
  bool exact_direction = false;  // fspec resolved to lp:2; one-sided check enforced
  double wall_ms = 0.0;
};

// lower = multiplier_norm_lower, upper = the matching characterization norm
// (the Frobenius-target one when fspec resolves to lp:2, where the inequality
// lower <= upper*(1+1e-6) is asserted and a failure raises NumericError).
MultiplierReport two_sided_check(const CMatrix& phi, const GaugeSpec& espec,
                                 const GaugeSpec& fspec, const SchurOpts& opts = {});

nlohmann::ordered_json multiplier_report_to_json(const MultiplierReport& rep,
                                                 bool include_timing);

}  // namespace symmkit
