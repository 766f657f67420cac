#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "symmkit/types.hpp"

namespace symmkit {

// Budgets and determinism knobs for the numeric fallback paths.
struct GaugeOpts {
  int dual_restarts = 32;   // multi-start count for the numeric dual maximizer
  int dual_iters = 500;     // projected-ascent iterations per start
  int product_restarts = 4;
  int product_iters = 400;
  double tol = 1e-9;
  std::uint64_t seed = 0x73796d6d6b6974ull;
};

// Symmetric gauge: permutation-invariant absolute normalized norm on real
// vectors, described symbolically.  Specs are immutable; combinators share
// children.  Each node carries convexity/concavity flags: the structural part
// follows from the construction rules, and probe-declared exponents can be
// attached with with_convex_flag / with_concave_flag.
class GaugeSpec {
 public:
  enum class Kind { lp, ky_fan, dual, convexify, concavify, product };

  static GaugeSpec lp(double p);
  static GaugeSpec ky_fan(int k);
  static GaugeSpec dual(const GaugeSpec& base);
  static GaugeSpec convexify(const GaugeSpec& base, double r);
  static GaugeSpec concavify(const GaugeSpec& base, double r);
  static GaugeSpec product(const GaugeSpec& g, const GaugeSpec& h);

  Kind kind() const;
  double p() const;        // lp
  int k() const;           // ky_fan
  double r() const;        // convexify / concavify
  GaugeSpec base() const;  // dual / convexify / concavify
  GaugeSpec left() const;  // product
  GaugeSpec right() const;

  // Largest r such that the gauge is r-convex with constant 1, and smallest q
  // such that it is q-concave with constant 1 (structural rules combined with
  // declared flags).  r-convexity for r <= the exponent follows by monotonicity.
  double convexity_exponent() const;
  double concavity_exponent() const;
  bool is_convex(double r) const { return convexity_exponent() >= r - 1e-9; }
  bool is_concave(double q) const { return concavity_exponent() <= q + 1e-9; }

  GaugeSpec with_convex_flag(double r) const;
  GaugeSpec with_concave_flag(double q) const;

  // Canonical text form; parse_gauge_spec round-trips it.
  std::string str() const;

  friend bool operator==(const GaugeSpec& a, const GaugeSpec& b) {
    return a.str() == b.str();
  }

 private:
  struct Node;
  explicit GaugeSpec(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Parser for the canonical text form:
//   lp:<p> | kyfan:<k> | dual(g) | conv(g,<r>) | conc(g,<r>) | prod(g,h)
// with <p>, <r> a decimal or "inf".  Throws ParseError.
GaugeSpec parse_gauge_spec(const std::string& text);

// ---- evaluation ------------------------------------------------------------

// Value of the gauge at v.  Gauges are absolute: only |v| matters, and the
// entries are sorted internally.  Throws AdmissibilityError when a node's
// precondition fails (concavify base not r-convex, product factors not
// 2-convex).
double gauge_norm(const GaugeSpec& spec, std::span<const double> v,
                  const GaugeOpts& opts = {});

// Koethe dual gauge at v: sup { <|v|, x> : gauge(x) <= 1 }.  Closed form when
// the resolved spec is lp (-> conjugate exponent) or ky_fan(k)
// (-> max(linf, l1/k)); multi-start projected ascent otherwise.
double dual_norm(const GaugeSpec& spec, std::span<const double> v,
                 const GaugeOpts& opts = {});

struct DualNormResult {
  double value = 0.0;
  bool converged = true;
  // maximizer in the sorted-moduli frame: nonincreasing, nonneg, gauge <= 1
  std::vector<double> maximizer;
};

// Numeric path only (closed forms disabled); exposed so the fallback can be
// validated against the closed forms.
DualNormResult dual_norm_numeric(const GaugeSpec& spec, std::span<const double> v,
                                 const GaugeOpts& opts = {});

// Exact rewrites into a canonical node:
//   conv(lp:p, r) -> lp:p*r          conc(lp:p, r) -> lp:p/r   (p >= r)
//   dual(lp:p)    -> lp:p'           dual(dual(g)) -> g
//   prod(lp:a, lp:b) -> lp:c with 1/c = 1/a + 1/b
// Applied bottom-up; nodes that do not simplify are returned unchanged.
GaugeSpec resolve_closed_form(const GaugeSpec& spec);

struct ProductNormResult {
  double value = 0.0;
  bool converged = true;
  // factors in the sorted-moduli frame with factor_g * factor_h = |z| sorted
  std::vector<double> factor_g, factor_h;
};

// inf { ||x||_g * ||y||_h : |z| = x.*y pointwise, x,y >= 0 }.  Requires both
// factors 2-convex (flags).  Closed form for lp factors; otherwise descent on
// the log-parametrized split, which is convex.  Returns an upper bound when
// the iteration budget is exhausted (converged=false).
ProductNormResult product_gauge_norm_detail(const GaugeSpec& g, const GaugeSpec& h,
                                            std::span<const double> z,
                                            const GaugeOpts& opts = {});
double product_gauge_norm(const GaugeSpec& g, const GaugeSpec& h,
                          std::span<const double> z, const GaugeOpts& opts = {});

struct ProbeReport {
  double p = 2.0;
  int trials = 0;
  std::uint64_t seed = 0;
  bool convex_pass = false;
  bool concave_pass = false;
  // worst observed ratio lhs/rhs for the defining inequality of each
  // direction; pass means <= 1 + 1e-9
  double worst_convex_ratio = 0.0;
  double worst_concave_ratio = 0.0;
  GaugeSpec flagged;  // input spec with flags set for the directions that passed
};

// Randomized p-convexity / p-concavity check on vector pairs.  Evidence, not
// proof: a pass only declares a flag.
ProbeReport convexity_probe(const GaugeSpec& spec, double p, int trials,
                            std::uint64_t seed, const GaugeOpts& opts = {});

// Subgradient of the gauge at w (nonincreasing, nonneg): returns s with
// <s, w> = gauge(w) and s in the dual unit ball.  Used for descent directions
// and for Hoelder certificates.  For product nodes the returned s comes from
// the optimal factorization and is a candidate only; callers that need
// guaranteed dual feasibility renormalize.
std::vector<double> gauge_subgradient_sorted(const GaugeSpec& spec,
                                             std::span<const double> w,
                                             const GaugeOpts& opts = {});

// Same contract for arbitrary nonneg v (mapped through the sorting
// permutation).
std::vector<double> gauge_subgradient(const GaugeSpec& spec, std::span<const double> v,
                                      const GaugeOpts& opts = {});

// helpers shared by the optimizers (exposed for tests)
std::vector<double> sorted_moduli(std::span<const double> v);
// Euclidean projection onto { x : x_1 >= x_2 >= ... >= x_n >= 0 } (pool
// adjacent violators, then clamp; exact for this cone).
void project_nonincreasing_nonneg(std::vector<double>& x);

}  // namespace symmkit
