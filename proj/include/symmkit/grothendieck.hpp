#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "symmkit/gauge.hpp"
#include "symmkit/types.hpp"

namespace symmkit {

// Linear map from n x n matrices into a d-dimensional Hilbert space,
// represented by a d x n^2 coefficient array acting on col-major vec(x).
struct LinearMapToHilbert {
  int n = 0;
  int d = 0;
  CMatrix coeff;

  Eigen::VectorXcd apply(const CMatrix& x) const;
  std::string digest() const;
};

LinearMapToHilbert map_from_json(const nlohmann::json& j);
nlohmann::ordered_json map_to_json(const LinearMapToHilbert& T);
LinearMapToHilbert random_map(int n, int d, std::uint64_t seed);

struct GroOpts {
  int norm_restarts = 8;       // random seeds beyond the deterministic palette
  int norm_iters = 200;
  int dykstra_iters = 2000;
  int violation_restarts = 16;
  int violation_iters = 150;
  int outer_rounds = 24;
  double tol = 1e-9;
  std::uint64_t seed = 0x67726f31ull;
  OperatorTuple warm_samples;  // constraints seeded into certificate_search
  GaugeOpts gauge;
};

// Lower bound on sup{ |T(x)|_2 : ideal_norm(spec, x) <= 1 } by projected
// ascent over the unit sphere of the gauge; exact (top singular value of the
// coefficient array) when spec resolves to lp:2.
double operator_norm_lower(const LinearMapToHilbert& T, const GaugeSpec& spec,
                           const GroOpts& opts = {});

// (sum_k |T(x_k)|^2)^{1/2} / (tnorm * selfadjoint_square_norm(spec, t)).
// Rejects tuples with a vanishing denominator.
double c_inequality_ratio(const LinearMapToHilbert& T, const GaugeSpec& spec,
                          const OperatorTuple& t, double tnorm, const GroOpts& opts = {});
double c_inequality_ratio(const LinearMapToHilbert& T, const GaugeSpec& spec,
                          const OperatorTuple& t, const GroOpts& opts = {});

// Positive norm-one functional represented through trace duality: F is
// Hermitian PSD, lies in the unit ball of the dual of the 2-concavification,
// and for every stored sample |T(x)|^2 <= C^2 tnorm^2 trace(F (x*x + xx*)).
struct Certificate {
  CMatrix F;
  double constant = 0.0;
  OperatorTuple active_samples;
  double tnorm = 0.0;
};

enum class SearchStatus { certified, violated, inconclusive };

struct SearchResult {
  SearchStatus status = SearchStatus::inconclusive;
  Certificate cert;        // populated when certified
  OperatorTuple samples;   // separating evidence when violated
  int rounds = 0;
  double worst_violation = 0.0;  // last violation-search maximum
};

// Cutting-plane search: alternating-projection feasibility for F against the
// accumulated samples, then nonconvex ascent for a violating x on the gauge
// unit sphere.  Requires a 2-convex spec (the concavification must exist).
SearchResult certificate_search(const LinearMapToHilbert& T, const GaugeSpec& spec,
                                double C, const GroOpts& opts = {});

struct CheckReport {
  bool ok = false;
  double min_eig = 0.0;          // of F, relative floor -1e-10*||F||
  double ball_norm = 0.0;        // ideal_norm(dual2, F), must be <= 1 + 1e-8
  double worst_sample_slack = 0.0;  // max over samples of lhs - rhs
  bool tnorm_consistent = false;
  std::string message;
};

// Independent re-verification of the three certificate invariants; recomputes
// the operator norm itself and cross-checks the stored value.
CheckReport verify_certificate(const LinearMapToHilbert& T, const GaugeSpec& spec,
                               const Certificate& cert, const GroOpts& opts = {});

nlohmann::ordered_json certificate_to_json(const Certificate& cert,
                                           const LinearMapToHilbert& T,
                                           const GaugeSpec& spec);

struct CertificateFile {
  LinearMapToHilbert map;
  GaugeSpec spec = GaugeSpec::lp(2);
  Certificate cert;
};
CertificateFile certificate_from_json(const nlohmann::json& j);

struct C1Attempt {
  double c = 0.0;
  SearchStatus status = SearchStatus::inconclusive;
};

struct C1Report {
  double tnorm = 0.0;
  // max over sampled tuples of the (C)-form and (K)-form ratios; the split
  // denominator never exceeds the selfadjoint one, so c1 <= c2 must hold
  double empirical_c1 = 0.0;
  double empirical_c2 = 0.0;
  // measured Khintchine ratio (split/rademacher) for the Koethe-dual gauge,
  // defined when that dual is 2-concave; 0 otherwise
  double dual_k_ratio = 0.0;
  bool ordering_ok = false;
  double violated_c = 0.0;       // largest C that produced a violation
  double certified_c = kInf;     // smallest C that produced a certificate
  bool bracket_ok = false;
  std::vector<C1Attempt> attempts;
  double wall_ms = 0.0;
};

C1Report estimate_c1(const LinearMapToHilbert& T, const GaugeSpec& spec,
                     const GroOpts& opts = {});

nlohmann::ordered_json c1_report_to_json(const C1Report& rep, bool include_timing);

}  // namespace symmkit
