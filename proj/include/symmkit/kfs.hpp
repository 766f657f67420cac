#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "symmkit/gauge.hpp"
#include "symmkit/types.hpp"

namespace symmkit {

struct KfsOpts {
  int sum_iters = 5000;    // projected-subgradient budget for sum splits
  int sum_restarts = 2;    // random inits beyond the deterministic palette
  double tol = 1e-6;       // relative duality-gap target
  std::uint64_t seed = 0x6b667331ull;
  GaugeOpts gauge;
};

// Koethe function space on the grid, described symbolically:
//   mixed(E, p)  outer gauge E of the row lp norms
//   t(X)         X evaluated on the transpose
//   sum(X, Y)    decomposition norm: inf { |z| <= x + y } of ||x||_X + ||y||_Y
//   cap(X, Y)    max of the two norms
//   lpgrid:p     entrywise lp of the whole matrix
// All are lattice norms: values depend on entrywise moduli only.
class KfsSpec {
 public:
  enum class Kind { mixed_row, transpose, sum, intersect, lp_grid };

  static KfsSpec mixed_row(const GaugeSpec& outer, double p);
  static KfsSpec transpose(const KfsSpec& x);
  static KfsSpec sum(const KfsSpec& x, const KfsSpec& y);
  static KfsSpec intersect(const KfsSpec& x, const KfsSpec& y);
  static KfsSpec lp_grid(double p);

  Kind kind() const;
  GaugeSpec outer() const;  // mixed_row
  double p() const;         // mixed_row / lp_grid
  KfsSpec child() const;    // transpose
  KfsSpec left() const;     // sum / intersect
  KfsSpec right() const;

  std::string str() const;
  friend bool operator==(const KfsSpec& a, const KfsSpec& b) {
    return a.str() == b.str();
  }

 private:
  struct Node;
  explicit KfsSpec(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Koethe dual, computed structurally:
//   mixed(E, p)' = mixed(dual(E) resolved, p'),  t(X)' = t(X'),
//   sum' = cap of duals, cap' = sum of duals, lpgrid' = conjugate exponent.
KfsSpec kfs_dual(const KfsSpec& x);

struct KfsNormResult {
  double value = 0.0;        // upper bound when certified is false
  double lower_bound = 0.0;  // Hoelder-certified lower bound
  bool certified = true;
  // top-level sum decomposition |z| = part_x + part_y (nonneg); for other
  // kinds part_x = |z| and part_y = 0
  RMatrix part_x, part_y;
};

double kfs_norm(const KfsSpec& x, const CMatrix& z, const KfsOpts& opts = {});
KfsNormResult kfs_norm_detail(const KfsSpec& x, const CMatrix& z,
                              const KfsOpts& opts = {});

// Subgradient at A >= 0: W >= 0 with <W, A> = norm(A), W in the dual ball.
// For sum nodes the certificate of the inner split is returned (approximate
// pairing, exact feasibility).
RMatrix kfs_subgradient(const KfsSpec& x, const RMatrix& A, const KfsOpts& opts = {});

// Parser for the canonical text form (see str()); throws ParseError.
KfsSpec parse_kfs_spec(const std::string& text);

}  // namespace symmkit
