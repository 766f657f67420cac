#pragma once

#include "symmkit/gauge.hpp"
#include "symmkit/types.hpp"

namespace symmkit {

// Singular values of x, nonincreasing, length min(rows, cols).
RealVec singular_values(const CMatrix& x);

// Unitarily invariant norm: the gauge applied to the singular values.
double ideal_norm(const GaugeSpec& spec, const CMatrix& x, const GaugeOpts& opts = {});

// Rejects empty tuples and mixed shapes.
void check_tuple(const OperatorTuple& xs);

// Stacked tuples; every member must share one shape.
CMatrix vstack(const OperatorTuple& xs);
CMatrix hstack(const OperatorTuple& xs);

// ||(sum_k x_k^* x_k)^{1/2}||, the norm of the vertical stack, and the row
// analogue ||(sum_k x_k x_k^*)^{1/2}|| = norm of the horizontal stack.  The
// stacked form avoids squaring the singular values.
double column_square_norm(const GaugeSpec& spec, const OperatorTuple& xs,
                          const GaugeOpts& opts = {});
double row_square_norm(const GaugeSpec& spec, const OperatorTuple& xs,
                       const GaugeOpts& opts = {});
// ||(sum_k x_k^* x_k + x_k x_k^*)^{1/2}||; square matrices only.  Dominates
// max(column, row) and equals sqrt(column^2 + row^2) at lp:2.
double selfadjoint_square_norm(const GaugeSpec& spec, const OperatorTuple& xs,
                               const GaugeOpts& opts = {});

// Square root of a Hermitian PSD matrix.  Eigenvalues in [-tol*spread, 0) are
// clamped to zero; anything below that bound raises NumericError.
CMatrix psd_sqrt(const CMatrix& h, double eig_tol = 1e-12);

struct ThinSvd {
  CMatrix U;
  Eigen::VectorXd sigma;  // nonincreasing
  CMatrix V;
};
ThinSvd thin_svd(const CMatrix& x);

// Subgradient of x -> ideal_norm(spec, x): U diag(s) V^H with s the gauge
// subgradient at sigma(x).  Re<W, x> equals the norm and W lies in the dual
// ball (see gauge_subgradient_sorted for the product-node caveat).
CMatrix ideal_subgradient(const GaugeSpec& spec, const CMatrix& x,
                          const GaugeOpts& opts = {});

}  // namespace symmkit
