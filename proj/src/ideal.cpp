#include "symmkit/ideal.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace symmkit {

namespace {

// The two-sided Jacobi kernels lose accuracy when entries span hundreds of
// orders of magnitude (subnormal-range residue next to O(1) mass, as produced
// by long alternating iterations).  Zeroing entries below eps * max perturbs
// every singular value by less than the SVD's own backward error and removes
// the trigger.
CMatrix flush_tiny(const CMatrix& x) {
  const double mx = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  if (!(mx > 0.0) || !std::isfinite(mx)) return x;
  const double thr = mx * std::numeric_limits<double>::epsilon();
  CMatrix out = x;
  for (long j = 0; j < out.cols(); ++j)
    for (long i = 0; i < out.rows(); ++i)
      if (std::abs(out(i, j)) < thr) out(i, j) = Complex(0.0, 0.0);
  return out;
}

}  // namespace

RealVec singular_values(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(flush_tiny(x));
  const auto& s = svd.singularValues();
  return RealVec(s.data(), s.data() + s.size());
}

double ideal_norm(const GaugeSpec& spec, const CMatrix& x, const GaugeOpts& opts) {
  return gauge_norm(spec, singular_values(x), opts);
}

void check_tuple(const OperatorTuple& xs) {
  if (xs.empty()) throw AdmissibilityError("operator tuple must be nonempty");
  for (const auto& x : xs)
    if (x.rows() != xs[0].rows() || x.cols() != xs[0].cols())
      throw AdmissibilityError("operator tuple members must share one shape");
}

CMatrix vstack(const OperatorTuple& xs) {
  check_tuple(xs);
  const long r = xs[0].rows(), c = xs[0].cols();
  CMatrix out(r * static_cast<long>(xs.size()), c);
  for (size_t k = 0; k < xs.size(); ++k) out.block(r * k, 0, r, c) = xs[k];
  return out;
}

CMatrix hstack(const OperatorTuple& xs) {
  check_tuple(xs);
  const long r = xs[0].rows(), c = xs[0].cols();
  CMatrix out(r, c * static_cast<long>(xs.size()));
  for (size_t k = 0; k < xs.size(); ++k) out.block(0, c * k, r, c) = xs[k];
  return out;
}

double column_square_norm(const GaugeSpec& spec, const OperatorTuple& xs,
                          const GaugeOpts& opts) {
  return ideal_norm(spec, vstack(xs), opts);
}

double row_square_norm(const GaugeSpec& spec, const OperatorTuple& xs,
                       const GaugeOpts& opts) {
  return ideal_norm(spec, hstack(xs), opts);
}

double selfadjoint_square_norm(const GaugeSpec& spec, const OperatorTuple& xs,
                               const GaugeOpts& opts) {
  check_tuple(xs);
  if (xs[0].rows() != xs[0].cols())
    throw AdmissibilityError("selfadjoint_square_norm needs square matrices");
  CMatrix sum = CMatrix::Zero(xs[0].rows(), xs[0].cols());
  for (const auto& x : xs) sum += x.adjoint() * x + x * x.adjoint();
  return ideal_norm(spec, psd_sqrt(sum), opts);
}

CMatrix psd_sqrt(const CMatrix& h, double eig_tol) {
  if (h.rows() != h.cols()) throw AdmissibilityError("psd_sqrt needs a square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw AdmissibilityError("psd_sqrt needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) * 0.5);
  Eigen::VectorXd lam = es.eigenvalues();
  const double floor = -eig_tol * std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (long i = 0; i < lam.size(); ++i) {
    if (lam[i] < floor)
      throw NumericError("psd_sqrt: matrix has a significantly negative eigenvalue");
    lam[i] = std::sqrt(std::max(0.0, lam[i]));
  }
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

ThinSvd thin_svd(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(flush_tiny(x), Eigen::ComputeThinU | Eigen::ComputeThinV);
  return ThinSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

CMatrix ideal_subgradient(const GaugeSpec& spec, const CMatrix& x,
                          const GaugeOpts& opts) {
  ThinSvd svd = thin_svd(x);
  std::vector<double> sig(svd.sigma.data(), svd.sigma.data() + svd.sigma.size());
  std::vector<double> s = gauge_subgradient_sorted(spec, sig, opts);
  Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
  return svd.U * sv.asDiagonal() * svd.V.adjoint();
}

}  // namespace symmkit
