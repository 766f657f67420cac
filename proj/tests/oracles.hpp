#pragma once

// Small self-contained reference implementations used to cross-check the
// library.  These are deliberately written in the most direct way possible
// and do not share code with the paths under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double lp(std::vector<double> v, double p) {
  for (auto& x : v) x = std::abs(x);
  if (std::isinf(p)) return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

inline double ky_fan(std::vector<double> v, int k) {
  for (auto& x : v) x = std::abs(x);
  std::sort(v.begin(), v.end(), std::greater<double>());
  double s = 0.0;
  for (int i = 0; i < std::min<int>(k, v.size()); ++i) s += v[i];
  return s;
}

// dual of the Ky Fan k-ball by enumerating its extreme directions
// (normalized indicator blocks of every length)
inline double ky_fan_dual(std::vector<double> w, int k) {
  for (auto& x : w) x = std::abs(x);
  std::sort(w.begin(), w.end(), std::greater<double>());
  double best = 0.0, prefix = 0.0;
  for (size_t j = 1; j <= w.size(); ++j) {
    prefix += w[j - 1];
    best = std::max(best, prefix / std::min<double>(j, k));
  }
  return best;
}

// Schatten p-norm via the spectrum of the smaller-side Gram matrix
// (independent of any SVD code).  Eigenvalues below the noise floor of the
// eigensolver are clamped to zero so that sqrt does not inflate them.
inline double schatten(const Eigen::MatrixXcd& x, double p) {
  const Eigen::MatrixXcd gram =
      x.rows() <= x.cols() ? Eigen::MatrixXcd(x * x.adjoint())
                           : Eigen::MatrixXcd(x.adjoint() * x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const double top = es.eigenvalues().size() ? std::max(0.0, es.eigenvalues().maxCoeff()) : 0.0;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * top;
  std::vector<double> s;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()[i];
    s.push_back(lam > floor ? std::sqrt(lam) : 0.0);
  }
  return lp(s, p);
}

}  // namespace oracle
