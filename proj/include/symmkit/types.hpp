#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symmkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RealVec = std::vector<double>;
using OperatorTuple = std::vector<CMatrix>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Dimension guard applied by the file loaders and the CLI.
inline constexpr int kDefaultDimCap = 64;

// Error taxonomy.  The CLI maps these onto distinct exit codes.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- extended-real exponent arithmetic on [1, inf] ------------------------

inline bool exp_is_inf(double p) { return std::isinf(p); }

inline void check_exponent(double p, const char* what = "exponent") {
  if (std::isnan(p) || p < 1.0)
    throw AdmissibilityError(std::string(what) + " must lie in [1, inf]");
}

// Hoelder conjugate: 1' = inf, inf' = 1, p' = p/(p-1).  Results a few ulps
// from an integer are snapped to it so that p -> p' -> p'' round-trips.
inline double conjugate_exponent(double p) {
  check_exponent(p);
  if (p == 1.0) return kInf;
  if (exp_is_inf(p)) return 1.0;
  const double c = p / (p - 1.0);
  const double nearest = std::round(c);
  if (nearest >= 1.0 && std::abs(c - nearest) <= 16.0 * std::numeric_limits<double>::epsilon() * c)
    return nearest;
  return c;
}

inline double exp_mul(double p, double r) {
  if (exp_is_inf(p) || exp_is_inf(r)) return kInf;
  return p * r;
}

inline double exp_div(double p, double r) {
  if (exp_is_inf(p)) return kInf;
  return p / r;
}

// c with 1/c = 1/a + 1/b.
inline double exp_combine(double a, double b) {
  if (exp_is_inf(a)) return b;
  if (exp_is_inf(b)) return a;
  return (a * b) / (a + b);
}

inline bool exp_close(double a, double b, double tol = 1e-12) {
  if (exp_is_inf(a) || exp_is_inf(b)) return exp_is_inf(a) && exp_is_inf(b);
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

}  // namespace symmkit
