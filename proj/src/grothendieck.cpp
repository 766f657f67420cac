#include "symmkit/grothendieck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "symmkit/ideal.hpp"
#include "symmkit/khintchine.hpp"
#include "symmkit/matrix_io.hpp"
#include "symmkit/rng.hpp"

namespace symmkit {

Eigen::VectorXcd LinearMapToHilbert::apply(const CMatrix& x) const {
  if (x.rows() != n || x.cols() != n)
    throw AdmissibilityError("map input shape mismatch");
  return coeff * Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

std::string LinearMapToHilbert::digest() const { return matrix_digest(coeff); }

LinearMapToHilbert map_from_json(const nlohmann::json& j) {
  LinearMapToHilbert T;
  if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("coefficients"))
    throw ParseError("map JSON needs fields n, d, coefficients");
  T.n = j.at("n").get<int>();
  T.d = j.at("d").get<int>();
  if (T.n < 1 || T.d < 1 || T.n > kDefaultDimCap || T.d > kDefaultDimCap)
    throw AdmissibilityError("map dimensions out of range");
  T.coeff = matrix_from_json(j.at("coefficients"), kDefaultDimCap * kDefaultDimCap);
  if (T.coeff.rows() != T.d || T.coeff.cols() != static_cast<long>(T.n) * T.n)
    throw AdmissibilityError("coefficient array must be d x n^2");
  return T;
}

nlohmann::ordered_json map_to_json(const LinearMapToHilbert& T) {
  nlohmann::ordered_json j;
  j["n"] = T.n;
  j["d"] = T.d;
  j["coefficients"] = matrix_to_json(T.coeff);
  return j;
}

LinearMapToHilbert random_map(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw AdmissibilityError("map dimensions must be positive");
  LinearMapToHilbert T;
  T.n = n;
  T.d = d;
  T.coeff.resize(d, static_cast<long>(n) * n);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < T.coeff.rows(); ++i)
    for (Eigen::Index j = 0; j < T.coeff.cols(); ++j) T.coeff(i, j) = rng.cgaussian();
  return T;
}

namespace {

CMatrix unvec(const Eigen::VectorXcd& v, int n) {
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

bool is_lp(const GaugeSpec& g, double p) {
  return g.kind() == GaugeSpec::Kind::lp && exp_close(g.p(), p);
}

// x*x + xx*
CMatrix sample_gram(const CMatrix& x) { return x.adjoint() * x + x * x.adjoint(); }

double real_pairing(const CMatrix& a, const CMatrix& b) {
  return (a.array().conjugate() * b.array()).sum().real();
}

}  // namespace

double operator_norm_lower(const LinearMapToHilbert& T, const GaugeSpec& spec,
                           const GroOpts& opts) {
  if (T.coeff.size() == 0) return 0.0;
  const GaugeSpec resolved = resolve_closed_form(spec);
  if (is_lp(resolved, 2.0)) {
    Eigen::JacobiSVD<CMatrix> svd(T.coeff);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  }

  const int n = T.n;
  const CMatrix gram = T.coeff.adjoint() * T.coeff;  // n^2 x n^2
  auto value_of = [&](const CMatrix& x) -> double {
    const double nx = ideal_norm(spec, x, opts.gauge);
    if (nx <= 1e-300) return 0.0;
    return T.apply(x).norm() / nx;
  };

  double best = 0.0;
  CMatrix xbest;
  auto consider = [&](const CMatrix& x) {
    const double v = value_of(x);
    if (v > best) {
      best = v;
      xbest = x;
    }
  };

  // deterministic palette: matrix units, identity, leading right singular
  // vector of the coefficients, then random starts
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      consider(e);
    }
  consider(CMatrix::Identity(n, n));
  {
    Eigen::JacobiSVD<CMatrix> svd(T.coeff, Eigen::ComputeThinV);
    if (svd.matrixV().cols() > 0) consider(unvec(svd.matrixV().col(0), n));
  }
  Rng rng(derive_seed(opts.seed, 0x6e6f726du));
  std::vector<CMatrix> starts;
  if (xbest.size() > 0) starts.push_back(xbest);
  for (int s = 0; s < opts.norm_restarts; ++s) {
    CMatrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = rng.cgaussian();
    starts.push_back(std::move(x));
  }

  for (const CMatrix& x0 : starts) {
    CMatrix x = x0;
    double nx = ideal_norm(spec, x, opts.gauge);
    if (nx <= 1e-300) continue;
    x /= nx;
    double cur = value_of(x);
    consider(x);
    double alpha = 0.5;
    for (int it = 0; it < opts.norm_iters; ++it) {
      Eigen::Map<const Eigen::VectorXcd> v(x.data(), x.size());
      Eigen::VectorXcd g = gram * v;  // gradient direction of |Tx|^2
      const double gn = g.norm();
      if (gn <= 1e-300) break;
      CMatrix cand = x + (alpha / gn) * unvec(g, n);
      const double cn = ideal_norm(spec, cand, opts.gauge);
      if (cn <= 1e-300) break;
      cand /= cn;
      const double cv = value_of(cand);
      if (cv > cur) {
        x = cand;
        cur = cv;
        consider(x);
        alpha = std::min(alpha * 1.3, 2.0);
      } else {
        alpha *= 0.5;
        if (alpha < 1e-12) break;
      }
    }
  }
  return best;
}

double c_inequality_ratio(const LinearMapToHilbert& T, const GaugeSpec& spec,
                          const OperatorTuple& t, double tnorm, const GroOpts& opts) {
  check_tuple(t);
  if (t[0].rows() != T.n || t[0].cols() != T.n)
    throw AdmissibilityError("tuple shape does not match the map");
  double num = 0.0;
  for (const auto& x : t) num += T.apply(x).squaredNorm();
  num = std::sqrt(num);
  const double sa = selfadjoint_square_norm(spec, t, opts.gauge);
  const double den = tnorm * sa;
  if (den <= 1e-300)
    throw AdmissibilityError("c_inequality_ratio: zero denominator (zero tuple or zero map)");
  return num / den;
}

double c_inequality_ratio(const LinearMapToHilbert& T, const GaugeSpec& spec,
                          const OperatorTuple& t, const GroOpts& opts) {
  return c_inequality_ratio(T, spec, t, operator_norm_lower(T, spec, opts), opts);
}

namespace {

// ---- feasibility inner loop -------------------------------------------------

struct BallProjector {
  GaugeSpec dual2;
  enum class Mode { trace, frobenius, operator_clamp, radial } mode;

  explicit BallProjector(const GaugeSpec& d2) : dual2(d2) {
    if (is_lp(d2, 1.0))
      mode = Mode::trace;
    else if (is_lp(d2, 2.0))
      mode = Mode::frobenius;
    else if (d2.kind() == GaugeSpec::Kind::lp && exp_is_inf(d2.p()))
      mode = Mode::operator_clamp;
    else
      mode = Mode::radial;  // inexact retraction; checker validates post hoc
  }

  CMatrix apply(const CMatrix& f, const GaugeOpts& gauge) const {
    CMatrix h = 0.5 * (f + f.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    Eigen::VectorXd lam = es.eigenvalues();
    RealVec mods(static_cast<std::size_t>(lam.size()));
    for (Eigen::Index i = 0; i < lam.size(); ++i) mods[static_cast<std::size_t>(i)] = std::abs(lam(i));
    const double nrm = gauge_norm(dual2, mods, gauge);
    if (nrm <= 1.0) return h;
    switch (mode) {
      case Mode::frobenius:
      case Mode::radial:
        return h / nrm;
      case Mode::operator_clamp:
        for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::clamp(lam(i), -1.0, 1.0);
        break;
      case Mode::trace: {
        // project the eigenvalues onto the l1 ball (soft threshold)
        std::vector<double> sorted(mods);
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double cum = 0.0, theta = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
          cum += sorted[i];
          const double cand = (cum - 1.0) / static_cast<double>(i + 1);
          if (cand < sorted[i]) theta = cand;
        }
        theta = std::max(theta, 0.0);
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
          const double mag = std::max(std::abs(lam(i)) - theta, 0.0);
          lam(i) = lam(i) >= 0.0 ? mag : -mag;
        }
        break;
      }
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  }
};

CMatrix project_psd(const CMatrix& f) {
  CMatrix h = 0.5 * (f + f.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

struct InnerProblem {
  std::vector<CMatrix> grams;  // x*x + xx* per sample
  std::vector<double> rhs;     // required trace(F gram) >= rhs
};

bool inner_feasible(const InnerProblem& prob, const CMatrix& F, double slack) {
  for (std::size_t s = 0; s < prob.grams.size(); ++s)
    if (real_pairing(F, prob.grams[s]) < prob.rhs[s] - slack) return false;
  return true;
}

// Dykstra alternating projections onto PSD ∩ dual ball ∩ sample half-spaces.
bool solve_inner(const InnerProblem& prob, const BallProjector& ball, CMatrix& F,
                 const GroOpts& opts) {
  const auto m = prob.grams.size();
  const int sets = 2 + static_cast<int>(m);
  std::vector<CMatrix> incr(static_cast<std::size_t>(sets),
                            CMatrix::Zero(F.rows(), F.cols()));
  const double feas_tol = 1e-12;
  for (int it = 0; it < opts.dykstra_iters; ++it) {
    for (int j = 0; j < sets; ++j) {
      CMatrix y = F + incr[static_cast<std::size_t>(j)];
      CMatrix p;
      if (j == 0) {
        p = project_psd(y);
      } else if (j == 1) {
        p = ball.apply(y, opts.gauge);
      } else {
        const std::size_t s = static_cast<std::size_t>(j - 2);
        const double val = real_pairing(y, prob.grams[s]);
        if (val >= prob.rhs[s]) {
          p = y;
        } else {
          const double q = prob.grams[s].squaredNorm();
          p = q > 0.0 ? CMatrix(y + ((prob.rhs[s] - val) / q) * prob.grams[s]) : y;
        }
      }
      incr[static_cast<std::size_t>(j)] = y - p;
      F = std::move(p);
    }
    if (it % 8 == 7) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (F + F.adjoint()));
      const double fn = std::max(F.norm(), 1e-300);
      const bool psd_ok = es.eigenvalues().minCoeff() >= -1e-11 * fn;
      RealVec mods(static_cast<std::size_t>(es.eigenvalues().size()));
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        mods[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
      const bool ball_ok = gauge_norm(ball.dual2, mods, opts.gauge) <= 1.0 + 1e-11;
      if (psd_ok && ball_ok && inner_feasible(prob, F, feas_tol)) break;
    }
  }
  // exact cleanup: clamp to the PSD cone (entrywise smaller spectrum, so the
  // ball is kept), then rescale into the ball if marginally outside
  F = project_psd(F);
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(F);
    RealVec mods(static_cast<std::size_t>(es.eigenvalues().size()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      mods[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
    const double nrm = gauge_norm(ball.dual2, mods, opts.gauge);
    if (nrm > 1.0) F /= nrm;
  }
  return inner_feasible(prob, F, 1e-9);
}

// ---- violation search --------------------------------------------------------

CMatrix kron_ft_i(const CMatrix& F) {  // trace(F x*x) = v^H (F^T ⊗ I) v
  const int n = static_cast<int>(F.rows());
  CMatrix out = CMatrix::Zero(static_cast<long>(n) * n, static_cast<long>(n) * n);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i) out(b * n + i, a * n + i) = F(a, b);
  return out;
}

CMatrix kron_i_f(const CMatrix& F) {  // trace(F xx*) = v^H (I ⊗ F) v
  const int n = static_cast<int>(F.rows());
  CMatrix out = CMatrix::Zero(static_cast<long>(n) * n, static_cast<long>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(j * n + a, j * n + b) = F(a, b);
  return out;
}

struct ViolationResult {
  double value = -kInf;
  CMatrix x;
};

ViolationResult violation_search(const LinearMapToHilbert& T, const GaugeSpec& spec,
                                 const CMatrix& F, double c2t2,
                                 const OperatorTuple& samples, const GroOpts& opts,
                                 std::uint64_t round) {
  const int n = T.n;
  const CMatrix Q = CMatrix(T.coeff.adjoint() * T.coeff) -
                    c2t2 * (kron_ft_i(F) + kron_i_f(F));
  ViolationResult out;

  const GaugeSpec resolved = resolve_closed_form(spec);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (Q + Q.adjoint()));
  if (is_lp(resolved, 2.0)) {
    // on the Frobenius ball the quadratic form is maximized by the leading
    // eigenvector; exact
    const Eigen::Index top = es.eigenvalues().size() - 1;
    out.value = es.eigenvalues()(top);
    out.x = unvec(es.eigenvectors().col(top), n);
    return out;
  }

  auto eval = [&](const CMatrix& x) -> double {
    Eigen::Map<const Eigen::VectorXcd> v(x.data(), x.size());
    return (v.adjoint() * Q * v)(0, 0).real();
  };
  auto consider = [&](CMatrix x) {
    const double nx = ideal_norm(spec, x, opts.gauge);
    if (nx <= 1e-300) return;
    x /= nx;
    const double val = eval(x);
    if (val > out.value) {
      out.value = val;
      out.x = x;
    }
  };

  std::vector<CMatrix> seeds;
  {
    const Eigen::Index top = es.eigenvalues().size() - 1;
    seeds.push_back(unvec(es.eigenvectors().col(top), n));
  }
  for (const auto& s : samples) seeds.push_back(s);
  for (int i = 0; i < n && static_cast<int>(seeds.size()) < opts.violation_restarts; ++i)
    for (int j = 0; j < n && static_cast<int>(seeds.size()) < opts.violation_restarts; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      seeds.push_back(std::move(e));
    }
  Rng rng(derive_seed(opts.seed, 0x76696f00u + round));
  while (static_cast<int>(seeds.size()) < opts.violation_restarts) {
    CMatrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = rng.cgaussian();
    seeds.push_back(std::move(x));
  }

  for (const CMatrix& s : seeds) {
    const double ns = ideal_norm(spec, s, opts.gauge);
    if (ns <= 1e-300) continue;
    CMatrix x = s / ns;
    double cur = eval(x);
    consider(x);
    double alpha = 0.5;
    for (int it = 0; it < opts.violation_iters; ++it) {
      Eigen::Map<const Eigen::VectorXcd> v(x.data(), x.size());
      Eigen::VectorXcd g = Q * v;
      const double gn = g.norm();
      if (gn <= 1e-300) break;
      CMatrix cand = x + (alpha / gn) * unvec(g, n);
      const double cn = ideal_norm(spec, cand, opts.gauge);
      if (cn <= 1e-300) break;
      cand /= cn;
      const double cv = eval(cand);
      if (cv > cur) {
        x = cand;
        cur = cv;
        consider(x);
        alpha = std::min(alpha * 1.3, 2.0);
      } else {
        alpha *= 0.5;
        if (alpha < 1e-12) break;
      }
    }
  }
  return out;
}

// Schur-multiplier-type symmetry: |T(D x D)| = |T(x)| for diagonal signs D.
bool diagonal_sign_symmetric(const LinearMapToHilbert& T, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x73796du));
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix x(T.n, T.n);
    for (int i = 0; i < T.n; ++i)
      for (int j = 0; j < T.n; ++j) x(i, j) = rng.cgaussian();
    Eigen::VectorXd eps(T.n);
    for (int i = 0; i < T.n; ++i) eps(i) = rng.sign();
    CMatrix conj = x;
    for (int i = 0; i < T.n; ++i)
      for (int j = 0; j < T.n; ++j) conj(i, j) *= eps(i) * eps(j);
    const double a = T.apply(x).norm(), b = T.apply(conj).norm();
    if (std::abs(a - b) > 1e-10 * std::max(1.0, a)) return false;
  }
  return true;
}

}  // namespace

SearchResult certificate_search(const LinearMapToHilbert& T, const GaugeSpec& spec,
                                double C, const GroOpts& opts) {
  if (!(C > 0.0)) throw AdmissibilityError("certificate_search: C must be positive");
  if (!spec.is_convex(2.0))
    throw AdmissibilityError("certificate_search: spec must carry a 2-convexity flag");
  const GaugeSpec dual2 =
      resolve_closed_form(GaugeSpec::dual(GaugeSpec::concavify(spec, 2.0)));
  const BallProjector ball(dual2);
  const int n = T.n;

  SearchResult res;
  const double tnorm = operator_norm_lower(T, spec, opts);
  if (tnorm <= 1e-300) {
    // the zero map: any admissible F certifies
    res.status = SearchStatus::certified;
    res.cert.F = CMatrix::Zero(n, n);
    res.cert.constant = C;
    res.cert.tnorm = 0.0;
    return res;
  }
  const double c2t2 = C * C * tnorm * tnorm;

  InnerProblem prob;
  OperatorTuple samples;
  auto push_sample = [&](const CMatrix& x) {
    const double nx = ideal_norm(spec, x, opts.gauge);
    if (nx <= 1e-300) return;
    const CMatrix xs = x / nx;
    samples.push_back(xs);
    prob.grams.push_back(sample_gram(xs));
    prob.rhs.push_back(T.apply(xs).squaredNorm() / c2t2);
  };
  for (const auto& w : opts.warm_samples) push_sample(w);

  const bool pinchable = diagonal_sign_symmetric(T, opts.seed);
  CMatrix F = CMatrix::Identity(n, n);
  {
    RealVec ones(static_cast<std::size_t>(n), 1.0);
    const double in = gauge_norm(dual2, ones, opts.gauge);
    if (in > 1.0) F /= in;
  }

  for (int round = 0; round < opts.outer_rounds; ++round) {
    res.rounds = round + 1;
    if (!solve_inner(prob, ball, F, opts)) {
      res.status = SearchStatus::violated;
      res.samples = samples;
      return res;
    }
    if (pinchable) {
      // diagonal pinching preserves the spectrum bound and positivity; keep
      // it only when the sample constraints survive
      CMatrix D = CMatrix::Zero(n, n);
      D.diagonal() = F.diagonal();
      if (inner_feasible(prob, D, 1e-9)) F = D;
    }
    const ViolationResult vio = violation_search(T, spec, F, c2t2, samples, opts,
                                                 static_cast<std::uint64_t>(round));
    res.worst_violation = vio.value;
    if (vio.value <= opts.tol * std::max(1.0, c2t2)) {
      res.status = SearchStatus::certified;
      res.cert.F = F;
      res.cert.constant = C;
      res.cert.active_samples = samples;
      res.cert.tnorm = tnorm;
      return res;
    }
    push_sample(vio.x);
  }
  res.status = SearchStatus::inconclusive;
  res.samples = samples;
  return res;
}

CheckReport verify_certificate(const LinearMapToHilbert& T, const GaugeSpec& spec,
                               const Certificate& cert, const GroOpts& opts) {
  CheckReport rep;
  if (cert.F.rows() != T.n || cert.F.cols() != T.n) {
    rep.message = "certificate matrix shape mismatch";
    return rep;
  }
  const GaugeSpec dual2 =
      resolve_closed_form(GaugeSpec::dual(GaugeSpec::concavify(spec, 2.0)));

  const double fn = cert.F.norm();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (cert.F + cert.F.adjoint()));
  rep.min_eig = es.eigenvalues().size() ? es.eigenvalues().minCoeff() : 0.0;
  const bool psd_ok = rep.min_eig >= -1e-10 * std::max(fn, 1e-300);
  rep.ball_norm = ideal_norm(dual2, cert.F, opts.gauge);
  const bool ball_ok = rep.ball_norm <= 1.0 + 1e-8;

  const double recomputed = operator_norm_lower(T, spec, opts);
  rep.tnorm_consistent =
      cert.tnorm <= 0.0
          ? recomputed <= 1e-300
          : std::abs(recomputed - cert.tnorm) <= 1e-6 * std::max(1.0, cert.tnorm);
  const double tn = recomputed;
  const double c2t2 = cert.constant * cert.constant * tn * tn;

  rep.worst_sample_slack = -kInf;
  bool samples_ok = true;
  for (const auto& x : cert.active_samples) {
    const double lhs = T.apply(x).squaredNorm();
    const double rhs = c2t2 * real_pairing(cert.F, sample_gram(x));
    rep.worst_sample_slack = std::max(rep.worst_sample_slack, lhs - rhs);
    if (lhs > rhs + 1e-8) samples_ok = false;
  }
  if (cert.active_samples.empty()) rep.worst_sample_slack = 0.0;

  rep.ok = psd_ok && ball_ok && samples_ok && rep.tnorm_consistent;
  rep.message = rep.ok ? "certificate verified"
                       : std::string("failed:") + (psd_ok ? "" : " psd") +
                             (ball_ok ? "" : " ball") + (samples_ok ? "" : " samples") +
                             (rep.tnorm_consistent ? "" : " tnorm");
  return rep;
}

nlohmann::ordered_json certificate_to_json(const Certificate& cert,
                                           const LinearMapToHilbert& T,
                                           const GaugeSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = "certificate";
  j["spec"] = spec.str();
  j["constant"] = cert.constant;
  j["tnorm"] = cert.tnorm;
  j["map"] = map_to_json(T);
  j["map_digest"] = T.digest();
  j["F"] = matrix_to_json(cert.F);
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  nlohmann::ordered_json digests = nlohmann::ordered_json::array();
  for (const auto& x : cert.active_samples) {
    samples.push_back(nlohmann::ordered_json(matrix_to_json(x)));
    digests.push_back(matrix_digest(x));
  }
  j["samples"] = samples;
  j["sample_digests"] = digests;
  return j;
}

CertificateFile certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("kind", "") != std::string("certificate"))
    throw ParseError("not a certificate JSON document");
  CertificateFile out;
  out.map = map_from_json(j.at("map"));
  out.spec = parse_gauge_spec(j.at("spec").get<std::string>());
  out.cert.constant = j.at("constant").get<double>();
  out.cert.tnorm = j.at("tnorm").get<double>();
  out.cert.F = matrix_from_json(j.at("F"));
  if (j.contains("map_digest") && j.at("map_digest").get<std::string>() != out.map.digest())
    throw ParseError("certificate map digest mismatch");
  const auto& samples = j.at("samples");
  const auto& digests = j.at("sample_digests");
  if (!samples.is_array() || !digests.is_array() || samples.size() != digests.size())
    throw ParseError("certificate sample arrays malformed");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CMatrix x = matrix_from_json(samples[i]);
    if (matrix_digest(x) != digests[i].get<std::string>())
      throw ParseError("certificate sample digest mismatch");
    out.cert.active_samples.push_back(std::move(x));
  }
  return out;
}

C1Report estimate_c1(const LinearMapToHilbert& T, const GaugeSpec& spec,
                     const GroOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  C1Report rep;
  rep.tnorm = operator_norm_lower(T, spec, opts);
  if (rep.tnorm <= 1e-300) throw AdmissibilityError("estimate_c1: zero map");

  // measured (C)-ratios vs (K)-ratios over a shared tuple sample
  Rng rng(derive_seed(opts.seed, 0xc1u));
  SplitOpts split_opts;
  split_opts.seed = derive_seed(opts.seed, 0xc2u);
  for (int i = 0; i < 20; ++i) {
    const int len = rng.uniform_int(1, 3);
    OperatorTuple t(static_cast<std::size_t>(len));
    for (auto& m : t) {
      m.resize(T.n, T.n);
      for (int a = 0; a < T.n; ++a)
        for (int b = 0; b < T.n; ++b) m(a, b) = rng.cgaussian();
    }
    double num = 0.0;
    for (const auto& x : t) num += T.apply(x).squaredNorm();
    num = std::sqrt(num);
    const double sa = selfadjoint_square_norm(spec, t, opts.gauge);
    if (sa <= 1e-300) continue;
    rep.empirical_c1 = std::max(rep.empirical_c1, num / (rep.tnorm * sa));
    const SplitResult sp = best_row_column_split(spec, t, split_opts);
    if (sp.value > 1e-300)
      rep.empirical_c2 = std::max(rep.empirical_c2, num / (rep.tnorm * sp.value));
  }
  rep.ordering_ok = rep.empirical_c1 <= rep.empirical_c2 + 1e-6;

  // Khintchine ratio of the Koethe-dual gauge, where the split comparison is
  // admissible (dual of a 2-convex gauge is 2-concave)
  const GaugeSpec dual_spec = resolve_closed_form(GaugeSpec::dual(spec));
  if (dual_spec.is_concave(2.0)) {
    KhVerifyOpts kh;
    kh.max_tuple = 3;
    kh.max_dim = std::min(4, T.n);
    const VerificationReport vr = verify_khintchine(
        dual_spec, KhintchineCase::concave2, 0.0, 8, derive_seed(opts.seed, 0xc3u), kh);
    rep.dual_k_ratio = vr.max_ratio;
  }

  auto attempt = [&](double c) -> SearchStatus {
    const SearchResult sr = certificate_search(T, spec, c, opts);
    rep.attempts.push_back({c, sr.status});
    if (sr.status == SearchStatus::certified)
      rep.certified_c = std::min(rep.certified_c, c);
    else if (sr.status == SearchStatus::violated)
      rep.violated_c = std::max(rep.violated_c, c);
    return sr.status;
  };

  // climb until something certifies, then bisect toward the violated side
  double c_up = std::max(rep.empirical_c1, 0.05);
  SearchStatus st = attempt(c_up);
  for (int k = 0; k < 6 && st != SearchStatus::certified; ++k) {
    c_up *= 1.6;
    st = attempt(c_up);
  }
  if (rep.certified_c < kInf && rep.violated_c <= 0.0) {
    double c_lo = 0.5 * rep.certified_c;
    for (int k = 0; k < 4 && rep.violated_c <= 0.0; ++k) {
      if (attempt(c_lo) == SearchStatus::inconclusive) break;
      c_lo *= 0.5;
    }
  }
  for (int k = 0; k < 6; ++k) {
    if (!(rep.certified_c < kInf) || rep.violated_c <= 0.0) break;
    if (rep.certified_c - rep.violated_c <=
        0.05 * std::max(1.0, rep.certified_c))
      break;
    const double mid = 0.5 * (rep.certified_c + rep.violated_c);
    if (attempt(mid) == SearchStatus::inconclusive) break;
  }
  rep.bracket_ok =
      rep.certified_c < kInf && rep.violated_c > 0.0 && rep.violated_c <= rep.certified_c;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

nlohmann::ordered_json c1_report_to_json(const C1Report& rep, bool include_timing) {
  nlohmann::ordered_json j;
  j["kind"] = "c1_report";
  j["tnorm"] = rep.tnorm;
  j["empirical_c1"] = rep.empirical_c1;
  j["empirical_c2"] = rep.empirical_c2;
  j["dual_k_ratio"] = rep.dual_k_ratio;
  j["ordering_ok"] = rep.ordering_ok;
  j["violated_c"] = rep.violated_c;
  if (exp_is_inf(rep.certified_c))
    j["certified_c"] = nullptr;
  else
    j["certified_c"] = rep.certified_c;
  j["bracket_ok"] = rep.bracket_ok;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& a : rep.attempts) {
    nlohmann::ordered_json ja;
    ja["c"] = a.c;
    ja["status"] = a.status == SearchStatus::certified
                       ? "certified"
                       : a.status == SearchStatus::violated ? "violated" : "inconclusive";
    arr.push_back(ja);
  }
  j["attempts"] = arr;
  if (include_timing) j["wall_ms"] = rep.wall_ms;
  return j;
}

}  // namespace symmkit
