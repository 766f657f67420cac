#include "symmkit/kfs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

#include "symmkit/rng.hpp"

namespace symmkit {

struct KfsSpec::Node {
  Kind kind;
  std::optional<GaugeSpec> outer;  // mixed_row
  double p = 0.0;                  // mixed_row / lp_grid
  std::shared_ptr<const Node> a, b;
};

KfsSpec KfsSpec::mixed_row(const GaugeSpec& outer, double p) {
  check_exponent(p, "mixed row exponent");
  auto n = std::make_shared<Node>();
  n->kind = Kind::mixed_row;
  n->outer = outer;
  n->p = p;
  return KfsSpec(std::move(n));
}

KfsSpec KfsSpec::transpose(const KfsSpec& x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::transpose;
  n->a = x.n_;
  return KfsSpec(std::move(n));
}

KfsSpec KfsSpec::sum(const KfsSpec& x, const KfsSpec& y) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->a = x.n_;
  n->b = y.n_;
  return KfsSpec(std::move(n));
}

KfsSpec KfsSpec::intersect(const KfsSpec& x, const KfsSpec& y) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::intersect;
  n->a = x.n_;
  n->b = y.n_;
  return KfsSpec(std::move(n));
}

KfsSpec KfsSpec::lp_grid(double p) {
  check_exponent(p, "grid exponent");
  auto n = std::make_shared<Node>();
  n->kind = Kind::lp_grid;
  n->p = p;
  return KfsSpec(std::move(n));
}

KfsSpec::Kind KfsSpec::kind() const { return n_->kind; }
GaugeSpec KfsSpec::outer() const { return *n_->outer; }
double KfsSpec::p() const { return n_->p; }
KfsSpec KfsSpec::child() const { return KfsSpec(n_->a); }
KfsSpec KfsSpec::left() const { return KfsSpec(n_->a); }
KfsSpec KfsSpec::right() const { return KfsSpec(n_->b); }

static std::string num_str(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string KfsSpec::str() const {
  switch (n_->kind) {
    case Kind::mixed_row:
      return "mixed(" + outer().str() + "," + num_str(n_->p) + ")";
    case Kind::transpose:
      return "t(" + child().str() + ")";
    case Kind::sum:
      return "sum(" + left().str() + "," + right().str() + ")";
    case Kind::intersect:
      return "cap(" + left().str() + "," + right().str() + ")";
    case Kind::lp_grid:
      return "lpgrid:" + num_str(n_->p);
  }
  return {};
}

KfsSpec kfs_dual(const KfsSpec& x) {
  switch (x.kind()) {
    case KfsSpec::Kind::mixed_row:
      return KfsSpec::mixed_row(resolve_closed_form(GaugeSpec::dual(x.outer())),
                                conjugate_exponent(x.p()));
    case KfsSpec::Kind::transpose:
      return KfsSpec::transpose(kfs_dual(x.child()));
    case KfsSpec::Kind::sum:
      return KfsSpec::intersect(kfs_dual(x.left()), kfs_dual(x.right()));
    case KfsSpec::Kind::intersect:
      return KfsSpec::sum(kfs_dual(x.left()), kfs_dual(x.right()));
    case KfsSpec::Kind::lp_grid:
      return KfsSpec::lp_grid(conjugate_exponent(x.p()));
  }
  return x;
}

static bool contains_sum(const KfsSpec& x) {
  switch (x.kind()) {
    case KfsSpec::Kind::sum:
      return true;
    case KfsSpec::Kind::transpose:
      return contains_sum(x.child());
    case KfsSpec::Kind::intersect:
      return contains_sum(x.left()) || contains_sum(x.right());
    default:
      return false;
  }
}

// ---- evaluation -------------------------------------------------------------

static double row_lp(const RMatrix& A, long i, double p) {
  const long n = A.cols();
  if (n == 0) return 0.0;
  if (exp_is_inf(p)) return A.row(i).maxCoeff();
  if (p == 1.0) return A.row(i).sum();
  if (p == 2.0) return A.row(i).norm();
  double m = A.row(i).maxCoeff();
  if (m <= 0.0) return 0.0;
  double s = 0.0;
  for (long j = 0; j < n; ++j) s += std::pow(A(i, j) / m, p);
  return m * std::pow(s, 1.0 / p);
}

struct SplitOut {
  double value = 0.0;
  double lower = 0.0;
  bool certified = false;
  RMatrix bx;
  RMatrix wbest;  // normalized dual witness achieving `lower`
};

static double eval_kfs(const KfsSpec& X, const RMatrix& A, const KfsOpts& o);
static SplitOut sum_split(const KfsSpec& X, const KfsSpec& Y, const RMatrix& A,
                          const KfsOpts& o);

static double eval_kfs(const KfsSpec& X, const RMatrix& A, const KfsOpts& o) {
  switch (X.kind()) {
    case KfsSpec::Kind::mixed_row: {
      std::vector<double> r(A.rows());
      for (long i = 0; i < A.rows(); ++i) r[i] = row_lp(A, i, X.p());
      return gauge_norm(X.outer(), r, o.gauge);
    }
    case KfsSpec::Kind::transpose: {
      RMatrix T = A.transpose();
      return eval_kfs(X.child(), T, o);
    }
    case KfsSpec::Kind::sum:
      return sum_split(X.left(), X.right(), A, o).value;
    case KfsSpec::Kind::intersect:
      return std::max(eval_kfs(X.left(), A, o), eval_kfs(X.right(), A, o));
    case KfsSpec::Kind::lp_grid: {
      std::vector<double> flat(A.data(), A.data() + A.size());
      return gauge_norm(GaugeSpec::lp(X.p()), flat, o.gauge);
    }
  }
  return 0.0;
}

RMatrix kfs_subgradient(const KfsSpec& X, const RMatrix& A, const KfsOpts& o) {
  const long rows = A.rows(), cols = A.cols();
  RMatrix W = RMatrix::Zero(rows, cols);
  switch (X.kind()) {
    case KfsSpec::Kind::mixed_row: {
      const double p = X.p();
      std::vector<double> r(rows);
      for (long i = 0; i < rows; ++i) r[i] = row_lp(A, i, p);
      std::vector<double> s = gauge_subgradient(X.outer(), r, o.gauge);
      for (long i = 0; i < rows; ++i) {
        if (s[i] == 0.0) continue;
        if (p == 1.0) {
          W.row(i).setConstant(s[i]);
        } else if (exp_is_inf(p)) {
          if (r[i] <= 0.0) {
            W(i, 0) = s[i];
            continue;
          }
          const double thr = r[i] * (1.0 - 1e-12);
          int ties = 0;
          for (long j = 0; j < cols; ++j) ties += (A(i, j) >= thr);
          for (long j = 0; j < cols; ++j)
            if (A(i, j) >= thr) W(i, j) = s[i] / ties;
        } else {
          if (r[i] <= 0.0) continue;
          for (long j = 0; j < cols; ++j)
            if (A(i, j) > 0.0) W(i, j) = s[i] * std::pow(A(i, j) / r[i], p - 1.0);
        }
      }
      return W;
    }
    case KfsSpec::Kind::transpose: {
      RMatrix T = A.transpose();
      return kfs_subgradient(X.child(), T, o).transpose();
    }
    case KfsSpec::Kind::sum: {
      SplitOut sp = sum_split(X.left(), X.right(), A, o);
      if (sp.wbest.size() > 0) return sp.wbest;
      return W;
    }
    case KfsSpec::Kind::intersect: {
      double vl = eval_kfs(X.left(), A, o), vr = eval_kfs(X.right(), A, o);
      return (vl >= vr) ? kfs_subgradient(X.left(), A, o)
                        : kfs_subgradient(X.right(), A, o);
    }
    case KfsSpec::Kind::lp_grid: {
      const double p = X.p();
      std::vector<double> flat(A.data(), A.data() + A.size());
      double nv = gauge_norm(GaugeSpec::lp(p), flat, o.gauge);
      if (p == 1.0) {
        W.setConstant(1.0);
      } else if (exp_is_inf(p)) {
        if (nv <= 0.0) return W;
        const double thr = nv * (1.0 - 1e-12);
        int ties = 0;
        for (long j = 0; j < cols; ++j)
          for (long i = 0; i < rows; ++i) ties += (A(i, j) >= thr);
        for (long j = 0; j < cols; ++j)
          for (long i = 0; i < rows; ++i)
            if (A(i, j) >= thr) W(i, j) = 1.0 / ties;
      } else {
        if (nv <= 0.0) return W;
        for (long j = 0; j < cols; ++j)
          for (long i = 0; i < rows; ++i)
            if (A(i, j) > 0.0) W(i, j) = std::pow(A(i, j) / nv, p - 1.0);
      }
      return W;
    }
  }
  return W;
}

// Projected subgradient descent on the convex objective
// f(B) = ||B||_X + ||A-B||_Y over the box 0 <= B <= A, with Polyak
// target-level steps and periodic Hoelder certification against the dual
// cap(X', Y').  For nonneg A an optimal split can be taken inside the box, so
// the restriction loses nothing.
static SplitOut sum_split(const KfsSpec& X, const KfsSpec& Y, const RMatrix& A,
                          const KfsOpts& o) {
  const long rows = A.rows(), cols = A.cols();
  SplitOut out;
  out.bx = RMatrix::Zero(rows, cols);
  if (A.size() == 0 || A.maxCoeff() <= 0.0) {
    out.certified = true;
    return out;
  }

  KfsSpec Xd = kfs_dual(X), Yd = kfs_dual(Y);
  auto fval = [&](const RMatrix& B) {
    return eval_kfs(X, B, o) + eval_kfs(Y, (A - B).cwiseMax(0.0), o);
  };
  // any w >= 0 yields the valid lower bound <A, w> / cap(X', Y')(w)
  auto score = [&](const RMatrix& w, double& lb, RMatrix& wbest) {
    const double den = std::max(eval_kfs(Xd, w, o), eval_kfs(Yd, w, o));
    if (den <= 1e-300) return;
    const double val = w.cwiseProduct(A).sum() / den;
    if (val > lb) {
      lb = val;
      wbest = w / den;
    }
  };
  auto certify = [&](const RMatrix& B, double& lb, RMatrix& wbest) {
    RMatrix wx = kfs_subgradient(X, B, o);
    RMatrix wy = kfs_subgradient(Y, (A - B).cwiseMax(0.0), o);
    score(wx, lb, wbest);
    score(wy, lb, wbest);
    score(0.5 * (wx + wy), lb, wbest);
  };
  // supergradient ascent on the quasiconcave ratio w -> <A,w>/cap(w)
  auto polish = [&](double& lb, RMatrix& wbest) {
    if (wbest.size() == 0) return;
    RMatrix w = wbest;
    for (int t = 1; t <= 1000; ++t) {
      const double dx = eval_kfs(Xd, w, o), dy = eval_kfs(Yd, w, o);
      const double den = std::max(dx, dy);
      if (den <= 1e-300) break;
      const double phi = w.cwiseProduct(A).sum() / den;
      if (phi > lb) {
        lb = phi;
        wbest = w / den;
      }
      const RMatrix gden = kfs_subgradient(dx >= dy ? Xd : Yd, w, o);
      const RMatrix d = (A - phi * gden) / den;
      const double dn = d.norm();
      if (dn <= 1e-14 * std::max(1.0, w.norm())) break;
      const double alpha = 0.5 * std::max(w.norm(), 1e-12) / (dn * std::sqrt(static_cast<double>(t)));
      w = (w + alpha * d).cwiseMax(0.0);
    }
  };

  std::vector<RMatrix> inits;
  inits.push_back(RMatrix::Zero(rows, cols));
  inits.push_back(A);
  inits.push_back(0.5 * A);
  {
    RMatrix U = RMatrix::Zero(rows, cols), L = RMatrix::Zero(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j)
        (j >= i ? U : L)(i, j) = A(i, j);
    inits.push_back(std::move(U));
    inits.push_back(std::move(L));
  }
  Rng rng(derive_seed(o.seed, 0x5091u));
  for (int s = 0; s < o.sum_restarts; ++s) {
    RMatrix R(rows, cols);
    for (long j = 0; j < cols; ++j)
      for (long i = 0; i < rows; ++i) R(i, j) = A(i, j) * rng.uniform01();
    inits.push_back(std::move(R));
  }

  double fbest = kInf;
  RMatrix Bbest;
  for (const RMatrix& B0 : inits) {
    double f = fval(B0);
    if (f < fbest) {
      fbest = f;
      Bbest = B0;
    }
  }
  double lb = 0.0;
  RMatrix wbest;
  certify(Bbest, lb, wbest);
  score(A, lb, wbest);

  const double scale = std::max(1.0, fbest);
  if (fbest - lb > o.tol * scale) {
    RMatrix B = Bbest;
    RMatrix Bacc = RMatrix::Zero(rows, cols);
    int acc_n = 0;
    double delta = std::max(0.5 * (fbest - lb), 1e-3 * scale);
    for (int t = 1; t <= o.sum_iters; ++t) {
      RMatrix C = (A - B).cwiseMax(0.0);
      double f = eval_kfs(X, B, o) + eval_kfs(Y, C, o);
      if (f < fbest) {
        fbest = f;
        Bbest = B;
      }
      if (fbest - lb <= o.tol * scale) break;
      RMatrix G = kfs_subgradient(X, B, o) - kfs_subgradient(Y, C, o);
      double g2 = G.squaredNorm();
      if (g2 < 1e-280) break;
      double target = std::max(lb, fbest - delta);
      if (f <= target + 1e-15 * scale) {
        delta *= 0.5;
        continue;
      }
      double alpha = (f - target) / g2;
      B = (B - alpha * G).cwiseMax(0.0).cwiseMin(A);
      Bacc += B;
      ++acc_n;
      if (t % 250 == 0) {
        // averaged iterates converge where the raw ones oscillate
        if (acc_n > 0) {
          RMatrix Bavg = Bacc / static_cast<double>(acc_n);
          const double fa = fval(Bavg);
          if (fa < fbest) {
            fbest = fa;
            Bbest = Bavg;
          }
          certify(Bavg, lb, wbest);
        }
        certify(Bbest, lb, wbest);
        delta *= 0.7;
      }
    }
    certify(Bbest, lb, wbest);
    if (fbest - lb > o.tol * scale) polish(lb, wbest);
  }

  out.value = fbest;
  out.lower = std::min(lb, fbest);
  out.certified = (fbest - lb <= o.tol * std::max(1.0, fbest));
  out.bx = Bbest;
  out.wbest = std::move(wbest);
  return out;
}

double kfs_norm(const KfsSpec& x, const CMatrix& z, const KfsOpts& o) {
  RMatrix A = z.cwiseAbs();
  return eval_kfs(x, A, o);
}

KfsNormResult kfs_norm_detail(const KfsSpec& x, const CMatrix& z, const KfsOpts& o) {
  RMatrix A = z.cwiseAbs();
  KfsNormResult res;
  if (x.kind() == KfsSpec::Kind::sum) {
    SplitOut sp = sum_split(x.left(), x.right(), A, o);
    res.value = sp.value;
    res.lower_bound = sp.lower;
    res.certified = sp.certified;
    res.part_x = sp.bx;
    res.part_y = (A - sp.bx).cwiseMax(0.0);
  } else {
    res.value = eval_kfs(x, A, o);
    res.certified = !contains_sum(x);
    res.lower_bound = res.certified ? res.value : 0.0;
    res.part_x = A;
    res.part_y = RMatrix::Zero(A.rows(), A.cols());
  }
  return res;
}

}  // namespace symmkit
