#include "symmkit/gauge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "symmkit/rng.hpp"

namespace symmkit {

struct GaugeSpec::Node {
  Kind kind;
  double p = 0.0;  // lp
  int k = 0;       // ky_fan
  double r = 0.0;  // convexify / concavify
  std::shared_ptr<const Node> a, b;
  // probe-declared exponents; structural ones are recomputed on demand
  double decl_convex = 1.0;
  double decl_concave = kInf;
};

// ---- construction ----------------------------------------------------------

GaugeSpec GaugeSpec::lp(double p) {
  check_exponent(p, "lp exponent");
  auto n = std::make_shared<Node>();
  n->kind = Kind::lp;
  n->p = p;
  return GaugeSpec(std::move(n));
}

GaugeSpec GaugeSpec::ky_fan(int k) {
  if (k < 1) throw AdmissibilityError("ky_fan order must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::ky_fan;
  n->k = k;
  return GaugeSpec(std::move(n));
}

GaugeSpec GaugeSpec::dual(const GaugeSpec& base) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::dual;
  n->a = base.n_;
  return GaugeSpec(std::move(n));
}

GaugeSpec GaugeSpec::convexify(const GaugeSpec& base, double r) {
  if (!(r > 1.0)) throw AdmissibilityError("convexify exponent must be > 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::convexify;
  n->a = base.n_;
  n->r = r;
  return GaugeSpec(std::move(n));
}

GaugeSpec GaugeSpec::concavify(const GaugeSpec& base, double r) {
  if (!(r > 1.0)) throw AdmissibilityError("concavify exponent must be > 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::concavify;
  n->a = base.n_;
  n->r = r;
  return GaugeSpec(std::move(n));
}

GaugeSpec GaugeSpec::product(const GaugeSpec& g, const GaugeSpec& h) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->a = g.n_;
  n->b = h.n_;
  return GaugeSpec(std::move(n));
}

GaugeSpec::Kind GaugeSpec::kind() const { return n_->kind; }
double GaugeSpec::p() const { return n_->p; }
int GaugeSpec::k() const { return n_->k; }
double GaugeSpec::r() const { return n_->r; }
GaugeSpec GaugeSpec::base() const { return GaugeSpec(n_->a); }
GaugeSpec GaugeSpec::left() const { return GaugeSpec(n_->a); }
GaugeSpec GaugeSpec::right() const { return GaugeSpec(n_->b); }

// ---- convexity flags --------------------------------------------------------
//
// Structural rules (all with constant 1, exact):
//   lp:p is p-convex and p-concave;
//   kyfan:1 = linf is r-convex for every r but has no finite concavity
//     exponent; kyfan:k (k >= 2) is only 1-convex, with no finite concavity
//     either (disjointly supported pairs defeat every finite q);
//   dual swaps the roles with conjugate exponents;
//   conv(g, r) multiplies both exponents by r, conc(g, r) divides;
//   prod(g, h) is c-convex with 1/c = 1/a + 1/b via a pointwise Hoelder split.
// Values are conservative: the reported exponent is the best *certified* one.

double GaugeSpec::convexity_exponent() const {
  double s;
  switch (n_->kind) {
    case Kind::lp:
      s = n_->p;
      break;
    case Kind::ky_fan:
      s = (n_->k == 1) ? kInf : 1.0;
      break;
    case Kind::dual:
      s = conjugate_exponent(base().concavity_exponent());
      break;
    case Kind::convexify:
      s = exp_mul(base().convexity_exponent(), n_->r);
      break;
    case Kind::concavify:
      s = std::max(1.0, exp_div(base().convexity_exponent(), n_->r));
      break;
    case Kind::product:
      s = exp_combine(left().convexity_exponent(), right().convexity_exponent());
      break;
  }
  return std::max(s, n_->decl_convex);
}

double GaugeSpec::concavity_exponent() const {
  double s;
  switch (n_->kind) {
    case Kind::lp:
      s = n_->p;
      break;
    case Kind::ky_fan:
      s = kInf;
      break;
    case Kind::dual:
      s = conjugate_exponent(base().convexity_exponent());
      break;
    case Kind::convexify:
      s = exp_mul(base().concavity_exponent(), n_->r);
      break;
    case Kind::concavify:
      s = std::max(1.0, exp_div(base().concavity_exponent(), n_->r));
      break;
    case Kind::product:
      s = kInf;
      break;
  }
  return std::min(s, n_->decl_concave);
}

GaugeSpec GaugeSpec::with_convex_flag(double r) const {
  check_exponent(r, "convexity flag");
  auto n = std::make_shared<Node>(*n_);
  n->decl_convex = std::max(n->decl_convex, r);
  return GaugeSpec(std::move(n));
}

GaugeSpec GaugeSpec::with_concave_flag(double q) const {
  check_exponent(q, "concavity flag");
  auto n = std::make_shared<Node>(*n_);
  n->decl_concave = std::min(n->decl_concave, q);
  return GaugeSpec(std::move(n));
}

// ---- text form ---------------------------------------------------------------

static std::string num_str(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string GaugeSpec::str() const {
  switch (n_->kind) {
    case Kind::lp:
      return "lp:" + num_str(n_->p);
    case Kind::ky_fan:
      return "kyfan:" + std::to_string(n_->k);
    case Kind::dual:
      return "dual(" + base().str() + ")";
    case Kind::convexify:
      return "conv(" + base().str() + "," + num_str(n_->r) + ")";
    case Kind::concavify:
      return "conc(" + base().str() + "," + num_str(n_->r) + ")";
    case Kind::product:
      return "prod(" + left().str() + "," + right().str() + ")";
  }
  return {};
}

// ---- vector helpers -----------------------------------------------------------

std::vector<double> sorted_moduli(std::span<const double> v) {
  std::vector<double> w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = std::abs(v[i]);
  std::sort(w.begin(), w.end(), std::greater<double>());
  return w;
}

void project_nonincreasing_nonneg(std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return;
  std::vector<double> mean(n);
  std::vector<int> len(n);
  int m = 0;
  for (int i = 0; i < n; ++i) {
    mean[m] = x[i];
    len[m] = 1;
    ++m;
    while (m >= 2 && mean[m - 2] < mean[m - 1]) {
      mean[m - 2] = (mean[m - 2] * len[m - 2] + mean[m - 1] * len[m - 1]) /
                    (len[m - 2] + len[m - 1]);
      len[m - 2] += len[m - 1];
      --m;
    }
  }
  int idx = 0;
  for (int b = 0; b < m; ++b) {
    double v = std::max(0.0, mean[b]);
    for (int j = 0; j < len[b]; ++j) x[idx++] = v;
  }
}

static double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// w nonincreasing, nonneg
static double lp_norm_sorted(const std::vector<double>& w, double p) {
  if (w.empty() || w[0] <= 0.0) return 0.0;
  if (exp_is_inf(p)) return w[0];
  if (p == 1.0) return std::accumulate(w.begin(), w.end(), 0.0);
  if (p == 2.0) {
    double s = 0.0;
    for (double v : w) s += v * v;
    return std::sqrt(s);
  }
  const double m = w[0];
  double s = 0.0;
  for (double v : w) {
    if (v <= 0.0) break;
    s += std::pow(v / m, p);
  }
  return m * std::pow(s, 1.0 / p);
}

// ---- evaluation ------------------------------------------------------------------

static double eval_gauge(const GaugeSpec& g, const std::vector<double>& w,
                         const GaugeOpts& o);
static double dual_eval(const GaugeSpec& base, const std::vector<double>& w,
                        const GaugeOpts& o);

struct DualCore {
  double value = 0.0;
  bool converged = true;
  std::vector<double> x;
};
static DualCore numeric_dual(const GaugeSpec& spec, const std::vector<double>& w,
                             const GaugeOpts& o);
static ProductNormResult product_impl(const GaugeSpec& g, const GaugeSpec& h,
                                      const std::vector<double>& z,
                                      const GaugeOpts& o);

static std::vector<double> pow_each(const std::vector<double>& w, double e) {
  std::vector<double> r(w.size());
  for (size_t i = 0; i < w.size(); ++i) r[i] = (w[i] > 0.0) ? std::pow(w[i], e) : 0.0;
  return r;
}

static double eval_gauge(const GaugeSpec& g, const std::vector<double>& w,
                         const GaugeOpts& o) {
  switch (g.kind()) {
    case GaugeSpec::Kind::lp:
      return lp_norm_sorted(w, g.p());
    case GaugeSpec::Kind::ky_fan: {
      const int kk = std::min<int>(g.k(), static_cast<int>(w.size()));
      double s = 0.0;
      for (int i = 0; i < kk; ++i) s += w[i];
      return s;
    }
    case GaugeSpec::Kind::dual:
      return dual_eval(g.base(), w, o);
    case GaugeSpec::Kind::convexify: {
      const double r = g.r();
      double v = eval_gauge(g.base(), pow_each(w, r), o);
      return std::pow(v, 1.0 / r);
    }
    case GaugeSpec::Kind::concavify: {
      const double r = g.r();
      if (!g.base().is_convex(r))
        throw AdmissibilityError(
            "concavify base must carry an r-convexity flag for r = " + num_str(r));
      double v = eval_gauge(g.base(), pow_each(w, 1.0 / r), o);
      return std::pow(v, r);
    }
    case GaugeSpec::Kind::product:
      return product_impl(g.left(), g.right(), w, o).value;
  }
  return 0.0;
}

// dual gauge of `base` evaluated at w
static double dual_eval(const GaugeSpec& base, const std::vector<double>& w,
                        const GaugeOpts& o) {
  GaugeSpec r = resolve_closed_form(base);
  switch (r.kind()) {
    case GaugeSpec::Kind::lp:
      return lp_norm_sorted(w, conjugate_exponent(r.p()));
    case GaugeSpec::Kind::ky_fan: {
      if (w.empty() || w[0] <= 0.0) return 0.0;
      double l1 = std::accumulate(w.begin(), w.end(), 0.0);
      return std::max(w[0], l1 / r.k());
    }
    case GaugeSpec::Kind::dual:
      // dual of a dual is the (resolved) original
      return eval_gauge(r.base(), w, o);
    default:
      return numeric_dual(r, w, o).value;
  }
}

// Multi-start projected ascent for sup { <w, x> : gauge(x) <= 1 }.  By
// symmetry the maximizer can be taken nonincreasing and nonneg, so iterates
// live on that cone; each step moves along w, projects, and renormalizes to
// the gauge unit sphere.  Deterministic seeds (indicator blocks, powers of w)
// are followed by the 1/sqrt(t) schedule and a geometric line-search polish.
static DualCore numeric_dual(const GaugeSpec& spec, const std::vector<double>& w,
                             const GaugeOpts& o) {
  const int n = static_cast<int>(w.size());
  DualCore out;
  out.x.assign(n, 0.0);
  if (n == 0 || w[0] <= 0.0) return out;
  const double wmax = w[0];

  double best = 0.0;
  std::vector<double> bestx(n, 0.0);
  auto try_point = [&](std::vector<double> y) {
    project_nonincreasing_nonneg(y);
    double gn = eval_gauge(spec, y, o);
    if (!(gn > 1e-300) || !std::isfinite(gn)) return;
    double val = 0.0;
    for (int i = 0; i < n; ++i) {
      y[i] /= gn;
      val += w[i] * y[i];
    }
    if (val > best) {
      best = val;
      bestx = std::move(y);
    }
  };

  for (int k = 1; k <= n; ++k) {
    std::vector<double> y(n, 0.0);
    std::fill(y.begin(), y.begin() + k, 1.0);
    try_point(std::move(y));
  }
  static const double kPowers[] = {0.2, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0,
                                   1.0, 1.5,  2.0,       3.0, 4.0,
                                   6.0};
  for (double s : kPowers) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = (w[i] > 0.0) ? std::pow(w[i] / wmax, s) : 0.0;
    try_point(std::move(y));
  }

  Rng rng(derive_seed(o.seed, 0xd0a1u));
  const int nstarts = std::max(1, o.dual_restarts);
  for (int s = 0; s < nstarts; ++s) {
    std::vector<double> x;
    if (s == 0) {
      x = bestx;
    } else {
      x.assign(n, 0.0);
      for (auto& v : x) v = std::abs(rng.gaussian());
    }
    project_nonincreasing_nonneg(x);
    double gn = eval_gauge(spec, x, o);
    if (!(gn > 1e-300)) continue;
    for (auto& v : x) v /= gn;
    double cur = dot(w, x);
    for (int t = 1; t <= o.dual_iters; ++t) {
      const double step = 1.0 / (wmax * std::sqrt(static_cast<double>(t)));
      std::vector<double> y = x;
      for (int i = 0; i < n; ++i) y[i] += step * w[i];
      project_nonincreasing_nonneg(y);
      double g2 = eval_gauge(spec, y, o);
      if (!(g2 > 1e-300)) continue;
      for (auto& v : y) v /= g2;
      double val = dot(w, y);
      if (val >= cur) {
        x.swap(y);
        cur = val;
      }
    }
    if (cur > best) {
      best = cur;
      bestx = x;
    }
  }

  // polish: adaptive-step ascent along the gradient of the ratio <w,y>/g(y),
  // which at a unit-gauge point is w - <w,x> * dg(x).  Stepping along raw w
  // and renormalizing has its fixed point at x ~ w, which is only the
  // maximizer in the euclidean case.
  bool stationary = false;
  {
    std::vector<double> x = bestx;
    double cur = best;
    double al = 0.25;
    for (int t = 0; t < std::max(o.dual_iters, 200); ++t) {
      const std::vector<double> s = gauge_subgradient_sorted(spec, x, o);
      std::vector<double> d(n);
      double dmax = 0.0;
      for (int i = 0; i < n; ++i) {
        d[i] = w[i] - cur * s[i];
        dmax = std::max(dmax, std::abs(d[i]));
      }
      if (dmax <= 1e-15 * wmax) {
        stationary = true;
        break;
      }
      bool moved = false;
      while (al > 1e-13) {
        std::vector<double> y = x;
        for (int i = 0; i < n; ++i) y[i] += (al / dmax) * d[i];
        project_nonincreasing_nonneg(y);
        const double g2 = eval_gauge(spec, y, o);
        if (g2 > 1e-300 && std::isfinite(g2)) {
          for (auto& v : y) v /= g2;
          const double val = dot(w, y);
          if (val > cur * (1.0 + 1e-15)) {
            x.swap(y);
            cur = val;
            al = std::min(1.0, al * 1.4);
            moved = true;
            break;
          }
        }
        al *= 0.5;
      }
      if (!moved) {
        stationary = true;  // backtracking hit the floor: first-order stall
        break;
      }
    }
    if (cur > best) {
      best = cur;
      bestx = std::move(x);
    }
  }

  out.value = best;
  out.x = std::move(bestx);
  out.converged = stationary;
  return out;
}

// ---- closed-form rewrites ---------------------------------------------------------

GaugeSpec resolve_closed_form(const GaugeSpec& g) {
  switch (g.kind()) {
    case GaugeSpec::Kind::lp:
    case GaugeSpec::Kind::ky_fan:
      return g;
    case GaugeSpec::Kind::dual: {
      GaugeSpec b = resolve_closed_form(g.base());
      if (b.kind() == GaugeSpec::Kind::lp) return GaugeSpec::lp(conjugate_exponent(b.p()));
      if (b.kind() == GaugeSpec::Kind::dual) return b.base();
      return b == g.base() ? g : GaugeSpec::dual(b);
    }
    case GaugeSpec::Kind::convexify: {
      GaugeSpec b = resolve_closed_form(g.base());
      if (b.kind() == GaugeSpec::Kind::lp) return GaugeSpec::lp(exp_mul(b.p(), g.r()));
      return b == g.base() ? g : GaugeSpec::convexify(b, g.r());
    }
    case GaugeSpec::Kind::concavify: {
      GaugeSpec b = resolve_closed_form(g.base());
      if (b.kind() == GaugeSpec::Kind::lp && b.p() >= g.r() - 1e-12)
        return GaugeSpec::lp(std::max(1.0, exp_div(b.p(), g.r())));
      return b == g.base() ? g : GaugeSpec::concavify(b, g.r());
    }
    case GaugeSpec::Kind::product: {
      GaugeSpec l = resolve_closed_form(g.left());
      GaugeSpec r = resolve_closed_form(g.right());
      if (l.kind() == GaugeSpec::Kind::lp && r.kind() == GaugeSpec::Kind::lp)
        return GaugeSpec::lp(exp_combine(l.p(), r.p()));
      if (l == g.left() && r == g.right()) return g;
      return GaugeSpec::product(l, r);
    }
  }
  return g;
}

// ---- product gauge ---------------------------------------------------------------

static double eval_gauge_unsorted(const GaugeSpec& spec, std::vector<double> v,
                                  const GaugeOpts& o) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return eval_gauge(spec, v, o);
}

static std::vector<double> subgrad_unsorted(const GaugeSpec& spec,
                                            const std::vector<double>& v,
                                            const GaugeOpts& o) {
  const int n = static_cast<int>(v.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = v[idx[j]];
  std::vector<double> s = gauge_subgradient_sorted(spec, w, o);
  std::vector<double> out(n, 0.0);
  for (int j = 0; j < n; ++j) out[idx[j]] = s[j];
  return out;
}

// z nonincreasing, nonneg
static ProductNormResult product_impl(const GaugeSpec& g, const GaugeSpec& h,
                                      const std::vector<double>& z,
                                      const GaugeOpts& o) {
  if (!g.is_convex(2.0) || !h.is_convex(2.0))
    throw AdmissibilityError("product factors must carry 2-convexity flags");
  const int n = static_cast<int>(z.size());
  ProductNormResult out;
  out.factor_g.assign(n, 0.0);
  out.factor_h.assign(n, 0.0);
  if (n == 0 || z[0] <= 0.0) return out;

  GaugeSpec rg = resolve_closed_form(g), rh = resolve_closed_form(h);
  if (rg.kind() == GaugeSpec::Kind::lp && rh.kind() == GaugeSpec::Kind::lp) {
    const double a = rg.p(), b = rh.p(), c = exp_combine(a, b);
    out.value = lp_norm_sorted(z, c);
    const double ea = exp_is_inf(a) ? 0.0 : c / a;
    const double eb = exp_is_inf(b) ? 0.0 : c / b;
    for (int i = 0; i < n; ++i) {
      if (z[i] <= 0.0) break;
      out.factor_g[i] = std::pow(z[i], ea);
      out.factor_h[i] = std::pow(z[i], eb);
    }
    out.converged = true;
    return out;
  }

  int m = 0;
  while (m < n && z[m] > 0.0) ++m;

  // x_i = sqrt(z_i) e^{lam_i}, y_i = sqrt(z_i) e^{-lam_i};
  // log ||x||_g + log ||y||_h is convex in lam
  auto split_value = [&](const std::vector<double>& lam, std::vector<double>* xs_out,
                         std::vector<double>* ys_out) -> double {
    std::vector<double> xs(m), ys(m);
    for (int i = 0; i < m; ++i) {
      double rt = std::sqrt(z[i]);
      xs[i] = rt * std::exp(lam[i]);
      ys[i] = rt * std::exp(-lam[i]);
    }
    double gv = eval_gauge_unsorted(g, xs, o);
    double hv = eval_gauge_unsorted(h, ys, o);
    if (xs_out) *xs_out = std::move(xs);
    if (ys_out) *ys_out = std::move(ys);
    return gv * hv;
  };

  double bestv = kInf;
  std::vector<double> bestlam(m, 0.0);
  bool converged = false;

  Rng rng(derive_seed(o.seed, 0xfac7u));
  const int nstarts = std::max(1, o.product_restarts);
  for (int s = 0; s < nstarts + 2; ++s) {
    std::vector<double> lam(m, 0.0);
    if (s == 1) {
      for (int i = 0; i < m; ++i) lam[i] = 0.5 * std::log(z[i]);  // x = z, y = 1
    } else if (s == 2) {
      for (int i = 0; i < m; ++i) lam[i] = -0.5 * std::log(z[i]);
    } else if (s >= 3) {
      for (int i = 0; i < m; ++i) lam[i] = 0.3 * rng.gaussian();
    }

    double cur = split_value(lam, nullptr, nullptr);
    double alpha = 0.5;
    bool local_done = false;
    for (int t = 0; t < o.product_iters; ++t) {
      std::vector<double> xs, ys;
      double val = split_value(lam, &xs, &ys);
      double gv = eval_gauge_unsorted(g, xs, o);
      double hv = eval_gauge_unsorted(h, ys, o);
      if (!(gv > 0.0) || !(hv > 0.0)) break;
      std::vector<double> sg = subgrad_unsorted(g, xs, o);
      std::vector<double> sh = subgrad_unsorted(h, ys, o);
      std::vector<double> grad(m);
      double gnorm2 = 0.0, gmean = 0.0;
      for (int i = 0; i < m; ++i) {
        grad[i] = sg[i] * xs[i] / gv - sh[i] * ys[i] / hv;
        gmean += grad[i];
      }
      gmean /= m;
      for (int i = 0; i < m; ++i) {
        grad[i] -= gmean;  // remove the scale-freedom direction
        gnorm2 += grad[i] * grad[i];
      }
      if (gnorm2 < 1e-26) {
        local_done = true;
        break;
      }
      bool moved = false;
      double a2 = alpha;
      for (int bt = 0; bt < 24; ++bt) {
        std::vector<double> lam2(m);
        for (int i = 0; i < m; ++i) lam2[i] = lam[i] - a2 * grad[i];
        double v2 = split_value(lam2, nullptr, nullptr);
        if (v2 < val) {
          lam = std::move(lam2);
          cur = v2;
          alpha = std::min(10.0, a2 * 1.5);
          moved = true;
          break;
        }
        a2 /= 3.0;
      }
      if (!moved) {
        local_done = true;
        break;
      }
    }
    if (cur < bestv) {
      bestv = cur;
      bestlam = lam;
      converged = local_done;
    }
  }

  std::vector<double> xs, ys;
  out.value = split_value(bestlam, &xs, &ys);
  for (int i = 0; i < m; ++i) {
    out.factor_g[i] = xs[i];
    out.factor_h[i] = ys[i];
  }
  out.converged = converged;
  return out;
}

ProductNormResult product_gauge_norm_detail(const GaugeSpec& g, const GaugeSpec& h,
                                            std::span<const double> z,
                                            const GaugeOpts& o) {
  return product_impl(g, h, sorted_moduli(z), o);
}

double product_gauge_norm(const GaugeSpec& g, const GaugeSpec& h,
                          std::span<const double> z, const GaugeOpts& o) {
  return product_impl(g, h, sorted_moduli(z), o).value;
}

// ---- public norm entry points --------------------------------------------------

double gauge_norm(const GaugeSpec& spec, std::span<const double> v, const GaugeOpts& o) {
  return eval_gauge(spec, sorted_moduli(v), o);
}

double dual_norm(const GaugeSpec& spec, std::span<const double> v, const GaugeOpts& o) {
  return dual_eval(spec, sorted_moduli(v), o);
}

DualNormResult dual_norm_numeric(const GaugeSpec& spec, std::span<const double> v,
                                 const GaugeOpts& o) {
  DualCore c = numeric_dual(spec, sorted_moduli(v), o);
  return DualNormResult{c.value, c.converged, std::move(c.x)};
}

// ---- subgradients ---------------------------------------------------------------

static std::vector<double> lp_subgradient(const std::vector<double>& w, double p) {
  const int n = static_cast<int>(w.size());
  std::vector<double> s(n, 0.0);
  if (n == 0 || w[0] <= 0.0) return s;
  if (p == 1.0) {
    std::fill(s.begin(), s.end(), 1.0);
    return s;
  }
  if (exp_is_inf(p)) {
    const double thr = w[0] * (1.0 - 1e-12);
    int ties = 0;
    for (double v : w) ties += (v >= thr);
    for (int i = 0; i < n; ++i) s[i] = (w[i] >= thr) ? 1.0 / ties : 0.0;
    return s;
  }
  const double nv = lp_norm_sorted(w, p);
  for (int i = 0; i < n; ++i)
    if (w[i] > 0.0) s[i] = std::pow(w[i] / nv, p - 1.0);
  return s;
}

std::vector<double> gauge_subgradient_sorted(const GaugeSpec& spec,
                                             std::span<const double> wv,
                                             const GaugeOpts& o) {
  std::vector<double> w(wv.begin(), wv.end());
  const int n = static_cast<int>(w.size());
  std::vector<double> s(n, 0.0);
  if (n == 0 || w[0] <= 0.0) return s;

  switch (spec.kind()) {
    case GaugeSpec::Kind::lp:
      return lp_subgradient(w, spec.p());
    case GaugeSpec::Kind::ky_fan: {
      const int kk = std::min<int>(spec.k(), n);
      const double lam = w[kk - 1];
      const double eps = 1e-12 * std::max(1.0, w[0]);
      if (lam <= eps) {
        for (int i = 0; i < kk; ++i) s[i] = (w[i] > eps) ? 1.0 : 0.0;
        return s;
      }
      int above = 0, ties = 0;
      for (double v : w) {
        if (v > lam + eps) ++above;
        else if (v >= lam - eps) ++ties;
      }
      const double share = static_cast<double>(kk - above) / ties;
      for (int i = 0; i < n; ++i) {
        if (w[i] > lam + eps) s[i] = 1.0;
        else if (w[i] >= lam - eps) s[i] = share;
      }
      return s;
    }
    case GaugeSpec::Kind::dual: {
      GaugeSpec rb = resolve_closed_form(spec.base());
      if (rb.kind() == GaugeSpec::Kind::lp)
        return lp_subgradient(w, conjugate_exponent(rb.p()));
      if (rb.kind() == GaugeSpec::Kind::ky_fan) {
        const double l1 = std::accumulate(w.begin(), w.end(), 0.0);
        if (w[0] >= l1 / rb.k()) return lp_subgradient(w, kInf);
        std::fill(s.begin(), s.end(), 1.0 / rb.k());
        return s;
      }
      if (rb.kind() == GaugeSpec::Kind::dual)
        return gauge_subgradient_sorted(rb.base(), w, o);
      return numeric_dual(rb, w, o).x;  // Danskin: the ball maximizer
    }
    case GaugeSpec::Kind::convexify: {
      const double r = spec.r();
      std::vector<double> wr = pow_each(w, r);
      double B = eval_gauge(spec.base(), wr, o);
      if (!(B > 0.0)) return s;
      std::vector<double> t = gauge_subgradient_sorted(spec.base(), wr, o);
      const double scale = std::pow(B, 1.0 / r - 1.0);
      for (int i = 0; i < n; ++i) {
        double v = scale * t[i] * ((w[i] > 0.0) ? std::pow(w[i], r - 1.0) : 0.0);
        s[i] = std::isfinite(v) ? v : 0.0;
      }
      return s;
    }
    case GaugeSpec::Kind::concavify: {
      const double r = spec.r();
      std::vector<double> wr = pow_each(w, 1.0 / r);
      double B = eval_gauge(spec.base(), wr, o);
      if (!(B > 0.0)) return s;
      std::vector<double> t = gauge_subgradient_sorted(spec.base(), wr, o);
      const double scale = std::pow(B, r - 1.0);
      for (int i = 0; i < n; ++i) {
        double v = (w[i] > 0.0) ? scale * t[i] * std::pow(w[i], 1.0 / r - 1.0) : 0.0;
        s[i] = std::isfinite(v) ? v : 0.0;
      }
      return s;
    }
    case GaugeSpec::Kind::product: {
      ProductNormResult pr = product_impl(spec.left(), spec.right(), w, o);
      if (!(pr.value > 0.0)) return s;
      double gv = eval_gauge_unsorted(spec.left(), pr.factor_g, o);
      std::vector<double> th = subgrad_unsorted(spec.right(), pr.factor_h, o);
      for (int i = 0; i < n; ++i)
        if (w[i] > 0.0) s[i] = gv * th[i] * pr.factor_h[i] / w[i];
      return s;
    }
  }
  return s;
}

std::vector<double> gauge_subgradient(const GaugeSpec& spec, std::span<const double> v,
                                      const GaugeOpts& o) {
  std::vector<double> vv(v.begin(), v.end());
  return subgrad_unsorted(spec, vv, o);
}

// ---- probes -------------------------------------------------------------------------

ProbeReport convexity_probe(const GaugeSpec& spec, double p, int trials,
                            std::uint64_t seed, const GaugeOpts& o) {
  check_exponent(p, "probe exponent");
  ProbeReport rep{p, trials, seed, false, false, 0.0, 0.0, spec};
  Rng rng(derive_seed(seed, 0x9a0b35u));
  double worst_cv = 0.0, worst_cc = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int n = rng.uniform_int(1, 10);
    std::vector<double> x(n), y(n);
    const int mode = t % 4;
    for (int i = 0; i < n; ++i) {
      double a = std::abs(rng.gaussian()), b = std::abs(rng.gaussian());
      if (mode == 1) { a = rng.uniform01(); b = rng.uniform01(); }
      if (mode == 2) {
        if (rng.uniform01() < 0.5) a = 0.0;
        if (rng.uniform01() < 0.5) b = 0.0;
      }
      if (mode == 3 && i == 0) { a *= 10.0; b *= 10.0; }
      x[i] = a;
      y[i] = b;
    }
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i)
      z[i] = exp_is_inf(p) ? std::max(x[i], y[i])
                           : std::pow(std::pow(x[i], p) + std::pow(y[i], p), 1.0 / p);
    const double A = gauge_norm(spec, z, o);
    const double gx = gauge_norm(spec, x, o), gy = gauge_norm(spec, y, o);
    const double B = exp_is_inf(p) ? std::max(gx, gy)
                                   : std::pow(std::pow(gx, p) + std::pow(gy, p), 1.0 / p);
    if (B > 0.0) worst_cv = std::max(worst_cv, A / B);
    if (A > 0.0) worst_cc = std::max(worst_cc, B / A);
  }
  rep.worst_convex_ratio = worst_cv;
  rep.worst_concave_ratio = worst_cc;
  rep.convex_pass = worst_cv <= 1.0 + 1e-9;
  rep.concave_pass = worst_cc <= 1.0 + 1e-9;
  if (rep.convex_pass) rep.flagged = rep.flagged.with_convex_flag(p);
  if (rep.concave_pass) rep.flagged = rep.flagged.with_concave_flag(p);
  return rep;
}

}  // namespace symmkit
