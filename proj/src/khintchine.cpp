#include "symmkit/khintchine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "symmkit/ideal.hpp"
#include "symmkit/rng.hpp"

namespace symmkit {

namespace {

CMatrix signed_sum(const OperatorTuple& t, std::uint64_t mask) {
  CMatrix s = t[0];  // first sign pinned to +1 by symmetry
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (mask & (std::uint64_t{1} << (k - 1)))
      s -= t[k];
    else
      s += t[k];
  }
  return s;
}

double tuple_scale(const OperatorTuple& t) {
  double s = 0.0;
  for (const auto& m : t) s = std::max(s, m.norm());
  return s;
}

}  // namespace

RademacherResult rademacher_second_moment(const GaugeSpec& spec, const OperatorTuple& t,
                                          RademacherMode mode, std::int64_t samples,
                                          std::uint64_t seed, const GaugeOpts& opts) {
  check_tuple(t);
  const auto n = static_cast<int>(t.size());
  RademacherResult out;
  out.mode = mode;
  if (mode == RademacherMode::exact) {
    if (n > 20)
      throw AdmissibilityError("rademacher_second_moment: exact enumeration capped at 20 operators");
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < half; ++mask) {
      const double v = ideal_norm(spec, signed_sum(t, mask), opts);
      acc += v * v;
    }
    out.value = std::sqrt(acc / static_cast<double>(half));
    out.samples = static_cast<std::int64_t>(half) * 2;
    return out;
  }
  if (samples < 1) throw AdmissibilityError("rademacher_second_moment: samples must be positive");
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    CMatrix s = CMatrix::Zero(t[0].rows(), t[0].cols());
    for (const auto& m : t) s += rng.sign() * m;
    const double v = ideal_norm(spec, s, opts);
    const double sq = v * v;
    const double delta = sq - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (sq - mean);
  }
  out.value = std::sqrt(std::max(0.0, mean));
  out.samples = samples;
  if (samples > 1 && out.value > 0.0) {
    const double se_mean = std::sqrt(m2 / static_cast<double>(samples - 1) /
                                     static_cast<double>(samples));
    out.stderr_value = se_mean / (2.0 * out.value);
  }
  return out;
}

namespace {

struct SplitEval {
  double value = 0.0;
  double col = 0.0, row = 0.0;
};

SplitEval eval_split(const GaugeSpec& spec, const OperatorTuple& x, const OperatorTuple& a,
                     OperatorTuple& b_out, const GaugeOpts& gauge) {
  b_out.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) b_out[k] = x[k] - a[k];
  SplitEval e;
  e.col = ideal_norm(spec, vstack(a), gauge);
  e.row = ideal_norm(spec, hstack(b_out), gauge);
  e.value = e.col + e.row;
  return e;
}

// Subgradient of a -> ||vstack(a)|| + ||hstack(x-a)|| assembled from the
// Watson subgradients of the two stacked matrices.
OperatorTuple split_subgradient(const GaugeSpec& spec, const OperatorTuple& x,
                                const OperatorTuple& a, const OperatorTuple& b,
                                const GaugeOpts& gauge) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index r = x[0].rows(), c = x[0].cols();
  const CMatrix gv = ideal_subgradient(spec, vstack(a), gauge);
  const CMatrix gh = ideal_subgradient(spec, hstack(b), gauge);
  OperatorTuple g(x.size());
  for (Eigen::Index k = 0; k < n; ++k)
    g[static_cast<std::size_t>(k)] = gv.block(k * r, 0, r, c) - gh.block(0, k * c, r, c);
  return g;
}

bool dual_free(const GaugeSpec& g) {
  switch (g.kind()) {
    case GaugeSpec::Kind::lp:
    case GaugeSpec::Kind::ky_fan:
      return true;
    case GaugeSpec::Kind::dual:
      return false;
    case GaugeSpec::Kind::convexify:
    case GaugeSpec::Kind::concavify:
      return dual_free(g.base());
    case GaugeSpec::Kind::product:
      return dual_free(g.left()) && dual_free(g.right());
  }
  return false;
}

// A tuple g that is dual-feasible against both stacks certifies
//   inf_split >= Re sum_k <g_k, x_k>,
// because every split pairs below ||V(a)|| + ||H(b)||.  Only attempted when
// the dual gauge has an exact (dual-node-free) closed form, so that the
// normalization cannot under-estimate.
double holder_split_bound(const GaugeSpec& spec, const OperatorTuple& x,
                          const OperatorTuple& a, const OperatorTuple& b,
                          const GaugeOpts& gauge) {
  const GaugeSpec dspec = resolve_closed_form(GaugeSpec::dual(spec));
  if (!dual_free(dspec)) return 0.0;
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index r = x[0].rows(), c = x[0].cols();
  const CMatrix gv = ideal_subgradient(spec, vstack(a), gauge);
  const CMatrix gh = ideal_subgradient(spec, hstack(b), gauge);
  OperatorTuple cand_v(x.size()), cand_h(x.size()), cand_m(x.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    cand_v[static_cast<std::size_t>(k)] = gv.block(k * r, 0, r, c);
    cand_h[static_cast<std::size_t>(k)] = gh.block(0, k * c, r, c);
    cand_m[static_cast<std::size_t>(k)] =
        0.5 * (cand_v[static_cast<std::size_t>(k)] + cand_h[static_cast<std::size_t>(k)]);
  }
  double best = 0.0;
  for (const OperatorTuple* g : {&cand_v, &cand_h, &cand_m}) {
    const double den = std::max(ideal_norm(dspec, vstack(*g), gauge),
                                ideal_norm(dspec, hstack(*g), gauge));
    if (den <= 1e-300) continue;
    double pair = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      pair += ((*g)[k].array().conjugate() * x[k].array()).sum().real();
    best = std::max(best, pair / den);
  }
  return best;
}

}  // namespace

SplitResult best_row_column_split(const GaugeSpec& spec, const OperatorTuple& t,
                                  const SplitOpts& opts) {
  check_tuple(t);
  if (t[0].rows() != t[0].cols())
    throw AdmissibilityError("best_row_column_split: operators must be square");
  const auto n = t.size();
  const double scale = tuple_scale(t);

  // every split dominates each single operator (submatrix monotonicity)
  double floor_bound = 0.0;
  for (const auto& m : t) floor_bound = std::max(floor_bound, ideal_norm(spec, m, opts.gauge));

  SplitResult best;
  best.value = kInf;
  OperatorTuple b_tmp(n);

  auto consider = [&](const OperatorTuple& a) {
    const SplitEval e = eval_split(spec, t, a, b_tmp, opts.gauge);
    if (e.value < best.value) {
      best.value = e.value;
      best.a = a;
      best.b = b_tmp;
    }
    return e;
  };

  Rng rng(derive_seed(opts.seed, 0xa5));
  double value_at_checkpoint = kInf;
  const int total_restarts = std::max(1, opts.restarts);
  for (int restart = 0; restart < total_restarts; ++restart) {
    OperatorTuple a(n);
    for (std::size_t k = 0; k < n; ++k) {
      switch (restart) {
        case 0: a[k] = CMatrix::Zero(t[k].rows(), t[k].cols()); break;
        case 1: a[k] = t[k]; break;
        case 2: a[k] = 0.5 * t[k]; break;
        default: {
          a[k] = 0.5 * t[k];
          const double s = 0.25 * std::max(t[k].norm(), 1e-12);
          for (Eigen::Index i = 0; i < a[k].rows(); ++i)
            for (Eigen::Index j = 0; j < a[k].cols(); ++j) a[k](i, j) += s * rng.cgaussian();
          break;
        }
      }
    }
    SplitEval cur = consider(a);
    double local_best = cur.value;
    double delta = std::max(0.25 * std::max(local_best - floor_bound, 0.0), 1e-3 * std::max(scale, 1e-12));
    for (int it = 0; it < opts.iters; ++it) {
      OperatorTuple b(n);
      for (std::size_t k = 0; k < n; ++k) b[k] = t[k] - a[k];
      const OperatorTuple g = split_subgradient(spec, t, a, b, opts.gauge);
      double gnorm2 = 0.0;
      for (const auto& gk : g) gnorm2 += gk.squaredNorm();
      if (gnorm2 <= 1e-30) break;
      const double target = std::max(floor_bound, local_best - delta);
      double step = (cur.value - target) / gnorm2;
      if (step <= 0.0) {
        delta *= 0.5;
        if (delta < opts.tol * std::max(1.0, scale)) break;
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) a[k] -= step * g[k];
      cur = consider(a);
      if (cur.value < local_best) local_best = cur.value;
      best.iterations++;
      if (it == (3 * opts.iters) / 4 && restart == total_restarts - 1)
        value_at_checkpoint = best.value;
    }
  }

  if (best.value < floor_bound - opts.tol * std::max(1.0, scale) - 1e-12)
    throw NumericError("best_row_column_split: value fell below the triangle lower bound");
  best.value = std::max(best.value, floor_bound);
  best.lower_bound = std::max(floor_bound,
                              holder_split_bound(spec, t, best.a, best.b, opts.gauge));
  best.lower_bound = std::min(best.lower_bound, best.value);
  best.converged =
      (best.value - best.lower_bound <= 1e-6 * std::max(1.0, best.value)) ||
      (value_at_checkpoint - best.value <= 1e-6 * std::max(1.0, best.value));
  return best;
}

VerificationReport verify_khintchine(const GaugeSpec& spec, KhintchineCase kase, double q,
                                     int instances, std::uint64_t seed,
                                     const KhVerifyOpts& opts) {
  if (instances < 1) throw AdmissibilityError("verify_khintchine: instance count must be positive");
  if (kase == KhintchineCase::concave2) {
    if (!spec.is_concave(2.0))
      throw AdmissibilityError("verify_khintchine: the split comparison needs a 2-concave gauge");
  } else {
    if (!spec.is_convex(2.0))
      throw AdmissibilityError("verify_khintchine: the column/row comparison needs a 2-convex gauge");
    if (exp_is_inf(q) || !spec.is_concave(q))
      throw AdmissibilityError("verify_khintchine: the column/row comparison needs a finite concavity exponent");
  }

  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.suite = kase == KhintchineCase::concave2 ? "khintchine-2-concave" : "khintchine-2-convex";
  rep.spec = spec.str();
  rep.kase = kase;
  rep.q = kase == KhintchineCase::convex2 ? q : 0.0;
  rep.master_seed = seed;
  rep.all_pass = true;

  for (int i = 0; i < instances; ++i) {
    KhInstance inst;
    inst.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(inst.seed);
    inst.tuple_len = rng.uniform_int(2, std::max(2, opts.max_tuple));
    inst.dim = rng.uniform_int(2, std::max(2, opts.max_dim));
    OperatorTuple t(static_cast<std::size_t>(inst.tuple_len));
    for (auto& m : t) {
      m.resize(inst.dim, inst.dim);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.cgaussian();
    }

    const RademacherResult rad = rademacher_second_moment(
        spec, t, opts.mode, opts.mc_samples, derive_seed(inst.seed, 0x52), opts.gauge);
    inst.lhs = rad.value;
    inst.rhs = rad.value;
    const double tol = opts.tol * std::max(1.0, rad.value);
    if (kase == KhintchineCase::concave2) {
      SplitOpts so = opts.split;
      so.seed = derive_seed(inst.seed, 0x53);
      inst.mid = best_row_column_split(spec, t, so).value;
      inst.pass = inst.lhs <= inst.mid + tol;
      inst.ratio = inst.lhs > 0.0 ? inst.mid / inst.lhs : 1.0;
    } else {
      inst.mid = std::max(column_square_norm(spec, t, opts.gauge),
                          row_square_norm(spec, t, opts.gauge));
      inst.pass = inst.mid <= inst.rhs + tol;
      inst.ratio = inst.mid > 0.0 ? inst.rhs / inst.mid : 1.0;
    }
    rep.max_ratio = std::max(rep.max_ratio, inst.ratio);
    rep.all_pass = rep.all_pass && inst.pass;
    rep.instances.push_back(inst);
  }

  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

nlohmann::ordered_json report_to_json(const VerificationReport& rep, bool include_timing) {
  nlohmann::ordered_json j;
  j["suite"] = rep.suite;
  j["spec"] = rep.spec;
  j["case"] = rep.kase == KhintchineCase::concave2 ? "concave2" : "convex2";
  if (rep.kase == KhintchineCase::convex2) j["q"] = rep.q;
  j["master_seed"] = rep.master_seed;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& inst : rep.instances) {
    nlohmann::ordered_json ji;
    ji["seed"] = inst.seed;
    ji["tuple_len"] = inst.tuple_len;
    ji["dim"] = inst.dim;
    ji["lhs"] = inst.lhs;
    ji["mid"] = inst.mid;
    ji["rhs"] = inst.rhs;
    ji["ratio"] = inst.ratio;
    ji["pass"] = inst.pass;
    arr.push_back(ji);
  }
  j["instances"] = arr;
  j["max_ratio"] = rep.max_ratio;
  j["all_pass"] = rep.all_pass;
  if (include_timing) j["wall_ms"] = rep.wall_ms;
  return j;
}

}  // namespace symmkit
