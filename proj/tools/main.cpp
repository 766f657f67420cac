#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "symmkit/gauge.hpp"
#include "symmkit/grothendieck.hpp"
#include "symmkit/ideal.hpp"
#include "symmkit/kfs.hpp"
#include "symmkit/khintchine.hpp"
#include "symmkit/matrix_io.hpp"
#include "symmkit/rng.hpp"
#include "symmkit/schur.hpp"

using namespace symmkit;

namespace {

struct GlobalCfg {
  std::uint64_t seed = 1;
  double tol = 0.0;        // 0 -> per-module defaults
  int budget = 0;          // 0 -> per-module defaults; else inner-loop iteration cap
  int dim_cap = kDefaultDimCap;
  std::string out;         // append-only JSONL report log
  std::string format = "json";
  bool no_timestamp = false;
};

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// flatten one level for the csv summary; nested values are embedded as JSON
std::string csv_field(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void emit_report(nlohmann::ordered_json rep, const GlobalCfg& cfg) {
  if (!cfg.no_timestamp) rep["timestamp"] = iso_now();
  if (cfg.format == "csv") {
    for (const auto& [key, value] : rep.items())
      std::cout << csv_escape(key) << "," << csv_escape(csv_field(value)) << "\n";
  } else {
    std::cout << rep.dump(2) << "\n";
  }
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::app);
    if (!f) throw AdmissibilityError("cannot open report log: " + cfg.out);
    f << rep.dump() << "\n";
  }
}

double require_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw NumericError(std::string(what) + " is not finite (overflow or invalid input)");
  return v;
}

RealVec vector_moduli(const CMatrix& m) {
  if (m.rows() != 1 && m.cols() != 1)
    throw AdmissibilityError("vector input must be a single row or column");
  RealVec v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i)
    v[static_cast<std::size_t>(i)] = std::abs(m(i));
  return v;
}

double closed_lp(const RealVec& v, double p) {
  if (exp_is_inf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

// ---- norm -------------------------------------------------------------------

struct NormArgs {
  std::string space;
  std::string matrix_path, vector_path;
  bool dual = false;
  bool oracle = false;
  double probe_p = 0.0;
};

int cmd_norm(const NormArgs& a, const GlobalCfg& cfg) {
  const double otol = cfg.tol > 0.0 ? cfg.tol : 1e-6;
  nlohmann::ordered_json rep;
  rep["kind"] = "norm_report";

  bool is_kfs = true;
  KfsSpec kspec = KfsSpec::lp_grid(2.0);
  GaugeSpec gspec = GaugeSpec::lp(2.0);
  try {
    kspec = parse_kfs_spec(a.space);
  } catch (const ParseError&) {
    is_kfs = false;
    gspec = parse_gauge_spec(a.space);
  }
  rep["space"] = is_kfs ? kspec.str() : gspec.str();
  rep["dual"] = a.dual;

  KfsOpts ko;
  GaugeOpts go;
  if (cfg.tol > 0.0) ko.tol = cfg.tol;
  if (cfg.budget > 0) ko.sum_iters = cfg.budget;
  ko.seed = derive_seed(cfg.seed, 0x6e6f726du);

  double value = 0.0;
  bool oracle_available = false;
  double oracle_value = 0.0;

  if (!a.vector_path.empty()) {
    if (is_kfs)
      throw AdmissibilityError("vector input needs a gauge spec, not a grid space");
    const RealVec v = vector_moduli(load_matrix(a.vector_path, cfg.dim_cap));
    rep["input"] = a.vector_path;
    rep["entry"] = "vector";
    value = a.dual ? dual_norm(gspec, v, go) : gauge_norm(gspec, v, go);
    if (a.oracle) {
      if (a.dual) {
        // independent numeric ascent vs the (possibly closed-form) dual value
        oracle_value = dual_norm_numeric(gspec, v, go).value;
        oracle_available = true;
      } else {
        const GaugeSpec res = resolve_closed_form(gspec);
        if (res.kind() == GaugeSpec::Kind::lp) {
          oracle_value = closed_lp(v, res.p());
          oracle_available = true;
        }
      }
    }
  } else {
    if (a.matrix_path.empty())
      throw ParseError("norm needs --matrix or --vector");
    const CMatrix m = load_matrix(a.matrix_path, cfg.dim_cap);
    rep["input"] = a.matrix_path;
    rep["entry"] = "matrix";
    if (is_kfs) {
      const KfsSpec eval_spec = a.dual ? kfs_dual(kspec) : kspec;
      const KfsNormResult r = kfs_norm_detail(eval_spec, m, ko);
      value = r.value;
      rep["certified"] = r.certified;
      rep["lower_bound"] = r.lower_bound;
      if (a.oracle) {
        // the Hoelder certificate is the independent path for grid spaces
        oracle_value = r.lower_bound;
        oracle_available = true;
      }
    } else {
      const GaugeSpec eval_spec = a.dual ? GaugeSpec::dual(gspec) : gspec;
      value = ideal_norm(eval_spec, m, go);
      if (a.oracle) {
        const GaugeSpec res = resolve_closed_form(eval_spec);
        if (res.kind() == GaugeSpec::Kind::lp) {
          oracle_value = closed_lp(singular_values(m), res.p());
          oracle_available = true;
        }
      }
    }
  }

  require_finite(value, "norm value");
  rep["value"] = value;

  if (a.probe_p > 0.0) {
    if (is_kfs)
      throw AdmissibilityError("convexity probes apply to gauge specs only");
    const ProbeReport pr = convexity_probe(gspec, a.probe_p, 200, cfg.seed, go);
    nlohmann::ordered_json pj;
    pj["p"] = pr.p;
    pj["convex_pass"] = pr.convex_pass;
    pj["concave_pass"] = pr.concave_pass;
    pj["worst_convex_ratio"] = pr.worst_convex_ratio;
    pj["worst_concave_ratio"] = pr.worst_concave_ratio;
    pj["flagged"] = pr.flagged.str();
    rep["probe"] = pj;
  }

  int code = 0;
  if (a.oracle) {
    rep["oracle_available"] = oracle_available;
    if (oracle_available) {
      const bool pass = std::abs(value - oracle_value) <= otol * std::max(1.0, value);
      rep["oracle_value"] = oracle_value;
      rep["oracle_pass"] = pass;
      if (!pass) code = 1;
    }
  }
  rep["seed"] = cfg.seed;
  emit_report(std::move(rep), cfg);
  return code;
}

// ---- kh-verify ----------------------------------------------------------------

struct KhArgs {
  std::string space;
  std::string kase = "concave2";
  double q = 0.0;
  int instances = 8;
  int max_tuple = 4;
  int max_dim = 4;
  std::string mode = "exact";
  std::int64_t mc_samples = 4096;
};

int cmd_kh_verify(const KhArgs& a, const GlobalCfg& cfg) {
  const GaugeSpec spec = parse_gauge_spec(a.space);
  KhVerifyOpts opts;
  opts.max_tuple = a.max_tuple;
  opts.max_dim = a.max_dim;
  if (cfg.tol > 0.0) opts.tol = cfg.tol;
  if (cfg.budget > 0) opts.split.iters = cfg.budget;
  opts.mode = a.mode == "montecarlo" ? RademacherMode::montecarlo : RademacherMode::exact;
  opts.mc_samples = a.mc_samples;
  const KhintchineCase kase =
      a.kase == "convex2" ? KhintchineCase::convex2 : KhintchineCase::concave2;
  const VerificationReport vr =
      verify_khintchine(spec, kase, a.q, a.instances, cfg.seed, opts);
  emit_report(report_to_json(vr, !cfg.no_timestamp), cfg);
  return vr.all_pass ? 0 : 1;
}

// ---- gro ----------------------------------------------------------------------

struct GroArgs {
  std::string map_path;
  int random_n = 0, random_d = 0;
  std::string spec = "lp:2";
  bool estimate = false;
  double certify_c = 0.0;
  std::string check_path;
  std::string cert_out;
  int outer_rounds = 24;
};

int cmd_gro(const GroArgs& a, const GlobalCfg& cfg) {
  GroOpts opts;
  opts.seed = cfg.seed;
  opts.outer_rounds = a.outer_rounds;
  if (cfg.tol > 0.0) opts.tol = cfg.tol;
  if (cfg.budget > 0) opts.dykstra_iters = cfg.budget;

  if (!a.check_path.empty()) {
    std::ifstream f(a.check_path);
    if (!f) throw AdmissibilityError("cannot open certificate file: " + a.check_path);
    nlohmann::json doc = nlohmann::json::parse(f);
    const CertificateFile file = certificate_from_json(doc);
    const CheckReport chk = verify_certificate(file.map, file.spec, file.cert, opts);
    nlohmann::ordered_json rep;
    rep["kind"] = "gro_check";
    rep["file"] = a.check_path;
    rep["ok"] = chk.ok;
    rep["min_eig"] = chk.min_eig;
    rep["ball_norm"] = chk.ball_norm;
    rep["worst_sample_slack"] = chk.worst_sample_slack;
    rep["tnorm_consistent"] = chk.tnorm_consistent;
    rep["message"] = chk.message;
    rep["seed"] = cfg.seed;
    emit_report(std::move(rep), cfg);
    return chk.ok ? 0 : 1;
  }

  LinearMapToHilbert T;
  if (!a.map_path.empty()) {
    std::ifstream f(a.map_path);
    if (!f) throw AdmissibilityError("cannot open map file: " + a.map_path);
    T = map_from_json(nlohmann::json::parse(f));
  } else if (a.random_n > 0 && a.random_d > 0) {
    T = random_map(a.random_n, a.random_d, derive_seed(cfg.seed, 0x6d6170u));
  } else {
    throw AdmissibilityError("gro needs --map or --random-n/--random-d");
  }
  const GaugeSpec spec = parse_gauge_spec(a.spec);

  if (a.estimate) {
    const C1Report rep = estimate_c1(T, spec, opts);
    nlohmann::ordered_json j = c1_report_to_json(rep, !cfg.no_timestamp);
    j["seed"] = cfg.seed;
    emit_report(std::move(j), cfg);
    return rep.bracket_ok ? 0 : 5;
  }

  if (a.certify_c > 0.0) {
    const SearchResult res = certificate_search(T, spec, a.certify_c, opts);
    nlohmann::ordered_json rep;
    rep["kind"] = "gro_report";
    rep["spec"] = spec.str();
    rep["constant"] = a.certify_c;
    rep["status"] = res.status == SearchStatus::certified
                        ? "certified"
                        : res.status == SearchStatus::violated ? "violated"
                                                               : "inconclusive";
    rep["rounds"] = res.rounds;
    rep["worst_violation"] = res.worst_violation;
    if (res.status == SearchStatus::certified) {
      const nlohmann::ordered_json cert = certificate_to_json(res.cert, T, spec);
      if (!a.cert_out.empty()) {
        std::ofstream f(a.cert_out, std::ios::trunc);
        if (!f) throw AdmissibilityError("cannot open certificate output: " + a.cert_out);
        f << cert.dump(2) << "\n";
        rep["certificate_file"] = a.cert_out;
      } else {
        rep["certificate"] = cert;
      }
    } else if (res.status == SearchStatus::violated) {
      nlohmann::ordered_json digests = nlohmann::ordered_json::array();
      for (const auto& x : res.samples) digests.push_back(matrix_digest(x));
      rep["violating_sample_digests"] = digests;
    }
    rep["seed"] = cfg.seed;
    emit_report(std::move(rep), cfg);
    if (res.status == SearchStatus::certified) return 0;
    return res.status == SearchStatus::violated ? 1 : 5;
  }

  throw AdmissibilityError("gro needs one of --estimate-c1, --certify, --check");
}

// ---- schur --------------------------------------------------------------------

struct SchurArgs {
  std::string symbol_path;
  std::string espec;
  std::string fspec = "lp:2";
  std::string char_mode;  // "", "l2", "sesf", "lp"
  double p = 1.0;
  std::string target = "schatten";
  bool lower_only = false;
};

int cmd_schur(const SchurArgs& a, const GlobalCfg& cfg) {
  const CMatrix phi = load_matrix(a.symbol_path, cfg.dim_cap);
  const GaugeSpec espec = parse_gauge_spec(a.espec);
  const GaugeSpec fspec = parse_gauge_spec(a.fspec);
  SchurOpts opts;
  opts.seed = cfg.seed;
  if (cfg.tol > 0.0) {
    opts.tol = cfg.tol;
    opts.kfs.tol = cfg.tol;
  }
  if (cfg.budget > 0) {
    opts.iters = cfg.budget;
    opts.kfs.sum_iters = cfg.budget;
  }

  if (a.lower_only) {
    const double value = require_finite(
        multiplier_norm_lower(phi, espec, fspec, opts), "multiplier norm");
    nlohmann::ordered_json rep;
    rep["kind"] = "schur_lower";
    rep["espec"] = espec.str();
    rep["fspec"] = fspec.str();
    rep["value"] = value;
    rep["seed"] = cfg.seed;
    emit_report(std::move(rep), cfg);
    return 0;
  }

  if (!a.char_mode.empty()) {
    CharNormResult res;
    if (a.char_mode == "l2") {
      res = to_l2_char_detail(phi, espec, opts);
    } else if (a.char_mode == "sesf") {
      res = sesf_char_detail(phi, espec, fspec, opts);
    } else if (a.char_mode == "lp") {
      const LpCharTarget target =
          a.target == "grid" ? LpCharTarget::grid : LpCharTarget::schatten;
      res = to_lp_char_detail(phi, espec, a.p, target, opts);
    } else {
      throw ParseError("unknown characterization: " + a.char_mode);
    }
    nlohmann::ordered_json rep;
    rep["kind"] = "schur_char";
    rep["char"] = a.char_mode;
    rep["espec"] = espec.str();
    if (a.char_mode == "sesf") rep["fspec"] = fspec.str();
    if (a.char_mode == "lp") {
      rep["p"] = a.p;
      rep["target"] = a.target;
    }
    rep["inner"] = res.inner.str();
    rep["row_exponent"] = exp_is_inf(res.q) ? "inf" : std::to_string(res.q);
    rep["value"] = require_finite(res.value, "characterization norm");
    rep["lower_bound"] = res.lower_bound;
    rep["certified"] = res.certified;
    rep["exact_spaces"] = res.exact_spaces;
    rep["seed"] = cfg.seed;
    emit_report(std::move(rep), cfg);
    return 0;
  }

  const MultiplierReport rep = two_sided_check(phi, espec, fspec, opts);
  nlohmann::ordered_json j = multiplier_report_to_json(rep, !cfg.no_timestamp);
  j["seed"] = cfg.seed;
  emit_report(std::move(j), cfg);
  return 0;
}

// ---- selftest -------------------------------------------------------------------

int cmd_selftest(const GlobalCfg& cfg) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  bool all = true;
  auto check = [&](const char* name, bool pass) {
    nlohmann::ordered_json c;
    c["name"] = name;
    c["pass"] = pass;
    checks.push_back(c);
    all = all && pass;
  };
  auto close = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
  };

  {
    RealVec v{3.0, 4.0};
    check("lp2-vector", close(gauge_norm(GaugeSpec::lp(2), v), 5.0, 1e-12));
    check("dual-lp3", close(dual_norm(GaugeSpec::lp(3), v), closed_lp(v, 1.5), 1e-9));
    RealVec w{5.0, 2.0, 1.0};
    check("kyfan2", close(gauge_norm(GaugeSpec::ky_fan(2), w), 7.0, 1e-12));
  }
  {
    auto chain = [](double p) {
      return resolve_closed_form(GaugeSpec::convexify(
                 GaugeSpec::dual(GaugeSpec::concavify(GaugeSpec::lp(p), 2.0)), 2.0))
          .str();
    };
    check("chain-lp4", chain(4.0) == "lp:4");
    check("chain-lp6", chain(6.0) == "lp:3");
    check("chain-lpinf", chain(kInf) == "lp:2");
    const GaugeSpec l = resolve_closed_form(
        GaugeSpec::product(GaugeSpec::lp(2), GaugeSpec::lp(2)));
    check("chain-product", l.str() == "lp:1");
  }
  {
    CMatrix h(2, 2);
    h << 1.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 1.0;
    const OperatorTuple t{h};
    check("selfadjoint-hermitian",
          close(selfadjoint_square_norm(GaugeSpec::lp(2), t),
                std::sqrt(2.0) * ideal_norm(GaugeSpec::lp(2), h), 1e-10));
    check("trace-norm-identity",
          close(ideal_norm(GaugeSpec::lp(1), CMatrix::Identity(2, 2)), 2.0, 1e-12));
  }
  {
    Rng rng(derive_seed(cfg.seed, 0x73656cu));
    OperatorTuple t(3);
    double frob2 = 0.0;
    for (auto& m : t) {
      m.resize(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = rng.cgaussian();
      frob2 += m.squaredNorm();
    }
    const RademacherResult r = rademacher_second_moment(GaugeSpec::lp(2), t);
    check("rademacher-frobenius", close(r.value, std::sqrt(frob2), 1e-10));
  }
  {
    const KfsSpec row = KfsSpec::mixed_row(GaugeSpec::lp(2), kInf);
    const KfsSpec space = KfsSpec::sum(row, KfsSpec::transpose(row));
    check("kfs-identity-split",
          close(kfs_norm(space, CMatrix::Identity(4, 4)), 2.0, 1e-6));
  }
  {
    const LinearMapToHilbert T = random_map(2, 2, derive_seed(cfg.seed, 0x67u));
    const SearchResult res = certificate_search(T, GaugeSpec::lp(2), 1.05);
    const bool ok = res.status == SearchStatus::certified &&
                    verify_certificate(T, GaugeSpec::lp(2), res.cert).ok;
    check("gro-certify", ok);
  }
  {
    const MultiplierReport rep = two_sided_check(CMatrix::Identity(4, 4),
                                                 GaugeSpec::lp(kInf), GaugeSpec::lp(2));
    check("schur-two-sided",
          close(rep.lower, 2.0, 1e-6) && close(rep.upper_char, 2.0, 1e-6));
  }

  nlohmann::ordered_json rep;
  rep["kind"] = "selftest";
  rep["checks"] = checks;
  rep["all_pass"] = all;
  rep["seed"] = cfg.seed;
  emit_report(std::move(rep), cfg);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetric-gauge matrix norm toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "plain key=value config; flags override it");

  GlobalCfg cfg;
  app.add_option("--seed", cfg.seed, "master seed; per-instance seeds derive from it");
  app.add_option("--tol", cfg.tol, "tolerance override (0 = module defaults)");
  app.add_option("--budget", cfg.budget, "optimizer iteration cap (0 = defaults)");
  app.add_option("--dim-cap", cfg.dim_cap, "matrix size cap for file inputs");
  app.add_option("--out", cfg.out, "append the JSON report to this file");
  app.add_option("--format", cfg.format, "stdout format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timestamp", cfg.no_timestamp, "omit timestamps and timings");

  NormArgs na;
  CLI::App* norm = app.add_subcommand("norm", "evaluate a gauge / ideal / grid norm");
  norm->add_option("--space", na.space, "spec text")->required();
  auto* mopt = norm->add_option("--matrix", na.matrix_path, "matrix file (.json/.csv)");
  norm->add_option("--vector", na.vector_path, "vector file (.json/.csv)")
      ->excludes(mopt);
  norm->add_flag("--dual", na.dual, "evaluate the dual norm");
  norm->add_flag("--oracle", na.oracle, "cross-check against an independent path");
  norm->add_option("--probe-convexity", na.probe_p,
                   "probe p-convexity/concavity of the spec");

  KhArgs ka;
  CLI::App* kh = app.add_subcommand("kh-verify", "random-sign second-moment checks");
  kh->add_option("--space", ka.space, "gauge spec")->required();
  kh->add_option("--case", ka.kase, "concave2 | convex2")
      ->check(CLI::IsMember({"concave2", "convex2"}));
  kh->add_option("--q", ka.q, "concavity exponent for the convex2 case");
  kh->add_option("--instances", ka.instances, "instance count")
      ->check(CLI::PositiveNumber);
  kh->add_option("--max-tuple", ka.max_tuple, "largest tuple length");
  kh->add_option("--max-dim", ka.max_dim, "largest matrix size");
  kh->add_option("--mode", ka.mode, "exact | montecarlo")
      ->check(CLI::IsMember({"exact", "montecarlo"}));
  kh->add_option("--mc-samples", ka.mc_samples, "montecarlo sample count");

  GroArgs ga;
  CLI::App* gro = app.add_subcommand("gro", "factorization certificates for maps into "
                                            "a hilbert space");
  gro->add_option("--map", ga.map_path, "map file (n, d, coefficients)");
  gro->add_option("--random-n", ga.random_n, "random map: matrix size");
  gro->add_option("--random-d", ga.random_d, "random map: target dimension");
  gro->add_option("--spec", ga.spec, "gauge spec (default lp:2)");
  gro->add_flag("--estimate-c1", ga.estimate, "bracket the best constant");
  gro->add_option("--certify", ga.certify_c, "search a certificate at this constant");
  gro->add_option("--check", ga.check_path, "re-verify a saved certificate file");
  gro->add_option("--cert-out", ga.cert_out, "write the certificate document here");
  gro->add_option("--outer-rounds", ga.outer_rounds, "cutting-plane round budget");

  SchurArgs sa;
  CLI::App* schur = app.add_subcommand("schur", "entrywise multiplier norms");
  schur->add_option("--symbol", sa.symbol_path, "symbol matrix file")->required();
  schur->add_option("--espec", sa.espec, "source gauge spec")->required();
  schur->add_option("--fspec", sa.fspec, "target gauge spec (default lp:2)");
  schur->add_option("--char", sa.char_mode, "characterization norm: l2 | sesf | lp");
  schur->add_option("--p", sa.p, "exponent for --char lp");
  schur->add_option("--target", sa.target, "schatten | grid (for --char lp)")
      ->check(CLI::IsMember({"schatten", "grid"}));
  schur->add_flag("--lower-only", sa.lower_only, "direct ascent lower bound only");

  CLI::App* self = app.add_subcommand("selftest", "fast cross-module sanity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (norm->parsed()) return cmd_norm(na, cfg);
    if (kh->parsed()) return cmd_kh_verify(ka, cfg);
    if (gro->parsed()) return cmd_gro(ga, cfg);
    if (schur->parsed()) return cmd_schur(sa, cfg);
    if (self->parsed()) return cmd_selftest(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const AdmissibilityError& e) {
    std::cerr << "admissibility error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
