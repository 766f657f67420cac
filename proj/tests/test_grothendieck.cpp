#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/QR>
#include <cmath>
#include <vector>

#include "symmkit/grothendieck.hpp"
#include "symmkit/ideal.hpp"
#include "symmkit/rng.hpp"

using namespace symmkit;

namespace {

CMatrix random_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

CMatrix random_unitary(Rng& rng, int n) {
  const CMatrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

// picks out a single entry of the input matrix
LinearMapToHilbert entry_functional(int n, int row, int col) {
  LinearMapToHilbert T;
  T.n = n;
  T.d = 1;
  T.coeff = CMatrix::Zero(1, static_cast<long>(n) * n);
  T.coeff(0, col * n + row) = 1.0;
  return T;
}

OperatorTuple random_tuple(Rng& rng, int len, int n) {
  OperatorTuple t(static_cast<std::size_t>(len));
  for (auto& m : t) m = random_matrix(rng, n, n);
  return t;
}

}  // namespace

TEST_CASE("map application and serialization") {
  Rng rng(11);
  const LinearMapToHilbert T = random_map(3, 2, 77);
  CHECK(T.n == 3);
  CHECK(T.d == 2);
  CHECK(T.coeff.rows() == 2);
  CHECK(T.coeff.cols() == 9);

  SUBCASE("apply matches explicit column-major contraction") {
    const CMatrix x = random_matrix(rng, 3, 3);
    const Eigen::VectorXcd y = T.apply(x);
    for (int r = 0; r < T.d; ++r) {
      Complex acc = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) acc += T.coeff(r, j * 3 + i) * x(i, j);
      CHECK(std::abs(y(r) - acc) < 1e-12);
    }
  }

  SUBCASE("apply is linear") {
    const CMatrix a = random_matrix(rng, 3, 3);
    const CMatrix b = random_matrix(rng, 3, 3);
    const Complex alpha(0.3, -1.1);
    const Eigen::VectorXcd lhs = T.apply(alpha * a + b);
    const Eigen::VectorXcd rhs = alpha * T.apply(a) + T.apply(b);
    CHECK((lhs - rhs).norm() < 1e-12);
  }

  SUBCASE("shape mismatch is rejected") {
    CHECK_THROWS_AS((void)T.apply(CMatrix::Zero(2, 2)), AdmissibilityError);
  }

  SUBCASE("json round trip preserves the map and its digest") {
    const nlohmann::ordered_json j = map_to_json(T);
    const LinearMapToHilbert back = map_from_json(j);
    CHECK(back.n == T.n);
    CHECK(back.d == T.d);
    CHECK((back.coeff - T.coeff).norm() == 0.0);
    CHECK(back.digest() == T.digest());
  }

  SUBCASE("malformed json is rejected") {
    CHECK_THROWS_AS((void)map_from_json(nlohmann::json::array()), ParseError);
    nlohmann::json j = map_to_json(T);
    j.erase("coefficients");
    CHECK_THROWS_AS((void)map_from_json(j), ParseError);
    nlohmann::json bad = map_to_json(T);
    bad["d"] = 5;  // disagrees with the coefficient array
    CHECK_THROWS_AS((void)map_from_json(bad), AdmissibilityError);
    nlohmann::json neg = map_to_json(T);
    neg["n"] = 0;
    CHECK_THROWS_AS((void)map_from_json(neg), AdmissibilityError);
  }

  SUBCASE("random_map is deterministic in the seed") {
    const LinearMapToHilbert a = random_map(3, 2, 77);
    const LinearMapToHilbert b = random_map(3, 2, 78);
    CHECK((a.coeff - T.coeff).norm() == 0.0);
    CHECK((b.coeff - T.coeff).norm() > 0.0);
  }
}

TEST_CASE("operator norm lower bound") {
  SUBCASE("frobenius-ball case equals the top singular value") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const int n = 2 + static_cast<int>(seed % 3);
      const LinearMapToHilbert T = random_map(n, 3, seed);
      const double got = operator_norm_lower(T, GaugeSpec::lp(2));
      Eigen::SelfAdjointEigenSolver<CMatrix> es(T.coeff.adjoint() * T.coeff);
      const double want = std::sqrt(es.eigenvalues().maxCoeff());
      CHECK(std::abs(got - want) < 1e-8 * std::max(1.0, want));
    }
  }

  SUBCASE("entry functional has norm one on the operator-norm ball") {
    const LinearMapToHilbert T = entry_functional(3, 1, 2);
    const double got = operator_norm_lower(T, GaugeSpec::lp(kInf));
    // |x_{12}| <= operator norm, attained at a matrix unit
    CHECK(got == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("upper bound from the coefficient mass") {
    const LinearMapToHilbert T = random_map(3, 4, 99);
    const double got = operator_norm_lower(T, GaugeSpec::lp(4));
    const double cap = T.coeff.norm() * std::pow(3.0, 0.25);
    CHECK(got <= cap + 1e-9);
    CHECK(got > 0.0);
  }

  SUBCASE("dominates every palette witness") {
    const LinearMapToHilbert T = random_map(3, 2, 5);
    const GaugeSpec spec = GaugeSpec::lp(4);
    const double got = operator_norm_lower(T, spec);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CMatrix e = CMatrix::Zero(3, 3);
        e(i, j) = 1.0;
        CHECK(T.apply(e).norm() / ideal_norm(spec, e) <= got + 1e-9);
      }
    const CMatrix id = CMatrix::Identity(3, 3);
    CHECK(T.apply(id).norm() / ideal_norm(spec, id) <= got + 1e-9);
  }

  SUBCASE("unitary post-composition does not change the value") {
    Rng rng(42);
    const LinearMapToHilbert T = random_map(3, 3, 13);
    LinearMapToHilbert U = T;
    U.coeff = random_unitary(rng, 3) * T.coeff;
    for (const GaugeSpec& spec : {GaugeSpec::lp(2), GaugeSpec::lp(4)}) {
      const double a = operator_norm_lower(T, spec);
      const double b = operator_norm_lower(U, spec);
      CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, a));
    }
  }
}

TEST_CASE("inequality ratio") {
  Rng rng(404);
  const LinearMapToHilbert T = random_map(3, 2, 21);

  SUBCASE("singletons cannot beat an exact operator norm") {
    for (int trial = 0; trial < 20; ++trial) {
      const OperatorTuple t{random_matrix(rng, 3, 3)};
      const double r = c_inequality_ratio(T, GaugeSpec::lp(2), t);
      CHECK(r <= 1.0 + 1e-9);
      CHECK(r > 0.0);
    }
  }

  SUBCASE("singletons with a witness-augmented norm stay below one") {
    const GaugeSpec spec = GaugeSpec::lp(4);
    const double tnorm = operator_norm_lower(T, spec);
    for (int trial = 0; trial < 20; ++trial) {
      const OperatorTuple t{random_matrix(rng, 3, 3)};
      const double witness = T.apply(t[0]).norm() / ideal_norm(spec, t[0]);
      const double r = c_inequality_ratio(T, spec, t, std::max(tnorm, witness));
      CHECK(r <= 1.0 + 1e-9);
    }
  }

  SUBCASE("zero tuples are rejected") {
    const OperatorTuple zero{CMatrix::Zero(3, 3)};
    CHECK_THROWS_AS((void)c_inequality_ratio(T, GaugeSpec::lp(2), zero),
                    AdmissibilityError);
    CHECK_THROWS_AS((void)c_inequality_ratio(T, GaugeSpec::lp(2), OperatorTuple{}),
                    AdmissibilityError);
  }

  SUBCASE("scaling invariance") {
    const OperatorTuple t = random_tuple(rng, 3, 3);
    OperatorTuple scaled = t;
    for (auto& m : scaled) m *= 7.25;
    const double a = c_inequality_ratio(T, GaugeSpec::lp(2), t);
    const double b = c_inequality_ratio(T, GaugeSpec::lp(2), scaled);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, a));
  }

  SUBCASE("rotation invariance in the target space") {
    LinearMapToHilbert U = T;
    U.coeff = random_unitary(rng, 2) * T.coeff;
    const OperatorTuple t = random_tuple(rng, 2, 3);
    for (const GaugeSpec& spec : {GaugeSpec::lp(2), GaugeSpec::lp(4)}) {
      const double a = c_inequality_ratio(T, spec, t);
      const double b = c_inequality_ratio(U, spec, t);
      CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, a));
    }
  }
}

TEST_CASE("certificate search on the frobenius gauge") {
  const LinearMapToHilbert T = random_map(3, 3, 314);
  const GaugeSpec spec = GaugeSpec::lp(2);

  SUBCASE("comfortable constant certifies and re-verifies") {
    const SearchResult res = certificate_search(T, spec, 1.05);
    REQUIRE(res.status == SearchStatus::certified);
    CHECK(res.cert.constant == 1.05);
    CHECK(res.cert.tnorm > 0.0);

    const CheckReport rep = verify_certificate(T, spec, res.cert);
    CHECK(rep.ok);
    CHECK(rep.min_eig >= -1e-10 * std::max(1.0, res.cert.F.norm()));
    CHECK(rep.ball_norm <= 1.0 + 1e-8);
    CHECK(rep.tnorm_consistent);
  }

  SUBCASE("constant below the hilbert threshold is refuted with evidence") {
    const SearchResult res = certificate_search(T, spec, 0.5);
    REQUIRE(res.status == SearchStatus::violated);
    CHECK(!res.samples.empty());
    for (const auto& x : res.samples)
      CHECK(ideal_norm(spec, x) == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("threshold bracketing: just above passes, just below fails") {
    const double c_star = 1.0 / std::sqrt(2.0);
    CHECK(certificate_search(T, spec, c_star * 1.02).status == SearchStatus::certified);
    CHECK(certificate_search(T, spec, c_star * 0.98).status == SearchStatus::violated);
  }

  SUBCASE("witness reuse forces an immediate refutation") {
    const SearchResult hi = certificate_search(T, spec, 0.72);
    REQUIRE(hi.status == SearchStatus::certified);
    GroOpts warm;
    warm.warm_samples = hi.cert.active_samples.empty()
                            ? OperatorTuple{CMatrix::Identity(3, 3)}
                            : hi.cert.active_samples;
    const SearchResult lo = certificate_search(T, spec, 0.1, warm);
    CHECK(lo.status == SearchStatus::violated);
    CHECK(lo.rounds == 1);
  }
}

TEST_CASE("certificate search on the operator-norm gauge") {
  const GaugeSpec spec = GaugeSpec::lp(kInf);

  SUBCASE("entry functional certifies at constant one") {
    const LinearMapToHilbert T = entry_functional(3, 0, 0);
    const SearchResult res = certificate_search(T, spec, 1.0);
    REQUIRE(res.status == SearchStatus::certified);
    const CheckReport rep = verify_certificate(T, spec, res.cert);
    CHECK(rep.ok);
    // the certifying functional concentrates on the picked-out entry
    CHECK(std::abs(res.cert.F(0, 0)) > 0.3);
  }

  SUBCASE("random map certifies at a generous constant") {
    const LinearMapToHilbert T = random_map(3, 2, 2718);
    const SearchResult res = certificate_search(T, spec, 3.0);
    REQUIRE(res.status == SearchStatus::certified);
    CHECK(verify_certificate(T, spec, res.cert).ok);
  }

  SUBCASE("gauges without a two-convexity flag are rejected") {
    const LinearMapToHilbert T = random_map(2, 2, 3);
    CHECK_THROWS_AS((void)certificate_search(T, GaugeSpec::lp(1), 1.0),
                    AdmissibilityError);
  }
}

TEST_CASE("certificate files") {
  const LinearMapToHilbert T = random_map(3, 2, 555);
  const GaugeSpec spec = GaugeSpec::lp(2);
  const SearchResult res = certificate_search(T, spec, 0.9);
  REQUIRE(res.status == SearchStatus::certified);

  SUBCASE("round trip through json and re-verify from the file alone") {
    const nlohmann::ordered_json j = certificate_to_json(res.cert, T, spec);
    const std::string text = j.dump();
    const CertificateFile file = certificate_from_json(nlohmann::json::parse(text));
    CHECK(file.map.digest() == T.digest());
    CHECK(file.spec.str() == spec.str());
    CHECK(file.cert.constant == res.cert.constant);
    CHECK((file.cert.F - res.cert.F).norm() == 0.0);
    CHECK(file.cert.active_samples.size() == res.cert.active_samples.size());
    const CheckReport rep = verify_certificate(file.map, file.spec, file.cert);
    CHECK(rep.ok);
  }

  SUBCASE("serialization is deterministic") {
    const SearchResult again = certificate_search(T, spec, 0.9);
    REQUIRE(again.status == SearchStatus::certified);
    CHECK(certificate_to_json(res.cert, T, spec).dump() ==
          certificate_to_json(again.cert, T, spec).dump());
  }

  SUBCASE("tampering is detected") {
    nlohmann::ordered_json j = certificate_to_json(res.cert, T, spec);
    j["map"]["coefficients"]["entries"][0][0] = 9.0;
    CHECK_THROWS_AS((void)certificate_from_json(j), ParseError);
    nlohmann::ordered_json k = certificate_to_json(res.cert, T, spec);
    k["kind"] = "something";
    CHECK_THROWS_AS((void)certificate_from_json(k), ParseError);
  }

  SUBCASE("dropping stored samples keeps the invariants checkable") {
    Certificate cut = res.cert;
    if (!cut.active_samples.empty()) cut.active_samples.pop_back();
    CHECK(verify_certificate(T, spec, cut).ok);
  }

  SUBCASE("an inflated stored norm is flagged") {
    Certificate bad = res.cert;
    bad.tnorm *= 1.5;
    const CheckReport rep = verify_certificate(T, spec, bad);
    CHECK(!rep.ok);
    CHECK(!rep.tnorm_consistent);
  }
}

TEST_CASE("constant estimation report") {
  const LinearMapToHilbert T = random_map(3, 2, 808);
  const GaugeSpec spec = GaugeSpec::lp(2);
  GroOpts opts;
  const C1Report rep = estimate_c1(T, spec, opts);

  const double c_star = 1.0 / std::sqrt(2.0);
  CHECK(rep.tnorm > 0.0);
  CHECK(rep.empirical_c1 > 0.0);
  CHECK(rep.empirical_c1 <= c_star + 1e-6);
  CHECK(rep.ordering_ok);
  CHECK(rep.empirical_c1 <= rep.empirical_c2 + 1e-6);
  // the frobenius gauge is self-dual, so the dual-side ratio is measured
  CHECK(rep.dual_k_ratio == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(rep.bracket_ok);
  CHECK(rep.violated_c <= rep.certified_c);
  CHECK(rep.certified_c >= c_star * 0.98);
  CHECK(rep.violated_c <= c_star * 1.02);
  CHECK(!rep.attempts.empty());

  const nlohmann::ordered_json j = c1_report_to_json(rep, false);
  CHECK(j.contains("tnorm"));
  CHECK(j.contains("empirical_c1"));
  CHECK(j.contains("empirical_c2"));
  CHECK(j.contains("ordering_ok"));
  CHECK(j.contains("attempts"));
  CHECK(!j.contains("wall_ms"));
  CHECK(c1_report_to_json(rep, true).contains("wall_ms"));
}
