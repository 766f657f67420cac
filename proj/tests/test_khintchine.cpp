#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "symmkit/ideal.hpp"
#include "symmkit/khintchine.hpp"
#include "symmkit/rng.hpp"

using namespace symmkit;

namespace {

OperatorTuple random_tuple(Rng& rng, int n, int rows, int cols) {
  OperatorTuple t(static_cast<std::size_t>(n));
  for (auto& m : t) {
    m.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  }
  return t;
}

double frobenius_sq_sum(const OperatorTuple& t) {
  double s = 0.0;
  for (const auto& m : t) s += m.squaredNorm();
  return s;
}

}  // namespace

TEST_CASE("rademacher average: two and three point closed forms") {
  Rng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    OperatorTuple t = random_tuple(rng, 2, 3, 3);
    for (double p : {1.0, 2.0, 3.0, kInf}) {
      const GaugeSpec g = GaugeSpec::lp(p);
      const double plus = ideal_norm(g, t[0] + t[1]);
      const double minus = ideal_norm(g, t[0] - t[1]);
      const double expect = std::sqrt(0.5 * (plus * plus + minus * minus));
      const RademacherResult r = rademacher_second_moment(g, t);
      CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
      CHECK(r.samples == 4);
    }
  }
  OperatorTuple t = random_tuple(rng, 3, 2, 4);
  const GaugeSpec g = GaugeSpec::lp(4);
  double acc = 0.0;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0})
      for (double s3 : {1.0, -1.0}) {
        const double v = ideal_norm(g, s1 * t[0] + s2 * t[1] + s3 * t[2]);
        acc += v * v;
      }
  const RademacherResult r = rademacher_second_moment(g, t);
  CHECK(r.value == doctest::Approx(std::sqrt(acc / 8.0)).epsilon(1e-12));
}

TEST_CASE("rademacher average at lp:2 equals the frobenius square sum") {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int d = rng.uniform_int(2, 5);
    OperatorTuple t = random_tuple(rng, n, d, d);
    const RademacherResult r = rademacher_second_moment(GaugeSpec::lp(2), t);
    const double expect = std::sqrt(frobenius_sq_sum(t));
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("rademacher average: sign and permutation invariance") {
  Rng rng(303);
  OperatorTuple t = random_tuple(rng, 4, 3, 3);
  const GaugeSpec g = GaugeSpec::lp(3);
  const double base = rademacher_second_moment(g, t).value;
  OperatorTuple flipped = t;
  flipped[2] = -flipped[2];
  CHECK(rademacher_second_moment(g, flipped).value == doctest::Approx(base).epsilon(1e-12));
  OperatorTuple perm = {t[3], t[1], t[0], t[2]};
  CHECK(rademacher_second_moment(g, perm).value == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rademacher monte carlo tracks the exact value") {
  Rng rng(404);
  OperatorTuple t = random_tuple(rng, 5, 4, 4);
  const GaugeSpec g = GaugeSpec::lp(1);
  const double exact = rademacher_second_moment(g, t).value;
  const RademacherResult mc =
      rademacher_second_moment(g, t, RademacherMode::montecarlo, 4096, 7);
  CHECK(mc.stderr_value > 0.0);
  CHECK(std::abs(mc.value - exact) <= 5.0 * mc.stderr_value + 1e-9);
  // deterministic given the seed
  const RademacherResult mc2 =
      rademacher_second_moment(g, t, RademacherMode::montecarlo, 4096, 7);
  CHECK(mc.value == mc2.value);
}

TEST_CASE("rademacher admissibility errors") {
  Rng rng(505);
  OperatorTuple big = random_tuple(rng, 21, 2, 2);
  CHECK_THROWS_AS(rademacher_second_moment(GaugeSpec::lp(2), big), AdmissibilityError);
  OperatorTuple t = random_tuple(rng, 2, 2, 2);
  CHECK_THROWS_AS(rademacher_second_moment(GaugeSpec::lp(2), t, RademacherMode::montecarlo, 0),
                  AdmissibilityError);
  CHECK_THROWS_AS(rademacher_second_moment(GaugeSpec::lp(2), OperatorTuple{}), AdmissibilityError);
}

TEST_CASE("split: decomposition invariants") {
  Rng rng(606);
  for (double p : {1.0, 1.5, 2.0}) {
    const GaugeSpec g = GaugeSpec::lp(p);
    OperatorTuple t = random_tuple(rng, 3, 3, 3);
    const SplitResult s = best_row_column_split(g, t);
    REQUIRE(s.a.size() == t.size());
    REQUIRE(s.b.size() == t.size());
    for (std::size_t k = 0; k < t.size(); ++k)
      CHECK((s.a[k] + s.b[k] - t[k]).norm() <= 1e-10 * std::max(1.0, t[k].norm()));
    const double recomputed =
        ideal_norm(g, vstack(s.a)) + ideal_norm(g, hstack(s.b));
    CHECK(s.value == doctest::Approx(recomputed).epsilon(1e-10));
    double floor_bound = 0.0;
    for (const auto& m : t) floor_bound = std::max(floor_bound, ideal_norm(g, m));
    CHECK(s.value >= floor_bound - 1e-9);
    CHECK(s.lower_bound <= s.value + 1e-12);
    CHECK(s.lower_bound >= floor_bound - 1e-9);
  }
}

TEST_CASE("split: single operator reduces to its norm") {
  Rng rng(707);
  for (double p : {1.0, 4.0 / 3.0, 2.0, 3.0, kInf}) {
    const GaugeSpec g = GaugeSpec::lp(p);
    OperatorTuple t = random_tuple(rng, 1, 4, 4);
    const SplitResult s = best_row_column_split(g, t);
    CHECK(s.value == doctest::Approx(ideal_norm(g, t[0])).epsilon(1e-6));
  }
}

TEST_CASE("split at lp:2 matches the frobenius square sum exactly") {
  // at lp:2 the rademacher average, the column norm and the split infimum all
  // collapse to the same quantity
  Rng rng(808);
  for (int trial = 0; trial < 5; ++trial) {
    OperatorTuple t = random_tuple(rng, 3, 3, 3);
    const SplitResult s = best_row_column_split(GaugeSpec::lp(2), t);
    const double expect = std::sqrt(frobenius_sq_sum(t));
    CHECK(s.value >= expect - 1e-9);
    CHECK(s.value <= expect * (1.0 + 1e-6) + 1e-9);
    // the hoelder certificate closes the gap here
    CHECK(s.lower_bound == doctest::Approx(expect).epsilon(1e-6));
    CHECK(s.converged);
  }
}

TEST_CASE("split beats a long random search") {
  Rng rng(909);
  const GaugeSpec g = GaugeSpec::lp(1);
  OperatorTuple t = random_tuple(rng, 3, 3, 3);
  const SplitResult s = best_row_column_split(g, t);
  Rng search(999);
  double best_random = kInf;
  OperatorTuple a(t.size()), b(t.size());
  for (int trial = 0; trial < 500; ++trial) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double theta = search.uniform01();
      a[k] = theta * t[k];
      if (trial % 2 == 1)
        for (Eigen::Index i = 0; i < a[k].rows(); ++i)
          for (Eigen::Index j = 0; j < a[k].cols(); ++j)
            a[k](i, j) += 0.2 * search.cgaussian();
      b[k] = t[k] - a[k];
    }
    best_random = std::min(best_random, ideal_norm(g, vstack(a)) + ideal_norm(g, hstack(b)));
  }
  CHECK(s.value <= best_random + 1e-7);
}

TEST_CASE("split rejects non-square operators") {
  Rng rng(111);
  OperatorTuple t = random_tuple(rng, 2, 3, 4);
  CHECK_THROWS_AS(best_row_column_split(GaugeSpec::lp(1), t), AdmissibilityError);
}

TEST_CASE("verification: 2-concave direction holds for lp:1 and lp:2") {
  for (double p : {1.0, 2.0}) {
    const VerificationReport rep =
        verify_khintchine(GaugeSpec::lp(p), KhintchineCase::concave2, 0.0, 6, 2026);
    CHECK(rep.all_pass);
    CHECK(rep.instances.size() == 6);
    for (const auto& inst : rep.instances) {
      CHECK(inst.pass);
      CHECK(inst.lhs <= inst.mid + 1e-7 * std::max(1.0, inst.lhs));
      CHECK(inst.ratio >= 1.0 - 1e-9);
      CHECK(std::isfinite(inst.ratio));
    }
    CHECK(rep.max_ratio >= 1.0 - 1e-9);
  }
}

TEST_CASE("verification: 2-convex direction holds for lp:4 and lp:6") {
  for (double p : {4.0, 6.0}) {
    const VerificationReport rep =
        verify_khintchine(GaugeSpec::lp(p), KhintchineCase::convex2, p, 6, 2027);
    CHECK(rep.all_pass);
    for (const auto& inst : rep.instances) {
      CHECK(inst.mid <= inst.rhs + 1e-7 * std::max(1.0, inst.rhs));
      CHECK(std::isfinite(inst.ratio));
    }
  }
}

TEST_CASE("verification: flag prechecks") {
  CHECK_THROWS_AS(verify_khintchine(GaugeSpec::lp(4), KhintchineCase::concave2, 0.0, 2, 1),
                  AdmissibilityError);
  CHECK_THROWS_AS(verify_khintchine(GaugeSpec::lp(1), KhintchineCase::convex2, 2.0, 2, 1),
                  AdmissibilityError);
  CHECK_THROWS_AS(verify_khintchine(GaugeSpec::lp(kInf), KhintchineCase::convex2, kInf, 2, 1),
                  AdmissibilityError);
  CHECK_THROWS_AS(verify_khintchine(GaugeSpec::lp(2), KhintchineCase::concave2, 0.0, 0, 1),
                  AdmissibilityError);
}

TEST_CASE("verification report: deterministic and schema complete") {
  const VerificationReport a =
      verify_khintchine(GaugeSpec::lp(1), KhintchineCase::concave2, 0.0, 3, 77);
  const VerificationReport b =
      verify_khintchine(GaugeSpec::lp(1), KhintchineCase::concave2, 0.0, 3, 77);
  const auto ja = report_to_json(a, false);
  const auto jb = report_to_json(b, false);
  CHECK(ja.dump() == jb.dump());
  CHECK(ja.contains("suite"));
  CHECK(ja.contains("spec"));
  CHECK(ja.contains("master_seed"));
  CHECK(ja.contains("instances"));
  CHECK(ja.contains("max_ratio"));
  CHECK(ja.contains("all_pass"));
  CHECK_FALSE(ja.contains("wall_ms"));
  CHECK(report_to_json(a, true).contains("wall_ms"));
  CHECK(ja["spec"] == "lp:1");
  for (const auto& ji : ja["instances"]) {
    CHECK(ji.contains("seed"));
    CHECK(ji.contains("lhs"));
    CHECK(ji.contains("mid"));
    CHECK(ji.contains("rhs"));
  }
  // a different master seed draws different instances
  const VerificationReport c =
      verify_khintchine(GaugeSpec::lp(1), KhintchineCase::concave2, 0.0, 3, 78);
  CHECK(report_to_json(c, false).dump() != ja.dump());
}
