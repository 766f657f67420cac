#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "symmkit/gauge.hpp"
#include "symmkit/types.hpp"

namespace symmkit {

enum class RademacherMode { exact, montecarlo };

struct RademacherResult {
  RademacherMode mode = RademacherMode::exact;
  double value = 0.0;        // (E ||sum_k eps_k x_k||^2)^{1/2}
  std::int64_t samples = 0;  // sign vectors covered (exact counts all 2^n)
  double stderr_value = 0.0; // montecarlo only
};

// Exact mode enumerates the 2^n sign vectors, halving work through the
// eps <-> -eps symmetry; it requires tuple length n <= 20.
RademacherResult rademacher_second_moment(const GaugeSpec& spec, const OperatorTuple& t,
                                          RademacherMode mode = RademacherMode::exact,
                                          std::int64_t samples = 4096,
                                          std::uint64_t seed = 1,
                                          const GaugeOpts& opts = {});

struct SplitOpts {
  int iters = 600;      // subgradient iterations per restart
  int restarts = 8;     // a=0, a=x, a=x/2 plus random
  double tol = 1e-9;
  std::uint64_t seed = 0x4b736c74ull;
  GaugeOpts gauge;
};

struct SplitResult {
  OperatorTuple a, b;      // a_k + b_k = x_k
  double value = 0.0;      // column norm of (a) plus row norm of (b); upper bound
  double lower_bound = 0.0;  // best Hoelder certificate found (<= true infimum)
  bool converged = false;
  int iterations = 0;
};

// Minimizes ||vstack(a)|| + ||hstack(x-a)|| over the free tuple a (convex,
// nonsmooth) with Polyak-style subgradient steps and seeded restarts.  The
// result never falls below max_k ||x_k||, which lower-bounds every split.
SplitResult best_row_column_split(const GaugeSpec& spec, const OperatorTuple& t,
                                  const SplitOpts& opts = {});

// The two flag regimes of the square-function comparison.
enum class KhintchineCase { concave2, convex2 };

struct KhVerifyOpts {
  int max_tuple = 4;  // tuple lengths drawn from [2, max_tuple]
  int max_dim = 4;    // matrix sizes drawn from [2, max_dim]
  double tol = 1e-7;
  RademacherMode mode = RademacherMode::exact;
  std::int64_t mc_samples = 4096;
  SplitOpts split;
  GaugeOpts gauge;
};

struct KhInstance {
  std::uint64_t seed = 0;
  int tuple_len = 0;
  int dim = 0;
  // lhs and rhs are the Rademacher bookends of the comparison chain; mid is
  // the deterministic member (split infimum for the 2-concave case, the
  // column/row max for the 2-convex case)
  double lhs = 0.0, mid = 0.0, rhs = 0.0;
  double ratio = 0.0;  // empirical constant for the non-exact direction
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::string spec;
  KhintchineCase kase = KhintchineCase::concave2;
  double q = 0.0;  // concavity exponent for the 2-convex case
  std::uint64_t master_seed = 0;
  std::vector<KhInstance> instances;
  double max_ratio = 0.0;
  bool all_pass = false;
  double wall_ms = 0.0;
};

// Draws random complex gaussian tuples and checks the constant-1 direction of
// the comparison per instance:
//   concave2 (needs a 2-concavity flag):  rademacher <= split value;
//   convex2  (needs 2-convexity and q-concavity flags, q finite):
//             max(column, row) <= rademacher.
// The opposite direction carries an unknown universal constant, so only its
// empirical ratio is recorded, never asserted.
VerificationReport verify_khintchine(const GaugeSpec& spec, KhintchineCase kase,
                                     double q, int instances, std::uint64_t seed,
                                     const KhVerifyOpts& opts = {});

nlohmann::ordered_json report_to_json(const VerificationReport& rep, bool include_timing);

}  // namespace symmkit
