#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "infladiff/error.hpp"
#include "infladiff/paircorr.hpp"

using namespace infladiff;

namespace {

using TermList = std::vector<std::tuple<int, int, std::int64_t, std::int64_t, std::int64_t>>;

// (k, l, shift.a, shift.b, multiplicity), sorted
TermList flatten(const std::vector<RenormTerm>& terms) {
  TermList out;
  for (const auto& t : terms)
    out.emplace_back(t.k, t.l, static_cast<std::int64_t>(t.shift.a), static_cast<std::int64_t>(t.shift.b),
                     t.multiplicity);
  std::sort(out.begin(), out.end());
  return out;
}

TermList sorted(TermList t) {
  std::sort(t.begin(), t.end());
  return t;
}

// The four m = 3 equations written out term by term; shift s means
// nu_kl((z + s)/lambda), s = a + b*lambda.
TermList transcribed(int i, int j) {
  if (i == 0 && j == 0) return sorted({{0, 0, 0, 0, 1}, {0, 1, 0, 0, 1}, {1, 0, 0, 0, 1}, {1, 1, 0, 0, 1}});
  if (i == 0 && j == 1)
    return sorted({{0, 0, 0, -1, 1}, {0, 0, -1, -1, 1}, {0, 0, -2, -1, 1},
                   {1, 0, 0, -1, 1}, {1, 0, -1, -1, 1}, {1, 0, -2, -1, 1}});
  if (i == 1 && j == 0)
    return sorted({{0, 0, 0, 1, 1}, {0, 0, 1, 1, 1}, {0, 0, 2, 1, 1},
                   {0, 1, 0, 1, 1}, {0, 1, 1, 1, 1}, {0, 1, 2, 1, 1}});
  return sorted({{0, 0, 0, 0, 3}, {0, 0, 1, 0, 2}, {0, 0, -1, 0, 2}, {0, 0, 2, 0, 1}, {0, 0, -2, 0, 1}});
}

}  // namespace

TEST_CASE("derived renormalisation system for m = 3 matches the four equations") {
  const RenormSystem sys = derive_renorm_system(3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(flatten(sys.terms[i][j]) == transcribed(i, j));
  CHECK(sys.max_shift == QuadInt(2, 1));
}

TEST_CASE("derived systems for other m") {
  // Fibonacci: T[1][0] = {lambda}, the nu_11 line has one term
  const RenormSystem s1 = derive_renorm_system(1);
  REQUIRE(s1.terms[1][1].size() == 1);
  CHECK(s1.terms[1][1][0] == RenormTerm{0, 0, QuadInt(0, 0), 1});
  for (std::int64_t m : {1, 2, 3, 4, 7}) {
    const RenormSystem s = derive_renorm_system(m);
    CHECK(s.total_multiplicity() == (m + 2) * (m + 2));
    // nu_11 line: multiplicity m - |d| at shift d = -(m-1)..(m-1)
    if (!Ring(m).integral()) {
      for (const auto& t : s.terms[1][1]) CHECK(t.multiplicity == m - std::abs(static_cast<std::int64_t>(t.shift.a)));
    }
  }
}

TEST_CASE("core radius identity (lambda + m - 1)/(lambda - 1) = lambda + 1") {
  for (std::int64_t m : {1, 3, 5, 11}) {
    const Ring ring(m);
    CHECK(ring.mul(ring.make(1, 1), ring.make(-1, 1)) == ring.make(m - 1, 1));
  }
}

TEST_CASE("empirical table against a brute-force pair count") {
  const TilingPatch patch = generate_patch(3, 3);
  const double r = 50.0, zmax = 12.0;
  const PairCorrTable table = empirical_pair_corr(patch, r, zmax);
  const Ring& ring = patch.ring;

  std::map<std::tuple<int, int, std::int64_t, std::int64_t>, int> brute;
  std::size_t card = 0;
  for (std::size_t p = 0; p < patch.size(); ++p) {
    const double x = ring.value(patch.points[p].position);
    if (x < -r || x >= r) continue;
    ++card;
    for (std::size_t q = 0; q < patch.size(); ++q) {
      const double y = ring.value(patch.points[q].position);
      if (y < -r || y >= r || std::abs(y - x) > zmax) continue;
      const QuadInt z = patch.points[q].position - patch.points[p].position;
      ++brute[{patch.points[p].type, patch.points[q].type, static_cast<std::int64_t>(z.a),
               static_cast<std::int64_t>(z.b)}];
    }
  }
  CHECK(table.window_count == card);
  CHECK(table.size() == brute.size());
  for (const auto& [key, count] : brute) {
    const auto [i, j, a, b] = key;
    CHECK(table.get(i, j, QuadInt(a, b)) == static_cast<double>(count) / static_cast<double>(card));
  }
  // type identities at z = 0
  CHECK(table.get(0, 1, QuadInt{}) == 0.0);
  CHECK(table.get(1, 0, QuadInt{}) == 0.0);
  CHECK(table.get(0, 0, QuadInt{}) + table.get(1, 1, QuadInt{}) == doctest::Approx(1.0).epsilon(1e-15));
  // z = 2 + lambda occurs between type-0 points (e.g. -lambda and 2)
  CHECK(table.contains(0, 0, QuadInt(2, 1)) == (brute.count({0, 0, 2, 1}) > 0));
}

TEST_CASE("empirical symmetry and frequencies") {
  const TilingPatch patch = generate_patch(3, 6);
  const double lam = patch.ring.lambda_plus();
  const PairCorrTable t = empirical_pair_corr(patch, patch.radius - 20.0, 20.0);
  for (const auto& [key, v] : t.entries())
    CHECK(std::abs(v - t.get(key.j, key.i, -key.z)) <= 2.0 / static_cast<double>(t.window_count));
  CHECK(t.get(0, 0, QuadInt{}) == doctest::Approx(1 / lam).epsilon(2e-3));
  CHECK(t.get(1, 1, QuadInt{}) == doctest::Approx((lam - 1) / lam).epsilon(2e-3));
}

TEST_CASE("empirical counting does not depend on the worker count") {
  const TilingPatch patch = generate_patch(3, 6);
  ::setenv("INFLADIFF_THREADS", "1", 1);
  const PairCorrTable a = empirical_pair_corr(patch, 2000.0, 15.0);
  ::setenv("INFLADIFF_THREADS", "5", 1);
  const PairCorrTable b = empirical_pair_corr(patch, 2000.0, 15.0);
  ::unsetenv("INFLADIFF_THREADS");
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (const auto& [key, v] : a.entries()) same = same && b.get(key.i, key.j, key.z) == v;
  CHECK(same);
}

TEST_CASE("window errors") {
  const TilingPatch patch = generate_patch(3, 2);
  CHECK_THROWS_AS(empirical_pair_corr(patch, patch.radius, 5.0), Error);
  try {
    (void)empirical_pair_corr(patch, patch.radius - 1.0, 5.0);
    FAIL("expected WindowTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooSmall);
  }
  const PairCorrTable small = empirical_pair_corr(patch, 5.0, 1.0);
  try {
    (void)check_renorm_residuals(small, derive_renorm_system(3));
    FAIL("expected InsufficientWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientWindow);
  }
}

TEST_CASE("renormalisation solve for m = 3") {
  const PairCorrTable solved = solve_renorm(3, 30.0);
  const double lam = solved.ring().lambda_plus();
  REQUIRE(solved.solve_info.has_value());
  const SolveInfo& info = *solved.solve_info;
  CHECK(info.kernel_dimension == 1);
  CHECK(info.elimination_residual < 1e-12);
  CHECK(info.power_iteration_deviation < 1e-9);
  CHECK(solved.get(0, 0, QuadInt{}) == doctest::Approx(1 / lam).epsilon(1e-10));
  CHECK(std::abs(solved.get(0, 0, QuadInt{}) - 1 / lam) < 1e-10);
  CHECK(std::abs(solved.get(1, 1, QuadInt{}) - (lam - 1) / lam) < 1e-10);
  CHECK(solved.get(0, 1, QuadInt{}) == 0.0);

  // bitwise symmetry and positivity on the support
  for (const auto& [key, v] : solved.entries()) {
    CHECK(v == solved.get(key.j, key.i, -key.z));
    CHECK(v > 1e-12);
  }
  CHECK(info.min_support_value > 1e-12);

  // exact solution satisfies the system
  const ResidualStats res = check_renorm_residuals(solved, derive_renorm_system(3));
  CHECK(res.max < 1e-12);
  CHECK(res.tested > 0);

  // z = lambda - 1 is no difference of points: both sides vanish
  const QuadInt outside(-1, 1);
  CHECK(solved.get(0, 0, outside) == 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(renorm_rhs(solved, derive_renorm_system(3), i, j, outside) == 0.0);

  // empirical oracle
  const TilingPatch patch = generate_patch(3, 7);
  const PairCorrTable emp = empirical_pair_corr(patch, patch.radius - 30.0, 30.0);
  CHECK(emp.window_count >= 100000);
  CHECK(max_abs_deviation(solved, emp, 30.0) <= 5e-3);
}

TEST_CASE("renormalisation solve for other members of the family") {
  for (std::int64_t m : {1, 2, 4, 5}) {
    CAPTURE(m);
    const PairCorrTable solved = solve_renorm(m, 15.0);
    const double lam = solved.ring().lambda_plus();
    CHECK(solved.solve_info->kernel_dimension == 1);
    CHECK(std::abs(solved.get(0, 0, QuadInt{}) - 1 / lam) < 1e-10);
    CHECK(check_renorm_residuals(solved, derive_renorm_system(m)).max < 1e-12);
    // discrepancy decays slowly when |lambda-| > 1, so compare two patch sizes
    double dev[2];
    for (int n = 0; n < 2; ++n) {
      const TilingPatch patch = generate_patch_with_radius(m, n == 0 ? 1e4 : 1e6);
      const PairCorrTable emp = empirical_pair_corr(patch, patch.radius - 15.0, 15.0);
      dev[n] = max_abs_deviation(solved, emp, 15.0);
    }
    CHECK(dev[1] < dev[0] / 3);
    CHECK(dev[1] <= 5e-3);
  }
}

TEST_CASE("empirical residuals shrink with the window") {
  const TilingPatch patch = generate_patch(3, 7);
  const RenormSystem sys = derive_renorm_system(3);
  double previous = 1.0;
  for (double r : {800.0, 8000.0, 80000.0}) {
    const PairCorrTable t = empirical_pair_corr(patch, r, 20.0);
    const ResidualStats s = check_renorm_residuals(t, sys);
    CHECK(s.max < previous);
    previous = s.max;
  }
}
