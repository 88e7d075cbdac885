#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "infladiff/diffract.hpp"
#include "infladiff/error.hpp"

using namespace infladiff;

namespace {

// direct O(N) oracle with long double phases
Complex direct_sum(const TilingPatch& patch, const WeightScheme& w, double k, double R) {
  long double re = 0, im = 0;
  for (std::size_t p = 0; p < patch.size(); ++p) {
    const long double x = patch.values[p];
    if (x < -R || x >= R) continue;
    const long double ph = -2.0L * std::numbers::pi_v<long double> * k * x;
    const Complex u = w[patch.points[p].type];
    const long double c = std::cos(ph), s = std::sin(ph);
    re += u.real() * c - u.imag() * s;
    im += u.real() * s + u.imag() * c;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

TEST_CASE("weight expressions") {
  const Ring ring(3);
  const double lam = ring.lambda_plus();
  WeightScheme w = parse_weights("1-lambda,1", ring);
  CHECK(w.u0 == Complex(1 - lam, 0));
  CHECK(w.u1 == Complex(1, 0));
  w = parse_weights("0.5+2i, (lambda-1)/2", ring);
  CHECK(w.u0 == Complex(0.5, 2));
  CHECK(w.u1.real() == doctest::Approx((lam - 1) / 2));
  w = parse_weights("2lambda, -i", ring);
  CHECK(w.u0.real() == doctest::Approx(2 * lam));
  CHECK(w.u1 == Complex(0, -1));
  w = parse_weights("1e-3, 3*(1+i)", ring);
  CHECK(w.u0.real() == doctest::Approx(1e-3));
  CHECK(w.u1 == Complex(3, 3));
  for (const char* bad : {"1", "1,", "1,2,3", "(1,2", "x,1", "1/0,1"}) CHECK_THROWS_AS(parse_weights(bad, ring), Error);
}

TEST_CASE("closed forms at k = 0") {
  const Ring ring(3);
  const double lam = ring.lambda_plus();
  CHECK(density_closed_form(3) == doctest::Approx((lam + 6) / 13).epsilon(1e-14));
  CHECK(density_closed_form(3) == doctest::Approx(lam / (2 * lam - 1)).epsilon(1e-14));
  const auto [c0, c1] = bragg_coefficients(3);
  CHECK(c0 == doctest::Approx((2 * lam - 1) / 13).epsilon(1e-14));
  CHECK(c1 == doctest::Approx((7 - lam) / 13).epsilon(1e-14));

  const WeightScheme ones{{1, 0}, {1, 0}};
  CHECK(bragg_intensity(3, ones) == doctest::Approx((lam + 3) / 13).epsilon(1e-14));
  CHECK(bragg_intensity(3, ones) == doctest::Approx(0.407906).epsilon(1e-6));
  const WeightScheme extinct{{1 - lam, 0}, {1, 0}};
  CHECK(std::abs(bragg_intensity(3, extinct)) < 1e-15);
  CHECK(eta_zero(3, extinct) == doctest::Approx((6 * lam - 3) / 13).epsilon(1e-14));
  CHECK(eta_zero(3, extinct) == doctest::Approx(0.8320503).epsilon(1e-7));
  CHECK(eta_zero(3, ones) == doctest::Approx(density_closed_form(3)).epsilon(1e-14));
}

TEST_CASE("Bragg intensity identity on random complex weights") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> g;
  for (std::int64_t m : {1, 3, 5}) {
    const double lam = Ring(m).lambda_plus();
    const auto [c0, c1] = bragg_coefficients(m);
    for (int n = 0; n < 100; ++n) {
      const WeightScheme w{{g(gen), g(gen)}, {g(gen), g(gen)}};
      // |dens * (f0 u0 + f1 u1)|^2 from density and frequencies
      const double dens = lam / (2 * lam - 1);
      const double f0 = 1 / lam, f1 = (lam - 1) / lam;
      const double oracle = dens * dens * std::norm(f0 * w.u0 + f1 * w.u1);
      CHECK(std::abs(bragg_intensity(m, w) - oracle) < 1e-10 * (1 + oracle));
      CHECK(std::abs(std::norm(c0 * w.u0 + c1 * w.u1) - oracle) < 1e-10 * (1 + oracle));
    }
  }
}

TEST_CASE("exponential sums agree with the Bragg amplitude at k = 0") {
  const TilingPatch patch = generate_patch(3, 7);
  const double lam = patch.ring.lambda_plus();
  const WeightScheme extinct{{1 - lam, 0}, {1, 0}};
  const WeightScheme ones{{1, 0}, {1, 0}};
  const double R = patch.radius;
  CHECK(std::abs(exponential_sum(patch, extinct, 0.0)) / (2 * R) <= 1e-3);
  const Complex s = exponential_sum(patch, ones, 0.0);
  CHECK(std::norm(s) / (4 * R * R) == doctest::Approx(bragg_intensity(3, ones)).epsilon(1e-3));
  CHECK_THROWS_AS(exponential_sum(patch, ones, 0.0, 2 * R), Error);
}

TEST_CASE("eta(0) from a solved table matches the closed form") {
  const PairCorrTable solved = solve_renorm(3, 10.0);
  const double lam = solved.ring().lambda_plus();
  const WeightScheme extinct{{1 - lam, 0}, {1, 0}};
  const Complex eta = eta_general(solved, extinct, QuadInt{});
  CHECK(eta.real() == doctest::Approx(eta_zero(3, extinct)).epsilon(1e-10));
  CHECK(std::abs(eta.imag()) < 1e-15);
  // Hermitian: eta(-z) = conj(eta(z))
  const WeightScheme cw{{0.3, 0.7}, {-1.1, 0.2}};
  for (const QuadInt z : {QuadInt(0, 1), QuadInt(1, 1), QuadInt(3, 1), QuadInt(-2, 2)}) {
    const Complex a = eta_general(solved, cw, z);
    const Complex b = eta_general(solved, cw, -z);
    CHECK(std::abs(a - std::conj(b)) < 1e-14);
  }
  try {
    (void)eta_general(solved, extinct, QuadInt(20, 0));
    FAIL("expected MissingEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingEntry);
  }
}

TEST_CASE("diffraction grid against the direct sum") {
  const TilingPatch patch = generate_patch(3, 4);
  const double lam = patch.ring.lambda_plus();
  const WeightScheme w{{1 - lam, 0}, {1, 0}};
  const double R = std::floor(patch.radius * 0.9);
  const DiffractionGrid grid = diffraction_grid(patch, w, 3.0, 1.0 / (4 * R), R);
  REQUIRE(grid.k_values.size() == grid.intensities.size());
  CHECK(grid.k_values.front() == 0.0);
  CHECK(grid.k_values.back() >= 3.0 - grid.dk);
  double worst = 0;
  for (std::size_t n = 0; n < grid.k_values.size(); n += 37) {
    const double direct = std::norm(direct_sum(patch, w, grid.k_values[n], R)) / (2 * R);
    worst = std::max(worst, std::abs(direct - grid.intensities[n]) / (1 + direct));
  }
  CHECK(worst < 1e-9);
  // I(-k) = I(k): real weights give S(-k) = conj S(k)
  for (double k : {0.37, 1.25, 2.9}) {
    CHECK(std::norm(direct_sum(patch, w, -k, R)) == doctest::Approx(std::norm(direct_sum(patch, w, k, R))).epsilon(1e-9));
  }
}

TEST_CASE("grid is independent of the worker count") {
  const TilingPatch patch = generate_patch(3, 5);
  const WeightScheme w = parse_weights("1-lambda,1", patch.ring);
  const double R = std::floor(patch.radius * 0.9);
  ::setenv("INFLADIFF_THREADS", "1", 1);
  const DiffractionGrid a = diffraction_grid(patch, w, 2.0, 1.0 / (4 * R), R);
  ::setenv("INFLADIFF_THREADS", "3", 1);
  const DiffractionGrid b = diffraction_grid(patch, w, 2.0, 1.0 / (4 * R), R);
  ::unsetenv("INFLADIFF_THREADS");
  CHECK(a.intensities == b.intensities);
}

TEST_CASE("distribution function") {
  const TilingPatch patch = generate_patch(3, 6);
  const WeightScheme w = parse_weights("1-lambda,1", patch.ring);
  const double R = 4000.0;
  REQUIRE(patch.radius >= R);
  const DiffractionGrid grid = diffraction_grid(patch, w, 20.0, 1.0 / (4 * R), R);
  const DistributionFunction df = distribution_function(grid, eta_zero(3, w));
  CHECK(df.F_values.front() == 0.0);
  CHECK(df.min_step >= -1e-12);
  std::size_t decreasing = 0;
  for (std::size_t n = 1; n < df.F_values.size(); ++n) decreasing += df.F_values[n] < df.F_values[n - 1];
  CHECK(decreasing == 0);
  CHECK(std::abs(df.at(20.0) / 20.0 - df.eta0) <= 0.05 * df.eta0);
  CHECK(df.at(0.0) == 0.0);
}

TEST_CASE("scaling probe") {
  const TilingPatch patch = generate_patch(3, 7);
  const double lam = patch.ring.lambda_plus();
  const std::vector<double> radii = {1000, 4000, 16000, 64000, 256000};

  const ScalingProbe bragg = scaling_probe(make_comb(patch, {{1, 0}, {1, 0}}), 0.0, radii, false);
  CHECK(std::abs(bragg.beta - 1.0) <= 0.02);
  CHECK(bragg.classification == "Bragg-like");

  const ScalingProbe ext = scaling_probe(make_comb(patch, {{1 - lam, 0}, {1, 0}}), 0.0, radii, false);
  CHECK(ext.beta < 0.9);

  // Poisson control: |S_R| ~ sqrt(R)
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> uni(-256000.0, 256000.0);
  WeightedComb poisson;
  poisson.radius = 256000.0;
  for (int n = 0; n < 512000; ++n) poisson.positions.push_back(uni(gen));
  std::sort(poisson.positions.begin(), poisson.positions.end());
  poisson.weights.assign(poisson.positions.size(), Complex(1, 0));
  double beta_sum = 0;
  const int trials = 24;
  for (int t = 0; t < trials; ++t) beta_sum += scaling_probe(poisson, 0.3 + 0.173 * t, radii, false).beta;
  CHECK(beta_sum / trials == doctest::Approx(0.5).epsilon(0.2));

  CHECK_THROWS_AS(scaling_probe(poisson, 1.0, {1000, 2000}, false), Error);
  CHECK_THROWS_AS(scaling_probe(poisson, 1.0, {1000, 3000, 2000}, false), Error);
}
