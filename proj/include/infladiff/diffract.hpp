#pragma once

// Weighted Dirac combs on tiling patches: exponential sums, the Bragg peak at
// the origin, autocorrelation coefficients and the distribution function of
// the diffraction measure.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "infladiff/inflation.hpp"
#include "infladiff/paircorr.hpp"

namespace infladiff {

using Complex = std::complex<double>;

struct WeightScheme {
  Complex u0{1.0, 0.0};
  Complex u1{1.0, 0.0};

  Complex operator[](int type) const { return type == 0 ? u0 : u1; }
};

/// Parses "u0,u1" where each part is an arithmetic expression over decimal
/// numbers, `lambda` (resolved for the ring) and the imaginary unit `i`,
/// e.g. "1-lambda,1" or "0.5+2i, (lambda-1)/2".
WeightScheme parse_weights(std::string_view text, const Ring& ring);

/// Positions with one complex weight each, sorted by position.
struct WeightedComb {
  std::vector<long double> positions;
  std::vector<Complex> weights;
  double radius = 0.0;
};

WeightedComb make_comb(const TilingPatch& patch, const WeightScheme& weights);

/// S_R(k) = sum over x in [-R, R) of u(x) exp(-2 pi i k x); R <= 0 uses the
/// comb radius.
Complex exponential_sum(const WeightedComb& comb, double k, double R = 0.0);
Complex exponential_sum(const TilingPatch& patch, const WeightScheme& weights, double k, double R = 0.0);

double density_closed_form(std::int64_t m);
/// Coefficients (c0, c1) of the Bragg amplitude c0*u0 + c1*u1 at k = 0.
std::pair<double, double> bragg_coefficients(std::int64_t m);
/// |u0 + (lambda-1) u1|^2 / (4m+1)
double bragg_intensity(std::int64_t m, const WeightScheme& weights);
/// dens * (|u0|^2 f0 + |u1|^2 f1)
double eta_zero(std::int64_t m, const WeightScheme& weights);
/// dens * sum_ij conj(u_i) nu_ij(z) u_j; MissingEntry if |z| exceeds the table window.
Complex eta_general(const PairCorrTable& table, const WeightScheme& weights, const QuadInt& z);

struct DiffractionGrid {
  double R = 0.0;
  double dk = 0.0;
  double kmax = 0.0;
  std::size_t point_count = 0;
  WeightScheme weights;
  std::vector<double> k_values;
  std::vector<double> intensities;  // |S_R(k)|^2 / (2R)
};

DiffractionGrid diffraction_grid(const TilingPatch& patch, const WeightScheme& weights, double kmax,
                                 double dk, double R);

struct DistributionFunction {
  std::vector<double> x_values;
  std::vector<double> F_values;
  double eta0 = 0.0;
  double min_step = 0.0;

  double at(double x) const;
  double average_slope() const { return F_values.back() / x_values.back(); }
};

/// Trapezoidal cumulative integral of the grid intensities from k = 0.
DistributionFunction distribution_function(const DiffractionGrid& grid, double eta0);

struct ScalingProbe {
  double beta = 0.0;
  std::string classification;  // "Bragg-like", "SC-like" or "AC-like"
  std::vector<double> R_values;
  std::vector<double> k_values;    // refined peak location per R
  std::vector<double> amplitudes;  // |S_R(k)|
};

/// Least-squares slope of log|S_R(k*)| against log R. With refine set, k* is
/// moved to the largest |S_R| within +-1/(2R) for each R.
ScalingProbe scaling_probe(const WeightedComb& comb, double k_star, const std::vector<double>& R_list,
                           bool refine);

}  // namespace infladiff
