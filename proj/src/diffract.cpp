#include "infladiff/diffract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "infladiff/error.hpp"
#include "infladiff/parallel.hpp"

namespace infladiff {

namespace {

class WeightParser {
 public:
  WeightParser(std::string_view text, double lambda) : s_(text), lambda_(lambda) {}

  Complex parse() {
    Complex v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail("weight is not finite");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::InvalidArgument, "cannot parse weight '" + std::string(s_) + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_atom() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'l' || c == 'i';
  }

  Complex expr() {
    Complex v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  Complex term() {
    Complex v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const Complex d = unary();
        if (d == Complex{}) fail("division by zero");
        v /= d;
      } else if (starts_atom()) {
        v *= atom();  // implicit product, as in 2lambda or 3i
      } else {
        return v;
      }
    }
  }

  Complex unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }

  Complex atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      Complex v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_.substr(pos_, 6) == "lambda") {
      pos_ += 6;
      return {lambda_, 0.0};
    }
    if (s_[pos_] == 'i') {
      ++pos_;
      return {0.0, 1.0};
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    if (start == pos_) fail("expected a number, 'lambda' or 'i'");
    const std::string lit(s_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(lit, &used);
    } catch (const std::exception&) {
      fail("bad number '" + lit + "'");
    }
    if (used != lit.size()) fail("bad number '" + lit + "'");
    return {v, 0.0};
  }

  std::string_view s_;
  double lambda_;
  std::size_t pos_ = 0;
};

// exp(-2 pi i t) with t reduced mod 1 in extended precision
Complex unit_phase(long double t) {
  t -= std::floor(t);
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(t);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

WeightScheme parse_weights(std::string_view text, const Ring& ring) {
  int depth = 0;
  std::size_t comma = std::string_view::npos;
  for (std::size_t p = 0; p < text.size(); ++p) {
    if (text[p] == '(') ++depth;
    if (text[p] == ')') --depth;
    if (text[p] == ',' && depth == 0) {
      if (comma != std::string_view::npos)
        throw Error(ErrorCode::InvalidArgument, "weights need exactly two comma-separated values");
      comma = p;
    }
  }
  if (comma == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "weights need exactly two comma-separated values");
  const double lam = ring.lambda_plus();
  return {WeightParser(text.substr(0, comma), lam).parse(), WeightParser(text.substr(comma + 1), lam).parse()};
}

WeightedComb make_comb(const TilingPatch& patch, const WeightScheme& weights) {
  WeightedComb comb;
  comb.positions = patch.values;
  comb.weights.reserve(patch.size());
  for (const TilePoint& p : patch.points) comb.weights.push_back(weights[p.type]);
  comb.radius = patch.radius;
  return comb;
}

namespace {

std::pair<std::size_t, std::size_t> comb_window(const WeightedComb& comb, double R) {
  if (R <= 0.0) R = comb.radius;
  if (R > comb.radius * (1.0 + 1e-12))
    throw Error(ErrorCode::WindowTooSmall, "window R exceeds the patch radius");
  const auto lo = std::lower_bound(comb.positions.begin(), comb.positions.end(), -static_cast<long double>(R));
  const auto hi = std::lower_bound(comb.positions.begin(), comb.positions.end(), static_cast<long double>(R));
  return {static_cast<std::size_t>(lo - comb.positions.begin()), static_cast<std::size_t>(hi - comb.positions.begin())};
}

}  // namespace

Complex exponential_sum(const WeightedComb& comb, double k, double R) {
  const auto [lo, hi] = comb_window(comb, R);
  const long double kk = k;
  Complex sum{};
  for (std::size_t p = lo; p < hi; ++p) sum += comb.weights[p] * unit_phase(kk * comb.positions[p]);
  return sum;
}

Complex exponential_sum(const TilingPatch& patch, const WeightScheme& weights, double k, double R) {
  if (patch.size() == 0) throw Error(ErrorCode::EmptyPatch, "empty patch");
  return exponential_sum(make_comb(patch, weights), k, R);
}

double density_closed_form(std::int64_t m) {
  const Ring ring(m);
  const double lam = ring.lambda_plus();
  return lam / (2.0 * lam - 1.0);
}

std::pair<double, double> bragg_coefficients(std::int64_t m) {
  // dens * (f0, f1) = (1, lambda - 1) / (2 lambda - 1)
  const double lam = Ring(m).lambda_plus();
  return {1.0 / (2.0 * lam - 1.0), (lam - 1.0) / (2.0 * lam - 1.0)};
}

double bragg_intensity(std::int64_t m, const WeightScheme& weights) {
  const double lam = Ring(m).lambda_plus();
  return std::norm(weights.u0 + (lam - 1.0) * weights.u1) / static_cast<double>(4 * m + 1);
}

double eta_zero(std::int64_t m, const WeightScheme& weights) {
  const double lam = Ring(m).lambda_plus();
  const double f0 = 1.0 / lam;
  const double f1 = (lam - 1.0) / lam;
  return density_closed_form(m) * (std::norm(weights.u0) * f0 + std::norm(weights.u1) * f1);
}

Complex eta_general(const PairCorrTable& table, const WeightScheme& weights, const QuadInt& z) {
  const Ring& ring = table.ring();
  if (std::abs(ring.value(z)) > table.zmax())
    throw Error(ErrorCode::MissingEntry, "displacement " + z.str() + " outside the table window");
  const QuadInt nz = ring.normalize(z);
  Complex sum{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sum += std::conj(weights[i]) * table.get(i, j, nz) * weights[j];
  return density_closed_form(table.m()) * sum;
}

DiffractionGrid diffraction_grid(const TilingPatch& patch, const WeightScheme& weights, double kmax,
                                 double dk, double R) {
  if (!(dk > 0.0) || !(kmax >= 0.0) || !std::isfinite(kmax))
    throw Error(ErrorCode::InvalidArgument, "grid needs dk > 0 and finite kmax >= 0");
  if (patch.size() == 0) throw Error(ErrorCode::EmptyPatch, "empty patch");
  if (R <= 0.0) R = patch.radius;
  const WeightedComb comb = make_comb(patch, weights);
  const auto [lo, hi] = comb_window(comb, R);

  const auto count = static_cast<std::size_t>(std::floor(kmax / dk + 1e-9)) + 1;
  DiffractionGrid grid;
  grid.R = R;
  grid.dk = dk;
  grid.kmax = kmax;
  grid.point_count = hi - lo;
  grid.weights = weights;
  grid.k_values.resize(count);
  grid.intensities.resize(count);
  for (std::size_t n = 0; n < count; ++n) grid.k_values[n] = static_cast<double>(n) * dk;

  // Phasors per type, advanced from k to k + dk by a per-point step factor
  // and re-seeded in extended precision at the start of every block.
  std::array<std::vector<long double>, 2> pos;
  for (std::size_t p = lo; p < hi; ++p) pos[static_cast<std::size_t>(patch.points[p].type)].push_back(comb.positions[p]);

  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  const double norm = 1.0 / (2.0 * R);
  parallel_chunks(blocks, blocks, [&](std::size_t, std::size_t b_begin, std::size_t b_end) {
    std::vector<double> cr, ci, sr, si;
    for (std::size_t b = b_begin; b < b_end; ++b) {
      const std::size_t n0 = b * kBlock;
      const std::size_t n1 = std::min(count, n0 + kBlock);
      std::array<std::vector<Complex>, 2> sums{std::vector<Complex>(n1 - n0), std::vector<Complex>(n1 - n0)};
      for (std::size_t t = 0; t < 2; ++t) {
        const auto& xs = pos[t];
        const std::size_t np = xs.size();
        cr.resize(np);
        ci.resize(np);
        sr.resize(np);
        si.resize(np);
        const long double k0 = static_cast<long double>(n0) * static_cast<long double>(dk);
        for (std::size_t p = 0; p < np; ++p) {
          const Complex c = unit_phase(k0 * xs[p]);
          const Complex s = unit_phase(static_cast<long double>(dk) * xs[p]);
          cr[p] = c.real();
          ci[p] = c.imag();
          sr[p] = s.real();
          si[p] = s.imag();
        }
        for (std::size_t n = n0; n < n1; ++n) {
          // four fixed interleaved partial sums, combined in a fixed order
          double ar[4] = {0, 0, 0, 0}, ai[4] = {0, 0, 0, 0};
          std::size_t p = 0;
          for (; p + 4 <= np; p += 4) {
            for (std::size_t q = 0; q < 4; ++q) {
              ar[q] += cr[p + q];
              ai[q] += ci[p + q];
            }
          }
          for (; p < np; ++p) {
            ar[0] += cr[p];
            ai[0] += ci[p];
          }
          sums[t][n - n0] = Complex{(ar[0] + ar[1]) + (ar[2] + ar[3]), (ai[0] + ai[1]) + (ai[2] + ai[3])};
          for (std::size_t q = 0; q < np; ++q) {
            const double r = cr[q] * sr[q] - ci[q] * si[q];
            const double i = cr[q] * si[q] + ci[q] * sr[q];
            cr[q] = r;
            ci[q] = i;
          }
        }
      }
      for (std::size_t n = n0; n < n1; ++n) {
        const Complex s = weights.u0 * sums[0][n - n0] + weights.u1 * sums[1][n - n0];
        grid.intensities[n] = std::norm(s) * norm;
      }
    }
  });
  return grid;
}

double DistributionFunction::at(double x) const {
  if (x <= x_values.front()) return F_values.front();
  if (x >= x_values.back()) return F_values.back();
  const auto it = std::upper_bound(x_values.begin(), x_values.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - x_values.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - x_values[lo]) / (x_values[hi] - x_values[lo]);
  return F_values[lo] + t * (F_values[hi] - F_values[lo]);
}

DistributionFunction distribution_function(const DiffractionGrid& grid, double eta0) {
  if (grid.k_values.size() < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  DistributionFunction df;
  df.eta0 = eta0;
  df.x_values = grid.k_values;
  df.F_values.resize(grid.k_values.size());
  df.F_values[0] = 0.0;
  df.min_step = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < grid.k_values.size(); ++n) {
    const double h = grid.k_values[n] - grid.k_values[n - 1];
    const double step = 0.5 * h * (grid.intensities[n - 1] + grid.intensities[n]);
    if (step < -1e-12) throw Error(ErrorCode::InvalidArgument, "distribution function decreases");
    df.min_step = std::min(df.min_step, step);
    df.F_values[n] = df.F_values[n - 1] + step;
  }
  return df;
}

ScalingProbe scaling_probe(const WeightedComb& comb, double k_star, const std::vector<double>& R_list,
                           bool refine) {
  if (R_list.size() < 3) throw Error(ErrorCode::InvalidArgument, "scaling probe needs at least three radii");
  for (std::size_t n = 1; n < R_list.size(); ++n)
    if (!(R_list[n] > R_list[n - 1])) throw Error(ErrorCode::InvalidArgument, "radii must increase");

  ScalingProbe probe;
  for (double R : R_list) {
    double best_k = k_star;
    double best = std::abs(exponential_sum(comb, k_star, R));
    if (refine) {
      constexpr int kSamples = 32;
      const double half = 0.5 / R;
      for (int s = -kSamples; s <= kSamples; ++s) {
        const double k = k_star + half * static_cast<double>(s) / kSamples;
        const double a = std::abs(exponential_sum(comb, k, R));
        if (a > best) {
          best = a;
          best_k = k;
        }
      }
    }
    probe.R_values.push_back(R);
    probe.k_values.push_back(best_k);
    probe.amplitudes.push_back(best);
  }

  const double n = static_cast<double>(R_list.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t p = 0; p < R_list.size(); ++p) {
    const double x = std::log(probe.R_values[p]);
    const double y = std::log(std::max(probe.amplitudes[p], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  probe.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  probe.classification = probe.beta >= 0.9 ? "Bragg-like" : (probe.beta <= 0.6 ? "AC-like" : "SC-like");
  return probe;
}

}  // namespace infladiff
