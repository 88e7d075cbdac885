#include "infladiff/inflation.hpp"

#include <algorithm>
#include <cmath>

#include "infladiff/error.hpp"

namespace infladiff {

Word::Word(std::string_view letters) {
  reserve(letters.size());
  for (char c : letters) {
    if (c != '0' && c != '1')
      throw Error(ErrorCode::InvalidArgument, "word letters must be 0 or 1");
    push_back(c - '0');
  }
}

void Word::push_back(int letter) {
  if ((size_ & 63) == 0) bits_.push_back(0);
  if (letter) bits_.back() |= std::uint64_t{1} << (size_ & 63);
  ++size_;
}

void Word::append(const Word& other) {
  reserve(size_ + other.size_);
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
}

std::size_t Word::count(int letter) const {
  std::size_t ones = 0;
  for (auto w : bits_) ones += static_cast<std::size_t>(__builtin_popcountll(w));
  return letter ? ones : size_ - ones;
}

Word Word::reversed() const {
  Word out;
  out.reserve(size_);
  for (std::size_t i = size_; i-- > 0;) out.push_back((*this)[i]);
  return out;
}

bool Word::contains(std::string_view pattern) const {
  if (pattern.size() > size_) return false;
  for (std::size_t start = 0; start + pattern.size() <= size_; ++start) {
    bool hit = true;
    for (std::size_t k = 0; k < pattern.size() && hit; ++k)
      hit = (*this)[start + k] == pattern[k] - '0';
    if (hit) return true;
  }
  return false;
}

std::string Word::str() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) s[i] = static_cast<char>('0' + (*this)[i]);
  return s;
}

InflationRule::InflationRule(std::int64_t m_) : m(m_) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "family parameter m must be >= 1");
  images_[0].push_back(0);
  for (std::int64_t k = 0; k < m; ++k) images_[0].push_back(1);
  images_[1].push_back(0);
}

Word substitute(const Word& word, const InflationRule& rule, int times) {
  if (times < 0) throw Error(ErrorCode::InvalidArgument, "substitution count must be >= 0");
  Word current = word;
  for (int t = 0; t < times; ++t) {
    const std::size_t n0 = current.count(0);
    Word next;
    next.reserve(n0 * static_cast<std::size_t>(rule.m + 1) + current.count(1));
    for (std::size_t i = 0; i < current.size(); ++i) {
      const Word& img = rule.image(current[i]);
      for (std::size_t k = 0; k < img.size(); ++k) next.push_back(img[k]);
    }
    current = std::move(next);
  }
  return current;
}

FixedPointWords fixed_point_patch(std::int64_t m, int iterations) {
  if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
  const InflationRule rule(m);

  // The seed 0|0 is legal iff 00 occurs in some rho^k(0).
  bool legal = false;
  Word probe("0");
  for (int k = 1; k <= 4 && !legal; ++k) {
    probe = substitute(probe, rule, 1);
    legal = probe.contains("00");
  }
  if (!legal) throw Error(ErrorCode::LegalityFailure, "seed 0|0 is not legal");

  // rho^2 maps ...0|0... to ...rho^2(0)|rho^2(0)...; rho^2(0) both starts and
  // ends with 0, so both halves are rho^{2n}(0) read away from the marker
  // (the left half read towards the marker).
  const Word half = substitute(Word("0"), rule, 2 * iterations);
  return FixedPointWords{half.reversed(), half};
}

EigenData eigen_data(std::int64_t m) {
  const Ring ring(m);
  const double lp = ring.lambda_plus();
  return EigenData{lp, ring.lambda_minus(), {1.0 / lp, (lp - 1.0) / lp}, {lp, 1.0}};
}

DisplacementSets displacement_sets(const Ring& ring) {
  DisplacementSets t;
  t[0][0] = {ring.integer(0)};
  t[0][1] = {ring.integer(0)};
  for (std::int64_t k = 0; k < ring.m(); ++k) t[1][0].push_back(ring.make(k, 1));
  return t;
}

std::pair<std::size_t, std::size_t> TilingPatch::window(double r) const {
  const auto lo = std::lower_bound(values.begin(), values.end(), -static_cast<long double>(r));
  const auto hi = std::lower_bound(values.begin(), values.end(), static_cast<long double>(r));
  return {static_cast<std::size_t>(lo - values.begin()), static_cast<std::size_t>(hi - values.begin())};
}

namespace {

void fill_values(TilingPatch& patch) {
  patch.values.resize(patch.points.size());
  for (std::size_t i = 0; i < patch.points.size(); ++i)
    patch.values[i] = patch.ring.value_ld(patch.points[i].position);
}

}  // namespace

TilingPatch to_point_set(const FixedPointWords& words, const InflationRule& rule) {
  TilingPatch patch{Ring(rule.m), {}, {}, 0, 0.0, 0};
  const Ring& ring = patch.ring;
  const QuadInt lengths[2] = {rule.length(0, ring), rule.length(1, ring)};

  std::vector<TilePoint> left;
  left.reserve(words.left_reversed.size());
  QuadInt pos{};
  for (std::size_t i = 0; i < words.left_reversed.size(); ++i) {
    const int t = words.left_reversed[i];
    pos = pos - lengths[t];
    left.push_back({pos, t});
  }
  const long double left_extent = -ring.value_ld(pos);

  patch.points.reserve(left.size() + words.right.size());
  patch.points.assign(left.rbegin(), left.rend());
  patch.marker_index = patch.points.size();
  pos = QuadInt{};
  for (std::size_t i = 0; i < words.right.size(); ++i) {
    const int t = words.right[i];
    patch.points.push_back({pos, t});
    pos = pos + lengths[t];
  }
  const long double right_extent = ring.value_ld(pos);

  patch.radius = static_cast<double>(std::min(left_extent, right_extent));
  fill_values(patch);
  return patch;
}

TilingPatch generate_patch(std::int64_t m, int iterations) {
  TilingPatch patch = to_point_set(fixed_point_patch(m, iterations), InflationRule(m));
  patch.iterations = iterations;
  return patch;
}

TilingPatch generate_patch_with_radius(std::int64_t m, double min_radius) {
  if (!(min_radius > 0.0) || !std::isfinite(min_radius))
    throw Error(ErrorCode::InvalidArgument, "patch radius must be positive and finite");
  const Ring ring(m);
  // |rho^{2n}(0)| grows like lambda^{2n}; geometric length similarly
  const double lam = ring.lambda_plus();
  int n = 1;
  double estimate = lam;
  while (estimate * lam * lam < min_radius && n < 64) {
    estimate *= lam * lam;
    ++n;
  }
  // The estimate is only a guide; step until it holds.
  n = std::max(1, n - 1);
  for (;; ++n) {
    TilingPatch p = generate_patch(m, n);
    if (p.radius >= min_radius) return p;
    if (p.size() > (std::size_t{1} << 31))
      throw Error(ErrorCode::InvalidArgument, "requested patch radius too large");
  }
}

TilingPatch inflate(const TilingPatch& patch) {
  const Ring& ring = patch.ring;
  const DisplacementSets t = displacement_sets(ring);
  const QuadInt lam = ring.lambda();

  TilingPatch out{ring, {}, {}, 0, 0.0, patch.iterations};
  out.points.reserve(patch.points.size() * static_cast<std::size_t>(ring.m() + 1));
  for (std::size_t idx = 0; idx < patch.points.size(); ++idx) {
    const auto& [x, j] = patch.points[idx];
    const QuadInt base = ring.mul(lam, x);
    if (idx == patch.marker_index) out.marker_index = out.points.size();
    // T[0][j] = {0} precedes T[1][j] in position order
    for (int i = 0; i < 2; ++i)
      for (const QuadInt& off : t[i][j]) out.points.push_back({ring.add(base, off), i});
  }
  out.radius = patch.radius * ring.lambda_plus();
  fill_values(out);
  return out;
}

double density(const TilingPatch& patch, double r) {
  if (r <= 0.0) r = patch.radius;
  if (!(r > 0.0)) throw Error(ErrorCode::EmptyPatch, "patch has zero radius");
  const auto [lo, hi] = patch.window(r);
  if (hi == lo) throw Error(ErrorCode::EmptyPatch, "no points in density window");
  return static_cast<double>(hi - lo) / (2.0 * r);
}

std::pair<double, double> letter_frequencies(const TilingPatch& patch, double r) {
  if (r <= 0.0) r = patch.radius;
  const auto [lo, hi] = patch.window(r);
  if (hi == lo) throw Error(ErrorCode::EmptyPatch, "no points in frequency window");
  std::size_t n0 = 0;
  for (std::size_t i = lo; i < hi; ++i) n0 += patch.points[i].type == 0;
  const double n = static_cast<double>(hi - lo);
  return {static_cast<double>(n0) / n, static_cast<double>(hi - lo - n0) / n};
}

}  // namespace infladiff
