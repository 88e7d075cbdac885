#pragma once

// Substitution rho_m: 0 -> 0 1^m, 1 -> 0, and its geometric realisation with
// interval lengths lambda (type 0) and 1 (type 1).

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infladiff/quadint.hpp"

namespace infladiff {

/// Binary word packed 64 letters per machine word.
class Word {
 public:
  Word() = default;
  explicit Word(std::string_view letters);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  int operator[](std::size_t i) const noexcept {
    return static_cast<int>((bits_[i >> 6] >> (i & 63)) & 1U);
  }
  void push_back(int letter);
  void append(const Word& other);
  void reserve(std::size_t n) { bits_.reserve((n + 63) / 64); }

  std::size_t count(int letter) const;
  Word reversed() const;
  bool contains(std::string_view pattern) const;
  std::string str() const;

  friend bool operator==(const Word& x, const Word& y) {
    return x.size_ == y.size_ && x.bits_ == y.bits_;
  }

 private:
  std::vector<std::uint64_t> bits_;
  std::size_t size_ = 0;
};

using Matrix2 = std::array<std::array<std::int64_t, 2>, 2>;

struct InflationRule {
  std::int64_t m;

  explicit InflationRule(std::int64_t m_);

  /// image(0) = 0 1^m, image(1) = 0
  const Word& image(int letter) const { return images_[letter]; }
  /// Column j counts the letters of image(j): [[1,1],[m,0]].
  Matrix2 matrix() const { return {{{1, 1}, {m, 0}}}; }
  /// length(0) = lambda, length(1) = 1
  QuadInt length(int type, const Ring& ring) const {
    return type == 0 ? ring.lambda() : ring.integer(1);
  }

 private:
  std::array<Word, 2> images_;
};

Word substitute(const Word& word, const InflationRule& rule, int times = 1);

/// Bi-infinite word around the marker "|". The left half is stored reversed,
/// so index 0 of left_reversed is the letter immediately left of the marker.
struct FixedPointWords {
  Word left_reversed;
  Word right;

  std::string left_string() const { return left_reversed.reversed().str(); }
  std::string str() const { return left_string() + "|" + right.str(); }
};

/// Applies rho^2 `iterations` times to the legal seed 0|0. Each iterate is a
/// central extension of the previous one.
FixedPointWords fixed_point_patch(std::int64_t m, int iterations);

struct EigenData {
  double lambda_plus;
  double lambda_minus;
  std::array<double, 2> pf_right;  // letter frequencies (1, lambda-1)/lambda
  std::array<double, 2> pf_left;   // interval lengths (lambda, 1)
};

EigenData eigen_data(std::int64_t m);

/// T[i][j]: offsets of the type-i tiles inside the inflated type-j tile.
using DisplacementSets = std::array<std::array<std::vector<QuadInt>, 2>, 2>;

DisplacementSets displacement_sets(const Ring& ring);

struct TilePoint {
  QuadInt position;
  int type;
};

/// Left endpoints of the tiles of a finite patch, sorted by position.
struct TilingPatch {
  Ring ring;
  std::vector<TilePoint> points;
  std::vector<long double> values;  // real positions, parallel to points
  std::size_t marker_index = 0;
  double radius = 0.0;  // the patch covers [-radius, radius)
  int iterations = 0;

  std::size_t size() const noexcept { return points.size(); }
  /// Index range [first, last) of points inside [-r, r).
  std::pair<std::size_t, std::size_t> window(double r) const;
};

TilingPatch to_point_set(const FixedPointWords& words, const InflationRule& rule);
TilingPatch generate_patch(std::int64_t m, int iterations);
/// Smallest rho^2 iterate whose patch radius is at least min_radius.
TilingPatch generate_patch_with_radius(std::int64_t m, double min_radius);

/// Geometric inflation: each tile at x of type j becomes tiles of type i at
/// lambda*x + T[i][j].
TilingPatch inflate(const TilingPatch& patch);

/// Points per unit length in [-r, r); r defaults to the patch radius.
double density(const TilingPatch& patch, double r = 0.0);
std::pair<double, double> letter_frequencies(const TilingPatch& patch, double r = 0.0);

}  // namespace infladiff
