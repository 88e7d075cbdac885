#pragma once

// Exact arithmetic in Z[lambda], lambda the positive root of x^2 = x + m.

#include <cstddef>
#include <cstdint>
#include <compare>
#include <functional>
#include <optional>
#include <string>

namespace infladiff {

using int128 = __int128;

std::string to_string(int128 v);

// Component-wise 128-bit arithmetic; every operation is overflow-checked and
// throws Error(Overflow) instead of wrapping.
namespace checked {
int128 add(int128 x, int128 y);
int128 sub(int128 x, int128 y);
int128 mul(int128 x, int128 y);
}  // namespace checked

/// Element a + b*lambda. Products, quotients and comparisons need a Ring.
struct QuadInt {
  int128 a = 0;
  int128 b = 0;

  constexpr QuadInt() = default;
  constexpr QuadInt(int128 a_, int128 b_) : a(a_), b(b_) {}

  friend constexpr bool operator==(const QuadInt&, const QuadInt&) = default;

  friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
    return {checked::add(x.a, y.a), checked::add(x.b, y.b)};
  }
  friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
    return {checked::sub(x.a, y.a), checked::sub(x.b, y.b)};
  }
  QuadInt operator-() const { return QuadInt{} - *this; }

  /// "a+b*lambda" with explicit signs, e.g. "-1-3*lambda".
  std::string str() const;
};

struct QuadIntHash {
  std::size_t operator()(const QuadInt& z) const noexcept {
    auto lo = [](int128 v) { return static_cast<std::uint64_t>(v); };
    std::uint64_t h = lo(z.a) * 0x9E3779B97F4A7C15ULL;
    h ^= lo(z.b) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// The ring Z[lambda] for a fixed family parameter m.
///
/// When 4m+1 is a perfect square lambda is an integer; the ring then
/// degenerates to Z and every value is kept in the normal form (a + b*lambda, 0)
/// so that equality of representations matches equality of reals.
class Ring {
 public:
  explicit Ring(std::int64_t m);

  std::int64_t m() const noexcept { return m_; }
  bool integral() const noexcept { return integral_; }
  /// sqrt(4m+1) when it is an integer, otherwise 0.
  std::int64_t sqrt_discriminant() const noexcept { return sqrt_disc_; }

  double lambda_plus() const noexcept { return static_cast<double>(lambda_plus_); }
  double lambda_minus() const noexcept { return static_cast<double>(lambda_minus_); }
  long double lambda_plus_ld() const noexcept { return lambda_plus_; }

  QuadInt lambda() const { return normalize({0, 1}); }
  QuadInt integer(int128 n) const { return {n, 0}; }
  QuadInt make(int128 a, int128 b) const { return normalize({a, b}); }
  QuadInt normalize(const QuadInt& z) const;

  QuadInt add(const QuadInt& x, const QuadInt& y) const { return normalize(x + y); }
  QuadInt mul(const QuadInt& x, const QuadInt& y) const;
  /// z / lambda when it lies in Z[lambda]. Since 1/lambda = (lambda-1)/m this
  /// is (b - a/m) + (a/m)*lambda, defined iff m | a.
  std::optional<QuadInt> div_lambda(const QuadInt& z) const;

  std::strong_ordering cmp(const QuadInt& x, const QuadInt& y) const;
  int sign(const QuadInt& z) const;
  QuadInt abs(const QuadInt& z) const { return sign(z) < 0 ? -z : z; }

  long double value_ld(const QuadInt& z) const;
  double value(const QuadInt& z) const { return static_cast<double>(value_ld(z)); }

 private:
  std::int64_t m_;
  bool integral_ = false;
  std::int64_t sqrt_disc_ = 0;
  long double lambda_plus_;
  long double lambda_minus_;
};

}  // namespace infladiff
