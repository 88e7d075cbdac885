#include "infladiff/quadint.hpp"

#include <cmath>

#include "infladiff/error.hpp"

namespace infladiff {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::LegalityFailure: return "LegalityFailure";
    case ErrorCode::RecodingMismatch: return "RecodingMismatch";
    case ErrorCode::EmptyPatch: return "EmptyPatch";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::MissingEntry: return "MissingEntry";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // magnitude in unsigned space so INT128_MIN is handled
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

namespace checked {

int128 add(int128 x, int128 y) {
  int128 r;
  if (__builtin_add_overflow(x, y, &r))
    throw Error(ErrorCode::Overflow, "Z[lambda] addition overflow");
  return r;
}

int128 sub(int128 x, int128 y) {
  int128 r;
  if (__builtin_sub_overflow(x, y, &r))
    throw Error(ErrorCode::Overflow, "Z[lambda] subtraction overflow");
  return r;
}

int128 mul(int128 x, int128 y) {
  int128 r;
  if (__builtin_mul_overflow(x, y, &r))
    throw Error(ErrorCode::Overflow, "Z[lambda] multiplication overflow");
  return r;
}

}  // namespace checked

std::string QuadInt::str() const {
  std::string out;
  if (b == 0) return to_string(a);
  if (a != 0) out = to_string(a);
  if (b < 0) {
    out += "-";
  } else if (!out.empty()) {
    out += "+";
  }
  int128 mag = b < 0 ? -b : b;
  if (mag != 1) out += to_string(mag) + "*";
  out += "lambda";
  return out;
}

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

int sign_of(int128 v) { return (v > 0) - (v < 0); }

}  // namespace

Ring::Ring(std::int64_t m) : m_(m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "family parameter m must be >= 1");
  if (m > (std::int64_t{1} << 40))
    throw Error(ErrorCode::InvalidArgument, "family parameter m too large");
  const std::int64_t disc = 4 * m + 1;
  const std::int64_t s = isqrt(disc);
  if (s * s == disc) {
    integral_ = true;
    sqrt_disc_ = s;
  }
  const long double root = std::sqrt(static_cast<long double>(disc));
  lambda_plus_ = (1.0L + root) / 2.0L;
  lambda_minus_ = (1.0L - root) / 2.0L;
  if (integral_) {
    lambda_plus_ = static_cast<long double>((1 + s) / 2);
    lambda_minus_ = static_cast<long double>((1 - s) / 2);
  }
}

QuadInt Ring::normalize(const QuadInt& z) const {
  if (!integral_ || z.b == 0) return z;
  const int128 lam = (1 + sqrt_disc_) / 2;
  return {checked::add(z.a, checked::mul(z.b, lam)), 0};
}

QuadInt Ring::mul(const QuadInt& x, const QuadInt& y) const {
  // (a1 + b1 L)(a2 + b2 L) with L^2 = L + m
  const int128 bb = checked::mul(x.b, y.b);
  const int128 a = checked::add(checked::mul(x.a, y.a), checked::mul(m_, bb));
  const int128 b = checked::add(checked::add(checked::mul(x.a, y.b), checked::mul(y.a, x.b)), bb);
  return normalize({a, b});
}

std::optional<QuadInt> Ring::div_lambda(const QuadInt& z) const {
  if (integral_) {
    const QuadInt n = normalize(z);
    const int128 lam = (1 + sqrt_disc_) / 2;
    if (n.a % lam != 0) return std::nullopt;
    return QuadInt{n.a / lam, 0};
  }
  if (z.a % m_ != 0) return std::nullopt;
  const int128 q = z.a / m_;
  return QuadInt{checked::sub(z.b, q), q};
}

int Ring::sign(const QuadInt& z) const {
  if (integral_) return sign_of(normalize(z).a);
  // 2z = (2a + b) + b*sqrt(4m+1)
  const int128 p = checked::add(checked::mul(2, z.a), z.b);
  const int128 q = z.b;
  const int sp = sign_of(p);
  const int sq = sign_of(q);
  if (sp == 0) return sq;
  if (sq == 0 || sp == sq) return sp;
  // opposite signs: compare p^2 with q^2 (4m+1); equality impossible (irrational root)
  const int128 lhs = checked::mul(p, p);
  const int128 rhs = checked::mul(checked::mul(q, q), 4 * m_ + 1);
  return lhs > rhs ? sp : sq;
}

std::strong_ordering Ring::cmp(const QuadInt& x, const QuadInt& y) const {
  const int s = sign(x - y);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

long double Ring::value_ld(const QuadInt& z) const {
  return static_cast<long double>(z.a) + static_cast<long double>(z.b) * lambda_plus_;
}

}  // namespace infladiff
