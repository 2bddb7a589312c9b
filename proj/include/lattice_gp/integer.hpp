#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lgp {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Lattice coordinates. |p|^2 for n up to 10^6 and moderate d fits comfortably.
using Coord = std::int64_t;

// Thrown when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when the input is valid but geometrically degenerate for the request.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

struct Overflow {};

// 128-bit integer that throws Overflow instead of wrapping. Used as the fast
// path of exact computations; callers retry with Integer on Overflow.
class Checked128 {
 public:
  using Raw = __int128;

  constexpr Checked128() = default;
  constexpr Checked128(std::int64_t v) : v_(v) {}  // NOLINT(implicit)
  static constexpr Checked128 from_raw(Raw v) {
    Checked128 c;
    c.v_ = v;
    return c;
  }

  constexpr Raw raw() const { return v_; }

  friend Checked128 operator+(Checked128 a, Checked128 b) {
    Raw r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return from_raw(r);
  }
  friend Checked128 operator-(Checked128 a, Checked128 b) {
    Raw r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return from_raw(r);
  }
  friend Checked128 operator*(Checked128 a, Checked128 b) {
    Raw r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return from_raw(r);
  }
  friend Checked128 operator/(Checked128 a, Checked128 b) {
    if (b.v_ == -1 && a.v_ == std::numeric_limits<Raw>::min()) throw Overflow{};
    return from_raw(a.v_ / b.v_);
  }
  friend Checked128 operator-(Checked128 a) { return Checked128{0} - a; }
  Checked128& operator+=(Checked128 b) { return *this = *this + b; }
  Checked128& operator-=(Checked128 b) { return *this = *this - b; }
  Checked128& operator*=(Checked128 b) { return *this = *this * b; }

  friend constexpr bool operator==(Checked128 a, Checked128 b) = default;
  friend constexpr auto operator<=>(Checked128 a, Checked128 b) = default;

 private:
  Raw v_ = 0;
};

inline Integer to_integer(Checked128 v) {
  const __int128 raw = v.raw();
  const bool negative = raw < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(raw)
                                   : static_cast<unsigned __int128>(raw);
  Integer out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? Integer(-out) : out;
}

inline Integer to_integer(std::int64_t v) { return Integer(v); }
inline const Integer& to_integer(const Integer& v) { return v; }

inline bool fits_int64(const Integer& v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

inline Integer abs(const Integer& v) { return v < 0 ? Integer(-v) : v; }

inline Integer gcd(Integer a, Integer b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

// C(n, k) as an exact integer; 0 when k > n.
inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Integer r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  const Integer b = binomial(n, k);
  if (b > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(b);
}

inline std::string to_string(const Integer& v) { return v.str(); }

}  // namespace lgp
