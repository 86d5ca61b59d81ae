#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>

#include <gmpxx.h>

namespace khx {

class OverflowError : public std::overflow_error {
 public:
  OverflowError() : std::overflow_error("64-bit coefficient overflow") {}
};

/// 64-bit integer whose arithmetic throws OverflowError instead of wrapping.
/// Elimination runs on this first and is redone on mpz_class after a throw.
struct Checked64 {
  std::int64_t v = 0;

  Checked64() = default;
  constexpr Checked64(std::int64_t x) : v(x) {}  // NOLINT(google-explicit-constructor)

  friend Checked64 operator+(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw OverflowError();
    return r;
  }
  friend Checked64 operator-(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw OverflowError();
    return r;
  }
  friend Checked64 operator*(Checked64 a, Checked64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw OverflowError();
    return r;
  }
  friend Checked64 operator/(Checked64 a, Checked64 b) {
    if (a.v == INT64_MIN && b.v == -1) throw OverflowError();
    return a.v / b.v;
  }
  friend Checked64 operator%(Checked64 a, Checked64 b) {
    if (b.v == -1) return 0;
    return a.v % b.v;
  }
  Checked64 operator-() const {
    if (v == INT64_MIN) throw OverflowError();
    return -v;
  }
  friend bool operator==(Checked64 a, Checked64 b) = default;
};

namespace num {

inline bool is_zero(Checked64 x) { return x.v == 0; }
inline bool is_zero(const mpz_class& x) { return sgn(x) == 0; }

inline bool is_unit(Checked64 x) { return x.v == 1 || x.v == -1; }
inline bool is_unit(const mpz_class& x) { return x == 1 || x == -1; }

inline bool abs_less(Checked64 a, Checked64 b) {
  // Compare magnitudes without negating INT64_MIN.
  auto mag = [](std::int64_t x) { return x < 0 ? static_cast<std::uint64_t>(-(x + 1)) + 1 : static_cast<std::uint64_t>(x); };
  return mag(a.v) < mag(b.v);
}
inline bool abs_less(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }

inline Checked64 abs(Checked64 x) { return x.v < 0 ? -x : x; }
inline mpz_class abs(const mpz_class& x) { return ::abs(x); }

inline Checked64 gcd(Checked64 a, Checked64 b) {
  std::int64_t x = abs(a).v, y = abs(b).v;
  while (y != 0) {
    std::int64_t t = x % y;
    x = y;
    y = t;
  }
  return x;
}
inline mpz_class gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline mpz_class to_mpz(Checked64 x) { return mpz_class(static_cast<long>(x.v)); }
inline mpz_class to_mpz(const mpz_class& x) { return x; }

template <class T>
T from_int64(std::int64_t x) {
  if constexpr (std::is_same_v<T, mpz_class>) {
    return mpz_class(static_cast<long>(x));
  } else {
    return T(x);
  }
}

}  // namespace num
}  // namespace khx
