#include "unibound/kohn_constants.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "unibound/common.hpp"

namespace unibound {

namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(Errc::too_large, "Kohn constant exceeds 128-bit rational range");
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(Errc::too_large, "Kohn constant exceeds 128-bit rational range");
  return r;
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Rational {
  i128 num = 0;
  i128 den = 1;

  void reduce() {
    const i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Rational& operator+=(const Rational& o) {
    const i128 g = gcd128(den, o.den);
    const i128 lcm = checked_mul(den / g, o.den);
    num = checked_add(checked_mul(num, lcm / den), checked_mul(o.num, lcm / o.den));
    den = lcm;
    reduce();
    return *this;
  }
};

i128 power(i128 base, int e) {
  i128 r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

i128 binomial(int m, int s) {
  i128 r = 1;
  for (int i = 1; i <= s; ++i) r = r * (m - s + i) / i;
  return r;
}

// Correctly rounded num/den for num, den > 0.
double to_double(i128 num_s, i128 den_s) {
  const u128 num = static_cast<u128>(num_s), den = static_cast<u128>(den_s);
  u128 q = num / den, r = num % den;
  int exponent = 0;
  // Shift the integer part down to at most 55 significant bits, keeping a sticky bit.
  bool sticky = false;
  int bits = 0;
  for (u128 t = q; t != 0; t >>= 1) ++bits;
  if (bits > 55) {
    const int drop = bits - 55;
    sticky = r != 0 || (q & ((u128(1) << drop) - 1)) != 0;
    q >>= drop;
    exponent = drop;
    r = 0;
  } else {
    // Append fractional bits by long division until 55 significant bits.
    while (bits < 55) {
      r <<= 1;
      q <<= 1;
      if (r >= den) {
        r -= den;
        q |= 1;
      }
      --exponent;
      if (q != 0) ++bits;
    }
    sticky = r != 0;
  }
  // q has 55 bits: 53 kept, guard, and below-guard folded into sticky.
  const bool guard = (q >> 1) & 1;
  sticky = sticky || (q & 1);
  u128 mant = q >> 2;
  if (guard && (sticky || (mant & 1))) ++mant;
  return std::ldexp(static_cast<double>(mant), exponent + 2);
}

// Inner braces of the c1/c2 sums for m = l - q - r; even s starts at s0.
Rational brace(int n, int m, int s0) {
  Rational out;
  const i128 w = 2 * static_cast<i128>(n) - 1;
  for (int s = 1; s <= m; s += 2) {
    Rational t{checked_mul(checked_mul(power(2, s), n), binomial(m, s)), power(w, (s + 1) / 2)};
    t.reduce();
    out += t;
  }
  for (int s = s0; s <= m; s += 2) {
    Rational t{checked_mul(power(2, s), binomial(m, s)), power(w, s / 2)};
    t.reduce();
    out += t;
  }
  return out;
}

Rational kohn_sum(int n, int l, int s0) {
  Rational total;
  for (int q = 1; q <= l - 2; ++q)
    for (int r = 1; r <= l - q - 1; ++r) total += brace(n, l - q - r, s0);
  return total;
}

void require_n(int n) {
  if (n < 1) throw Error(Errc::domain, "Heisenberg dimension n must be >= 1");
}

}  // namespace

double kohn_constant_c1(int n, int l) {
  require_n(n);
  if (l < 3 || l % 2 == 0) throw Error(Errc::domain, "c1 needs odd l >= 3, got " + std::to_string(l));
  if (l == 3) return 4.0;
  const Rational s = kohn_sum(n, l, 2);
  return to_double(checked_mul(2, s.num), s.den);
}

double kohn_constant_c2(int n, int l) {
  require_n(n);
  if (l < 4 || l % 2 != 0) throw Error(Errc::domain, "c2 needs even l >= 4, got " + std::to_string(l));
  const Rational s = kohn_sum(n, l, 0);
  return to_double(checked_mul(4, s.num), s.den);
}

}  // namespace unibound
