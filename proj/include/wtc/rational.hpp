#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace wtc {

/// Exact rational number; GMP keeps it canonical (reduced, positive denominator).
using Rat = mpq_class;
using BigInt = mpz_class;

/// Parses `7`, `-3/4`, `0.125` or `-2.5`. Throws Error(ParseError).
Rat parseRat(std::string_view text);

/// `p` for integers, `p/q` otherwise.
std::string toString(const Rat& r);

/// num/den in lowest terms (den != 0).
inline Rat ratFrac(long num, long den) {
  Rat r{BigInt(num), BigInt(den)};
  r.canonicalize();
  return r;
}

inline double toDouble(const Rat& r) { return r.get_d(); }

/// Exact binary value of a finite double.
Rat fromDouble(double x);

/// r^e for any integer exponent (r != 0 when e < 0).
Rat ratPow(const Rat& r, long e);

inline Rat ratAbs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
inline const Rat& ratMin(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& ratMax(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Greatest integer <= r.
BigInt ratFloor(const Rat& r);
/// Smallest integer >= r.
BigInt ratCeil(const Rat& r);

}  // namespace wtc
