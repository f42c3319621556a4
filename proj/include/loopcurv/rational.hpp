#pragma once

#include <gmpxx.h>

#include <string>

namespace loopcurv {

/// Exact rational scalar used throughout the symbolic layer.
using Rat = mpq_class;

/// Canonicalized p/q (mpq_class leaves raw fractions unreduced, and GMP
/// comparisons require canonical form).
inline Rat make_rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Parse "p" or "p/q" (optional sign, decimal digits). Throws InputError.
Rat rat_from_string(const std::string& text);

/// Canonical "p" or "p/q" form.
std::string rat_to_string(const Rat& q);

bool rat_is_integer(const Rat& q);

/// Largest integer <= q.
long rat_floor(const Rat& q);

double rat_to_double(const Rat& q);

/// Full-precision conversion (80-bit extended on x86-64).
long double rat_to_long_double(const Rat& q);

/// Generalized binomial coefficient x(x-1)...(x-k+1)/k!.
Rat rat_binomial(const Rat& x, unsigned k);

Rat rat_factorial(unsigned k);

}  // namespace loopcurv
