#include "loopcurv/rational.hpp"

#include <cctype>
#include <cmath>

#include "loopcurv/common.hpp"

namespace loopcurv {

Rat rat_from_string(const std::string& text) {
  // strict format check before handing to GMP: [+-]?digits(/digits)?
  std::size_t i = 0;
  const std::size_t n = text.size();
  if (n == 0) throw InputError("empty rational literal");
  if (text[i] == '+' || text[i] == '-') ++i;
  std::size_t num_digits = 0;
  while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++num_digits;
  }
  if (num_digits == 0)
    throw InputError("malformed rational literal '" + text + "'");
  if (i < n) {
    if (text[i] != '/')
      throw InputError("malformed rational literal '" + text + "'");
    ++i;
    std::size_t den_digits = 0;
    bool den_nonzero = false;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (text[i] != '0') den_nonzero = true;
      ++i;
      ++den_digits;
    }
    if (den_digits == 0 || i != n)
      throw InputError("malformed rational literal '" + text + "'");
    if (!den_nonzero)
      throw InputError("zero denominator in rational literal '" + text + "'");
  }
  Rat q(text);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) {
  return q.get_str();
}

bool rat_is_integer(const Rat& q) {
  return q.get_den() == 1;
}

long rat_floor(const Rat& q) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!z.fits_slong_p()) throw Error("rational floor out of range");
  return z.get_si();
}

double rat_to_double(const Rat& q) {
  return q.get_d();
}

namespace {

long double mpz_to_long_double(const mpz_class& z) {
  const std::size_t limbs = mpz_size(z.get_mpz_t());
  long double r = 0.0L;
  const long double base = std::ldexp(1.0L, GMP_NUMB_BITS);
  for (std::size_t i = limbs; i-- > 0;)
    r = r * base + static_cast<long double>(mpz_getlimbn(z.get_mpz_t(), i));
  return mpz_sgn(z.get_mpz_t()) < 0 ? -r : r;
}

}  // namespace

long double rat_to_long_double(const Rat& q) {
  return mpz_to_long_double(mpz_class(q.get_num())) /
         mpz_to_long_double(mpz_class(q.get_den()));
}

Rat rat_binomial(const Rat& x, unsigned k) {
  Rat r(1);
  for (unsigned t = 0; t < k; ++t) r *= x - Rat(static_cast<long>(t));
  return r / rat_factorial(k);
}

Rat rat_factorial(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return Rat(f);
}

}  // namespace loopcurv
