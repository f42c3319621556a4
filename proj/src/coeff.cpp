#include "loopcurv/coeff.hpp"

#include <cstdio>

#include "loopcurv/common.hpp"

namespace loopcurv {

Coeff Coeff::approx(long double v) {
  Coeff c;
  c.exact_ = false;
  c.q_ = 0;
  c.f_ = v;
  return c;
}

const Rat& Coeff::rational() const {
  if (!exact_) throw Error("numeric coefficient has no rational value");
  return q_;
}

Coeff Coeff::operator-() const {
  Coeff c(*this);
  if (c.exact_)
    c.q_ = -c.q_;
  else
    c.f_ = -c.f_;
  return c;
}

Coeff& Coeff::operator+=(const Coeff& o) {
  if (exact_ && o.exact_) {
    q_ += o.q_;
    return *this;
  }
  // exact zero is the additive identity in either mode
  if (exact_ && q_ == 0) {
    *this = o;
    return *this;
  }
  if (o.exact_ && o.q_ == 0) return *this;
  f_ = value() + o.value();
  exact_ = false;
  q_ = 0;
  return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
  return *this += -o;
}

Coeff& Coeff::operator*=(const Coeff& o) {
  if (exact_ && o.exact_) {
    q_ *= o.q_;
    return *this;
  }
  // exact zero absorbs regardless of the other operand's mode
  if ((exact_ && q_ == 0) || (o.exact_ && o.q_ == 0)) {
    *this = Coeff();
    return *this;
  }
  f_ = value() * o.value();
  exact_ = false;
  q_ = 0;
  return *this;
}

bool Coeff::operator==(const Coeff& o) const {
  if (exact_ && o.exact_) return q_ == o.q_;
  return value() == o.value();
}

std::string Coeff::str() const {
  if (exact_) return rat_to_string(q_);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", f_);
  return buf;
}

CCoeff& CCoeff::operator+=(const CCoeff& o) {
  re += o.re;
  im += o.im;
  return *this;
}

CCoeff& CCoeff::operator-=(const CCoeff& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

CCoeff& CCoeff::operator*=(const CCoeff& o) {
  Coeff r = re * o.re - im * o.im;
  Coeff i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

CCoeff CCoeff::times_i_pow(int k) const {
  switch (((k % 4) + 4) % 4) {
    case 0: return *this;
    case 1: return CCoeff(-im, re);
    case 2: return -*this;
    default: return CCoeff(im, -re);
  }
}

}  // namespace loopcurv
