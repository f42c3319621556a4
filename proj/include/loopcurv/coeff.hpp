#pragma once

#include <complex>
#include <string>

#include "loopcurv/rational.hpp"

namespace loopcurv {

/// Coefficient scalar of the symbolic layer. Exact rationals by default;
/// operations that hit an irrational spectral multiplier (e.g. fractional
/// Laplacian powers at frequencies that are not perfect powers) switch the
/// affected value into a flagged extended-precision numeric mode. Exactness
/// is contagious downward only: exact op exact stays exact, anything
/// involving a numeric value is numeric. Multiplying by an exact zero gives
/// an exact zero in every case.
class Coeff {
 public:
  Coeff() : exact_(true), q_(0), f_(0.0L) {}
  Coeff(Rat q) : exact_(true), q_(std::move(q)), f_(0.0L) {}
  Coeff(long v) : exact_(true), q_(v), f_(0.0L) {}
  Coeff(int v) : exact_(true), q_(v), f_(0.0L) {}

  static Coeff approx(long double v);

  bool exact() const { return exact_; }
  bool is_zero() const { return exact_ ? q_ == 0 : f_ == 0.0L; }

  /// Requires exact().
  const Rat& rational() const;

  long double value() const { return exact_ ? rat_to_long_double(q_) : f_; }
  double to_double() const { return static_cast<double>(value()); }

  Coeff operator-() const;
  Coeff& operator+=(const Coeff& o);
  Coeff& operator-=(const Coeff& o);
  Coeff& operator*=(const Coeff& o);

  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }

  bool operator==(const Coeff& o) const;
  bool operator!=(const Coeff& o) const { return !(*this == o); }

  /// "p/q" when exact, decimal repr when numeric.
  std::string str() const;

 private:
  bool exact_;
  Rat q_;
  long double f_;
};

/// Complex coefficient over Coeff (the composition formula introduces
/// powers of 1/i).
struct CCoeff {
  Coeff re, im;

  CCoeff() = default;
  CCoeff(Coeff r) : re(std::move(r)), im() {}
  CCoeff(Coeff r, Coeff i) : re(std::move(r)), im(std::move(i)) {}
  CCoeff(Rat r) : re(std::move(r)), im() {}
  CCoeff(long v) : re(v), im() {}
  CCoeff(int v) : re(v), im() {}

  static CCoeff i_unit() { return CCoeff(Coeff(0), Coeff(1)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool exact() const { return re.exact() && im.exact(); }
  bool is_real() const { return im.is_zero(); }

  CCoeff operator-() const { return CCoeff(-re, -im); }
  CCoeff& operator+=(const CCoeff& o);
  CCoeff& operator-=(const CCoeff& o);
  CCoeff& operator*=(const CCoeff& o);

  friend CCoeff operator+(CCoeff a, const CCoeff& b) { return a += b; }
  friend CCoeff operator-(CCoeff a, const CCoeff& b) { return a -= b; }
  friend CCoeff operator*(CCoeff a, const CCoeff& b) { return a *= b; }

  bool operator==(const CCoeff& o) const { return re == o.re && im == o.im; }
  bool operator!=(const CCoeff& o) const { return !(*this == o); }

  /// Multiplication by i^k, k taken mod 4.
  CCoeff times_i_pow(int k) const;

  std::complex<double> to_complex() const {
    return {re.to_double(), im.to_double()};
  }
};

}  // namespace loopcurv
