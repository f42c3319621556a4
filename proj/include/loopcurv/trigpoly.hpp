#pragma once

#include <complex>
#include <map>

#include "loopcurv/coeff.hpp"

namespace loopcurv {

/// Real trigonometric polynomial c0 + sum_n (a_n cos n.theta + b_n sin n.theta)
/// with complex-capable coefficients (loop-field components are real; symbol
/// coefficients pick up factors of i from the composition formula).
/// Canonical form never stores a harmonic whose cos and sin parts are both
/// zero, so structural equality coincides with equality of functions.
class TrigPoly {
 public:
  struct Harmonic {
    CCoeff cs;  // coefficient of cos(n theta)
    CCoeff sn;  // coefficient of sin(n theta)
    bool operator==(const Harmonic& o) const { return cs == o.cs && sn == o.sn; }
  };

  TrigPoly() = default;

  static TrigPoly constant(CCoeff c);
  static TrigPoly cosine(int n, CCoeff c);
  static TrigPoly sine(int n, CCoeff c);

  const CCoeff& constant_term() const { return constant_; }
  const std::map<int, Harmonic>& harmonics() const { return harmonics_; }

  /// Highest frequency present (0 for constants and the zero polynomial).
  int degree() const;

  bool is_zero() const;
  bool is_real() const;
  bool is_exact() const;
  bool is_theta_independent() const { return harmonics_.empty(); }

  /// Value at theta = 0, i.e. constant + sum of cos coefficients.
  CCoeff value_at_zero() const;

  /// Complex Fourier coefficient of e^{i m theta}; m may be negative.
  CCoeff fourier(int m) const;

  TrigPoly operator-() const;
  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }

  bool operator==(const TrigPoly& o) const;
  bool operator!=(const TrigPoly& o) const { return !(*this == o); }

  std::complex<double> eval(double theta) const;

  /// Accumulate c * cos(n theta) resp. c * sin(n theta), folding negative
  /// and zero frequencies into canonical form.
  void add_cos(int n, const CCoeff& c);
  void add_sin(int n, const CCoeff& c);

 private:
  CCoeff constant_;
  std::map<int, Harmonic> harmonics_;

  void prune();
};

/// Exact product via the product-to-sum identities.
TrigPoly trig_mul(const TrigPoly& a, const TrigPoly& b);

/// Exact theta-derivative iterated `order` times.
TrigPoly trig_diff(const TrigPoly& a, unsigned order);

TrigPoly trig_scale(const TrigPoly& a, const CCoeff& c);

}  // namespace loopcurv
