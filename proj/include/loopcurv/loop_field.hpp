#pragma once

#include <vector>

#include "loopcurv/lie_algebra.hpp"
#include "loopcurv/trigpoly.hpp"

namespace loopcurv {

/// Lie-algebra-valued loop with trigonometric-polynomial components,
/// one real TrigPoly per basis direction.
struct LoopField {
  LieAlgebraSpec algebra;
  std::vector<TrigPoly> components;

  LoopField() = default;
  LoopField(LieAlgebraSpec alg, std::vector<TrigPoly> comps);

  int dim() const { return algebra.dim; }
  int degree() const;
  bool is_zero() const;

  /// All components vanish at theta = 0 (exact test).
  bool based_admissible() const;

  LoopField operator-() const;
  LoopField& operator+=(const LoopField& o);
  friend LoopField operator+(LoopField a, const LoopField& b) { return a += b; }
  LoopField& operator-=(const LoopField& o);
  friend LoopField operator-(LoopField a, const LoopField& b) { return a -= b; }
  bool operator==(const LoopField& o) const;
};

/// Pointwise bracket [X,Y]^k = C^k_{ij} X^i Y^j.
LoopField bracket_fields(const LieAlgebraSpec& L, const LoopField& x,
                         const LoopField& y);

/// Result of applying a fractional Laplacian power. `exact` is true when
/// the Fourier multiplier was rational at every frequency present in the
/// input; otherwise the affected coefficients are in numeric mode.
struct FieldPower {
  LoopField field;
  bool exact = true;
};

/// Apply the Fourier multiplier of the s-th Laplacian power componentwise:
/// (1+n^2)^s on free loops, n^{2s} on based loops. The exponent s may be
/// negative (inverse powers). On based loops a positive power annihilates
/// the constant term (zero eigenvalue); a negative power applied to a field
/// with nonzero constant term throws KernelViolation.
FieldPower laplacian_power_apply(const LoopField& x, const Rat& s, Space space);

}  // namespace loopcurv
