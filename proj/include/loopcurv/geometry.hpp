#pragma once

#include "loopcurv/symbol.hpp"

namespace loopcurv {

enum class Regime { fractional, critical, supercritical };

const char* regime_name(Regime r);

/// Sobolev parameter of the metric <(1+Lap)^s X, Y> resp. <Lap^s X, Y>.
/// Requires s > 1/2 (continuity of loops).
struct SobolevParam {
  Rat s;
  Space space;
  Regime regime;

  SobolevParam(Rat s_, Space space_);
};

/// The covariant derivative of the s-metric on left-invariant fields is
///   2 nabla_X Y = [X,Y] - P^{-s}[P^s X, Y] + P^{-s}[X, P^s Y],
/// with P = 1+Lap (free) or Lap (based). The minus sign on the middle term
/// is the convention that makes the connection torsion free (see
/// torsion_check); `plus` flips it and exists as a regression guard.
enum class SignConvention { minus, plus };

/// Symbol of nabla_X with a term-by-term audit of the three contributions:
/// (a) the pointwise bracket, (b) the power-bracket term P^{-s} ad_{P^s X},
/// (c) the sandwich term P^{-s} ad_X P^s. The signed parts sum exactly to
/// the stored total.
struct ConnectionSymbol {
  Symbol total;
  Symbol part_a, part_b, part_c;
  SobolevParam param;
  Rat cutoff;
};

/// Symbol of the curvature operator
///   Omega(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_{[X,Y]},
/// with the three compositions kept for auditing.
struct CurvatureSymbol {
  Symbol total;
  Symbol comp_xy, comp_yx, nabla_bracket;
  SobolevParam param;
  Rat cutoff;
};

ConnectionSymbol connection_symbol(const LieAlgebraSpec& L, const LoopField& x,
                                   const SobolevParam& p, const Rat& cutoff,
                                   SignConvention conv = SignConvention::minus);

CurvatureSymbol curvature_symbol(const LieAlgebraSpec& L, const LoopField& x,
                                 const LoopField& y, const SobolevParam& p,
                                 const Rat& cutoff,
                                 SignConvention conv = SignConvention::minus);

/// Largest grade of a nonempty term, or disengaged when the symbol is
/// empty down to its cutoff.
std::optional<Rat> leading_order(const CurvatureSymbol& c);

/// Symbol of the torsion Y -> nabla_X Y - nabla_Y X - [X,Y], read as an
/// operator in the acted-on slot. Empty up to the cutoff under the minus
/// convention; the plus convention leaves the two power terms uncancelled.
Symbol torsion_check(const LieAlgebraSpec& L, const LoopField& x,
                     const LoopField& y, const SobolevParam& p,
                     const Rat& cutoff,
                     SignConvention conv = SignConvention::minus);

/// Default truncation: one grade past the deepest of -2 and -2s, so the
/// leading curvature grade of every regime is certified with a guard band.
Rat default_cutoff(const Rat& s);

}  // namespace loopcurv
