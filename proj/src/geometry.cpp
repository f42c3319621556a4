#include "loopcurv/geometry.hpp"

namespace loopcurv {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::fractional: return "fractional";
    case Regime::critical: return "critical";
    default: return "supercritical";
  }
}

SobolevParam::SobolevParam(Rat s_, Space space_)
    : s(std::move(s_)), space(space_), regime(Regime::critical) {
  if (s <= Rat(1, 2))
    throw SobolevRange("Sobolev parameter must exceed 1/2, got " +
                       rat_to_string(s));
  if (s < 1)
    regime = Regime::fractional;
  else if (s == 1)
    regime = Regime::critical;
  else
    regime = Regime::supercritical;
}

namespace {

const CCoeff kHalf{Coeff(Rat(1, 2))};

struct ConnectionPieces {
  Symbol half_ad;       // (1/2) ad_X
  Symbol half_powbr;    // (1/2) P^{-s} ad_{P^s X}
  Symbol half_sandwich; // (1/2) P^{-s} ad_X P^{s}
};

void validate_field(const LieAlgebraSpec& L, const LoopField& x,
                    const SobolevParam& p, const char* what) {
  if (!(x.algebra == L))
    throw InvalidInput(std::string(what) +
                       ": field does not live over the given algebra");
  if (p.space == Space::based && !x.based_admissible())
    throw InvalidInput(std::string(what) +
                       ": based-loop field must vanish at theta = 0");
}

// Assemble the three halves of 2 nabla = ad - P^{-s} ad_{PX} + P^{-s} ad P^s
// (signs applied by the callers). The power-bracket piece enters at grade
// -2s; whether it reaches a given cutoff is decided by grade arithmetic
// alone, never by the regime.
ConnectionPieces connection_pieces(const LieAlgebraSpec& L, const LoopField& x,
                                   const SobolevParam& p, const Rat& cutoff) {
  const int d = L.dim;
  const Rat two_s = Rat(2) * p.s;
  ConnectionPieces out{symbol_zero(d), symbol_zero(d), symbol_zero(d)};

  const Symbol ad_x = ad_symbol(L, x);
  out.half_ad = symbol_scale(ad_x, kHalf);

  // sandwich: P^{-s} o (ad_X o P^{s}); the inner composition is exact in
  // alpha (the ad symbol is xi-independent)
  const Rat inner_cut = cutoff + two_s;
  const Symbol pow_plus = power_symbol_to(p.space, +1, p.s, inner_cut, d);
  const Symbol inner = compose(ad_x, pow_plus, inner_cut);
  const Symbol pow_minus = power_symbol_to(p.space, -1, p.s, cutoff - two_s, d);
  out.half_sandwich =
      symbol_scale(compose(pow_minus, inner, cutoff), kHalf);

  // power bracket: P^{-s} o ad_{P^s X}; everything it produces sits at
  // grades <= -2s, so it is empty above a shallower cutoff
  if (-two_s < cutoff) {
    out.half_powbr = Symbol(d, cutoff);
  } else {
    const FieldPower px = laplacian_power_apply(x, p.s, p.space);
    const Symbol ad_px = ad_symbol(L, px.field);
    const Symbol pow_minus2 = power_symbol_to(p.space, -1, p.s, cutoff, d);
    out.half_powbr = symbol_scale(compose(pow_minus2, ad_px, cutoff), kHalf);
  }
  return out;
}

}  // namespace

Rat default_cutoff(const Rat& s) {
  const Rat minus2(-2);
  const Rat minus2s = Rat(-2) * s;
  return (minus2 < minus2s ? minus2 : minus2s) - 1;
}

ConnectionSymbol connection_symbol(const LieAlgebraSpec& L, const LoopField& x,
                                   const SobolevParam& p, const Rat& cutoff,
                                   SignConvention conv) {
  validate_algebra(L);
  validate_field(L, x, p, "connection_symbol");
  if (cutoff > 0)
    throw InvalidInput("connection_symbol: cutoff must be <= 0");

  ConnectionPieces pieces = connection_pieces(L, x, p, cutoff);
  const bool minus = conv == SignConvention::minus;
  Symbol part_b = minus ? symbol_scale(pieces.half_powbr, CCoeff(-1))
                        : pieces.half_powbr;
  Symbol total = symbol_add(symbol_add(pieces.half_ad, part_b),
                            pieces.half_sandwich);
  return ConnectionSymbol{std::move(total), std::move(pieces.half_ad),
                          std::move(part_b), std::move(pieces.half_sandwich),
                          p, cutoff};
}

CurvatureSymbol curvature_symbol(const LieAlgebraSpec& L, const LoopField& x,
                                 const LoopField& y, const SobolevParam& p,
                                 const Rat& cutoff, SignConvention conv) {
  const ConnectionSymbol nx = connection_symbol(L, x, p, cutoff, conv);
  const ConnectionSymbol ny = connection_symbol(L, y, p, cutoff, conv);
  const LoopField z = bracket_fields(L, x, y);
  const ConnectionSymbol nz = connection_symbol(L, z, p, cutoff, conv);

  Symbol comp_xy = compose(nx.total, ny.total, cutoff);
  Symbol comp_yx = compose(ny.total, nx.total, cutoff);
  Symbol total = symbol_sub(symbol_sub(comp_xy, comp_yx), nz.total);
  return CurvatureSymbol{std::move(total), std::move(comp_xy),
                         std::move(comp_yx), nz.total, p, cutoff};
}

std::optional<Rat> leading_order(const CurvatureSymbol& c) {
  return c.total.leading_grade();
}

Symbol torsion_check(const LieAlgebraSpec& L, const LoopField& x,
                     const LoopField& y, const SobolevParam& p,
                     const Rat& cutoff, SignConvention conv) {
  validate_algebra(L);
  validate_field(L, x, p, "torsion_check");
  validate_field(L, y, p, "torsion_check");
  if (cutoff > 0) throw InvalidInput("torsion_check: cutoff must be <= 0");

  // As operators acting on the Y slot:
  //   minus convention: 2 nabla_X .  =  ad_X - powbr + sandwich
  //                     2 nabla_. X = -ad_X - powbr + sandwich
  //   plus convention:  2 nabla_X .  =  ad_X + powbr + sandwich
  //                     2 nabla_. X = -ad_X - powbr - sandwich
  // so the torsion operator is 0 resp. powbr + sandwich.
  ConnectionPieces pieces = connection_pieces(L, x, p, cutoff);
  const bool minus = conv == SignConvention::minus;

  Symbol cov_x_arg = pieces.half_sandwich;
  cov_x_arg = symbol_add(cov_x_arg,
                         minus ? symbol_scale(pieces.half_powbr, CCoeff(-1))
                               : pieces.half_powbr);
  cov_x_arg = symbol_add(cov_x_arg, pieces.half_ad);

  Symbol cov_x_field =
      minus ? pieces.half_sandwich
            : symbol_scale(pieces.half_sandwich, CCoeff(-1));
  cov_x_field = symbol_add(cov_x_field,
                           symbol_scale(pieces.half_powbr, CCoeff(-1)));
  cov_x_field =
      symbol_add(cov_x_field, symbol_scale(pieces.half_ad, CCoeff(-1)));

  Symbol torsion = symbol_sub(symbol_sub(cov_x_arg, cov_x_field),
                              ad_symbol(L, x));
  return torsion;
}

}  // namespace loopcurv
