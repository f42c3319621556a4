#include "loopcurv/loop_field.hpp"

#include <cmath>

namespace loopcurv {

LoopField::LoopField(LieAlgebraSpec alg, std::vector<TrigPoly> comps)
    : algebra(std::move(alg)), components(std::move(comps)) {
  if (static_cast<int>(components.size()) != algebra.dim)
    throw InvalidInput("loop field needs one component per basis direction");
  for (const TrigPoly& p : components)
    if (!p.is_real())
      throw InvalidInput("loop field components must be real-valued");
}

int LoopField::degree() const {
  int d = 0;
  for (const TrigPoly& p : components) d = std::max(d, p.degree());
  return d;
}

bool LoopField::is_zero() const {
  for (const TrigPoly& p : components)
    if (!p.is_zero()) return false;
  return true;
}

bool LoopField::based_admissible() const {
  for (const TrigPoly& p : components)
    if (!p.value_at_zero().is_zero()) return false;
  return true;
}

LoopField LoopField::operator-() const {
  LoopField r = *this;
  for (TrigPoly& p : r.components) p = -p;
  return r;
}

LoopField& LoopField::operator+=(const LoopField& o) {
  if (!(algebra == o.algebra))
    throw InvalidInput("loop fields live over different algebras");
  for (int j = 0; j < dim(); ++j) components[j] += o.components[j];
  return *this;
}

LoopField& LoopField::operator-=(const LoopField& o) {
  return *this += -o;
}

bool LoopField::operator==(const LoopField& o) const {
  return algebra == o.algebra && components == o.components;
}

LoopField bracket_fields(const LieAlgebraSpec& L, const LoopField& x,
                         const LoopField& y) {
  if (!(x.algebra == L) || !(y.algebra == L))
    throw InvalidInput("bracket_fields: fields must live over the given algebra");
  const int d = L.dim;
  std::vector<TrigPoly> comps(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Rat& c = L.c(k, i, j);
        if (c == 0) continue;
        if (x.components[i].is_zero() || y.components[j].is_zero()) continue;
        comps[k] += trig_scale(trig_mul(x.components[i], y.components[j]),
                               CCoeff(Coeff(c)));
      }
  }
  return LoopField(L, std::move(comps));
}

namespace {

// multiplier base^s for nonnegative integer base and rational s; exact
// when base is a perfect q-th power (s = p/q in lowest terms).
struct Multiplier {
  bool exact;
  Rat value;        // when exact
  long double fval; // otherwise
};

Multiplier power_multiplier(long base, const Rat& s) {
  Multiplier m{true, Rat(1), 1.0L};
  if (s == 0 || base == 1) return m;
  const mpz_class p = s.get_num();
  const mpz_class q = s.get_den();  // > 0 in canonical form
  if (!q.fits_ulong_p()) throw Error("exponent denominator too large");
  mpz_class root;
  const int exact_root =
      mpz_root(root.get_mpz_t(), mpz_class(base).get_mpz_t(), q.get_ui());
  if (exact_root != 0) {
    // base = root^q exactly, so base^{p/q} = root^p
    mpz_class power;
    mpz_class absp = abs(p);
    if (!absp.fits_ulong_p()) throw Error("exponent numerator too large");
    mpz_pow_ui(power.get_mpz_t(), root.get_mpz_t(), absp.get_ui());
    if (p >= 0)
      m.value = Rat(power);
    else
      m.value = Rat(1) / Rat(power);
    return m;
  }
  m.exact = false;
  m.fval = std::pow(static_cast<long double>(base), rat_to_long_double(s));
  return m;
}

CCoeff scale_coeff(const CCoeff& c, const Multiplier& m) {
  if (m.exact) return c * CCoeff(Coeff(m.value));
  return c * CCoeff(Coeff::approx(m.fval));
}

}  // namespace

FieldPower laplacian_power_apply(const LoopField& x, const Rat& s,
                                 Space space) {
  FieldPower out;
  out.exact = true;
  std::vector<TrigPoly> comps(static_cast<std::size_t>(x.dim()));
  for (int j = 0; j < x.dim(); ++j) {
    const TrigPoly& p = x.components[j];
    TrigPoly r;
    if (!p.constant_term().is_zero()) {
      if (space == Space::free) {
        r += TrigPoly::constant(p.constant_term());  // (1+0)^s = 1
      } else if (s > 0) {
        // zero eigenvalue: positive powers annihilate constants
      } else if (s == 0) {
        r += TrigPoly::constant(p.constant_term());
      } else {
        throw KernelViolation(
            "negative Laplacian power applied to a based-loop field with "
            "nonzero constant term");
      }
    }
    for (const auto& [n, h] : p.harmonics()) {
      const long base = space == Space::free ? 1 + static_cast<long>(n) * n
                                             : static_cast<long>(n) * n;
      // based multiplier n^{2s} = (n^2)^s
      Multiplier m = power_multiplier(base, s);
      if (!m.exact) out.exact = false;
      r.add_cos(n, scale_coeff(h.cs, m));
      r.add_sin(n, scale_coeff(h.sn, m));
    }
    comps[j] = std::move(r);
  }
  out.field.algebra = x.algebra;
  out.field.components = std::move(comps);
  return out;
}

}  // namespace loopcurv
